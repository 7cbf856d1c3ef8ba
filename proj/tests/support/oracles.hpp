#pragma once

// Independent brute-force oracles used to freeze expected values. These must
// stay decoupled from the library code paths they check.

#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "netinfer/markov_sim.hpp"
#include "netinfer/matrix.hpp"
#include "netinfer/topology.hpp"

namespace netinfer::testing {

/// Stationary distribution by direct linear solve of (P^T - I) pi = 0 with
/// the normalisation row sum(pi) = 1 (Gaussian elimination, partial pivot).
inline std::vector<double> stationary_by_linear_solve(const Mat& p) {
    const std::size_t n = p.rows();
    // rows 0..n-2: (P^T - I), last row: all ones = 1
    std::vector<std::vector<double>> aug(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t r = 0; r + 1 < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug[r][c] = p(c, r) - (r == c ? 1.0 : 0.0);
    }
    for (std::size_t c = 0; c < n; ++c) aug[n - 1][c] = 1.0;
    aug[n - 1][n] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
        std::swap(aug[col], aug[pivot]);
        if (std::abs(aug[col][col]) < 1e-14) throw std::runtime_error("singular system");
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = aug[r][col] / aug[col][col];
            for (std::size_t c = col; c <= n; ++c) aug[r][c] -= f * aug[col][c];
        }
    }
    std::vector<double> pi(n);
    for (std::size_t i = 0; i < n; ++i) pi[i] = aug[i][n] / aug[i][i];
    return pi;
}

/// Average shortest-path length over ordered pairs u != v, by plain BFS.
inline double average_shortest_path(const Topology& topo) {
    const int n = topo.node_count();
    long total = 0;
    long pairs = 0;
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::deque<int> q{s};
        dist[s] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v : topo.adjacency()[u])
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
        }
        for (int t = 0; t < n; ++t)
            if (t != s) {
                total += dist[t];
                ++pairs;
            }
    }
    return static_cast<double>(total) / static_cast<double>(pairs);
}

/// Brute-force transfer entropy: enumerates every (history, source, next)
/// combination in ascending order and counts matches by scanning all valid
/// windows. Same per-term expression as a plug-in estimator must use.
inline double te_brute_force(std::span<const std::uint8_t> src,
                             std::span<const std::uint8_t> tgt, int d, int l) {
    const long len = static_cast<long>(tgt.size());
    const long t0 = std::max(d, l) - 1;
    const long total = len - 1 - t0;
    if (total < 1) throw std::runtime_error("series too short for oracle");

    auto hist_at = [&](long t) {
        std::uint64_t h = 0;
        for (int a = 0; a < d; ++a) h = (h << 1) | (tgt[t - d + 1 + a] ? 1u : 0u);
        return h;
    };
    auto src_at = [&](long t) {
        std::uint64_t y = 0;
        for (int a = 0; a < l; ++a) y = (y << 1) | (src[t - l + 1 + a] ? 1u : 0u);
        return y;
    };

    double te = 0.0;
    for (std::uint64_t h = 0; h < (std::uint64_t{1} << d); ++h) {
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << l); ++y) {
            for (std::uint64_t x = 0; x < 2; ++x) {
                std::int64_t c1 = 0, c2 = 0, c3 = 0, c4 = 0;
                for (long t = t0; t + 1 < len; ++t) {
                    bool mh = hist_at(t) == h;
                    bool my = src_at(t) == y;
                    bool mx = (tgt[t + 1] ? 1u : 0u) == x;
                    if (mh) ++c4;
                    if (mh && my) ++c2;
                    if (mh && mx) ++c3;
                    if (mh && my && mx) ++c1;
                }
                if (c1 == 0) continue;
                te += (static_cast<double>(c1) / static_cast<double>(total)) *
                      std::log2((static_cast<double>(c1) * static_cast<double>(c4)) /
                                (static_cast<double>(c2) * static_cast<double>(c3)));
            }
        }
    }
    return te;
}

/// Batch transition counts straight off a full time-series matrix.
struct BatchCounts {
    Mat pair_counts;               // N(u,v)
    std::vector<double> visits;    // N(u), t < T
    std::int64_t nnz = 0;
    std::int64_t consecutive = 0;
};

inline BatchCounts batch_counts(const TimeSeries& ts) {
    BatchCounts b;
    b.pair_counts = Mat(ts.n, ts.n);
    b.visits.assign(ts.n, 0.0);
    for (long t = 0; t < ts.T; ++t) {
        bool active_t = false;
        for (int v = 0; v < ts.n; ++v)
            if (ts.at(v, t)) {
                active_t = true;
                ++b.nnz;
            }
        if (t + 1 < ts.T) {
            bool active_next = false;
            for (int v = 0; v < ts.n; ++v)
                if (ts.at(v, t + 1)) active_next = true;
            if (active_t && active_next) ++b.consecutive;
            for (int u = 0; u < ts.n; ++u) {
                if (!ts.at(u, t)) continue;
                b.visits[u] += 1.0;
                for (int v = 0; v < ts.n; ++v)
                    if (ts.at(v, t + 1)) b.pair_counts(u, v) += 1.0;
            }
        }
    }
    return b;
}

}  // namespace netinfer::testing
