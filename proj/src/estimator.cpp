#include "netinfer/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netinfer/errors.hpp"
#include "netinfer/numerics.hpp"

namespace netinfer {

EstimatorState::EstimatorState(int n) : n_(n) {
    if (n < 1) throw ConfigError("estimator needs at least one node");
    pair_.assign(static_cast<std::size_t>(n) * n, 0);
    visit_.assign(n, 0);
    prev_.assign(n, 0);
}

void EstimatorState::ingest_step(std::span<const std::int32_t> column) {
    if (static_cast<int>(column.size()) != n_)
        throw DimensionMismatch("column length " + std::to_string(column.size()) +
                                " != n = " + std::to_string(n_));
    std::vector<int> active;
    for (int v = 0; v < n_; ++v) {
        if (column[v] < 0) throw ConfigError("occupancy counts must be nonnegative");
        if (column[v] > 0) {
            active.push_back(v);
            nnz_ += column[v];  // on binary input this is the nonzero-cell count
        }
    }
    if (steps_ > 0) {
        if (!prev_active_.empty() && !active.empty()) ++consecutive_active_;
        for (int u : prev_active_) {
            const std::int64_t su = prev_[u];
            visit_[u] += su;
            for (int v : active)
                pair_[static_cast<std::size_t>(u) * n_ + v] += su * column[v];
        }
    }
    for (int v : prev_active_) prev_[v] = 0;
    for (int v : active) prev_[v] = column[v];
    prev_active_ = std::move(active);
    ++steps_;
}

void EstimatorState::ingest_step(std::span<const std::uint8_t> column) {
    std::vector<std::int32_t> col(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) col[i] = column[i] ? 1 : 0;
    ingest_step(std::span<const std::int32_t>(col));
}

void EstimatorState::ingest(const TimeSeries& ts) {
    if (ts.n != n_) throw DimensionMismatch("time series node count != n");
    std::vector<std::int32_t> col(n_);
    for (long t = 0; t < ts.T; ++t) {
        for (int v = 0; v < n_; ++v) col[v] = ts.at(v, t);
        ingest_step(std::span<const std::int32_t>(col));
    }
}

void EstimatorState::ingest(const OccupancyTrace& trace) {
    if (trace.n != n_) throw DimensionMismatch("occupancy node count != n");
    for (long t = 0; t < trace.T; ++t) ingest_step(trace.step(t));
}

double estimate_k(const EstimatorState& state) {
    if (state.consecutive_active_intervals() == 0)
        throw NoConsecutiveActivity("no pair of consecutive active intervals seen");
    double k_hat = static_cast<double>(state.nnz_total()) /
                   static_cast<double>(state.consecutive_active_intervals());
    return std::max(k_hat, 1.0);
}

Mat laplacian(const Mat& p_hat, std::span<const double> pi) {
    const std::size_t n = p_hat.rows();
    for (std::size_t v = 0; v < n; ++v)
        if (!(pi[v] > 0.0))
            throw NonPositivePi("pi_hat[" + std::to_string(v) + "] = " + std::to_string(pi[v]));
    Mat l(n, n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            l(u, v) = std::sqrt(pi[v] / pi[u]) * p_hat(u, v);
    return l;
}

Mat symmetric_laplacian(const Mat& p_hat, std::span<const double> pi) {
    const std::size_t n = p_hat.rows();
    for (std::size_t v = 0; v < n; ++v)
        if (!(pi[v] > 0.0))
            throw NonPositivePi("pi_hat[" + std::to_string(v) + "] = " + std::to_string(pi[v]));
    Mat l(n, n);
    for (std::size_t u = 0; u < n; ++u) {
        l(u, u) = p_hat(u, u);
        for (std::size_t v = u + 1; v < n; ++v) {
            double w = std::sqrt(pi[v] / pi[u]) * 0.5 * (p_hat(u, v) + p_hat(v, u));
            l(u, v) = w;
            l(v, u) = w;
        }
    }
    return l;
}

namespace {

// Leading left eigenvector of P_hat by power iteration on its transpose,
// projective normalisation (divide by the coordinate sum). Returns empty on
// failure; the caller falls back to the empirical frequencies.
std::vector<double> leading_left_eigenvector(const Mat& p_hat, std::vector<double> x) {
    const std::size_t n = p_hat.rows();
    double s0 = 0.0;
    for (double v : x) s0 += v;
    if (s0 <= 0.0) return {};
    for (double& v : x) v /= s0;
    std::vector<double> next(n);
    for (int it = 0; it < tol::kPiHatIterMax; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t u = 0; u < n; ++u) {
            auto row = p_hat.row(u);
            for (std::size_t v = 0; v < n; ++v) next[v] += row[v] * x[u];
        }
        double s = 0.0;
        for (double v : next) s += v;
        if (!(std::abs(s) > 1e-300)) return {};
        for (double& v : next) v /= s;
        double delta = max_abs_diff(next, x);
        x.swap(next);
        if (delta <= tol::kPiHatIter) {
            for (double v : x)
                if (!(v > tol::kPiHatFloor)) return {};  // collapsed entry
            return x;
        }
    }
    return {};
}

}  // namespace

EstimateBundle finalize(const EstimatorState& state, std::optional<double> k) {
    const int n = state.n();
    const long T = state.steps_seen();
    if (T < 2) throw ConfigError("finalize needs at least two ingested steps");

    EstimateBundle b;
    b.n = n;
    b.steps = T;
    b.k_used = k ? *k : estimate_k(state);
    if (b.k_used < 1.0) throw ConfigError("k must be >= 1");

    b.m = Mat(n, n);
    for (int u = 0; u < n; ++u) {
        const std::int64_t nu = state.visit_count(u);
        if (nu == 0) {
            b.silent_nodes.push_back(u);  // row of M stays zero
            continue;
        }
        for (int v = 0; v < n; ++v)
            b.m(u, v) = static_cast<double>(state.pair_count(u, v)) / static_cast<double>(nu);
    }

    const double kt = b.k_used * static_cast<double>(T);
    std::vector<double> freq(n);
    for (int v = 0; v < n; ++v) freq[v] = static_cast<double>(state.visit_count(v)) / kt;

    b.pi_hat_mat = Mat(n, n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) b.pi_hat_mat(u, v) = freq[v];

    b.p_hat = Mat(n, n);
    const double corr = b.k_used - 1.0;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) b.p_hat(u, v) = b.m(u, v) - corr * b.pi_hat_mat(u, v);

    b.pi_hat = leading_left_eigenvector(b.p_hat, freq);
    if (b.pi_hat.empty()) {
        b.pi_hat = freq;
        b.pi_from_fallback = true;
    }

    try {
        b.l_hat = laplacian(b.p_hat, b.pi_hat);
        b.l_sym = symmetric_laplacian(b.p_hat, b.pi_hat);
    } catch (const NonPositivePi& e) {
        std::string silent;
        for (int u : b.silent_nodes) silent += (silent.empty() ? "" : ",") + std::to_string(u);
        throw NonPositivePi(std::string(e.what()) +
                            (silent.empty() ? "" : " (silent nodes: " + silent + ")"));
    }
    return b;
}

}  // namespace netinfer
