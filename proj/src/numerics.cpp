#include "netinfer/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "netinfer/errors.hpp"
#include "netinfer/rng.hpp"

namespace netinfer {

namespace {

// One power-iteration run on A^T A from a seeded random start. Returns
// (sigma, right singular vector); sigma converges even when the top singular
// value is repeated.
std::pair<double, std::vector<double>> top_singular_pair(const Mat& a, std::uint64_t start_seed) {
    const std::size_t n = a.cols();
    Rng rng(0x5eedULL, start_seed);
    std::vector<double> v(n);
    for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
    double nv = norm2(v);
    for (auto& x : v) x /= nv;

    double sigma = 0.0;
    for (int it = 0; it < tol::kPowerIterMax; ++it) {
        std::vector<double> av = matvec(a, v);
        std::vector<double> w = matvec_transposed(a, av);
        double nw = norm2(w);
        if (nw == 0.0) return {0.0, v};  // v in the null space: norm along it is 0
        for (auto& x : w) x /= nw;
        double sigma_new = norm2(matvec(a, w));
        double dv = max_abs_diff(w, v);
        v.swap(w);
        bool value_settled = std::abs(sigma_new - sigma) <= tol::kPowerIter * std::max(1.0, sigma_new);
        sigma = sigma_new;
        if (value_settled && dv <= 1e-11) return {sigma, v};
    }
    throw NoConvergence("singular value power iteration did not converge");
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

struct LloydRun {
    Mat centroids;
    std::vector<int> assignment;
    double inertia = std::numeric_limits<double>::infinity();
};

LloydRun lloyd_once(const Mat& points, int k, Rng rng) {
    const std::size_t npts = points.rows();
    const std::size_t dim = points.cols();

    // k-means++ seeding
    Mat centroids(k, dim);
    std::vector<double> d2(npts, std::numeric_limits<double>::infinity());
    std::size_t first = rng.below(npts);
    for (std::size_t j = 0; j < dim; ++j) centroids(0, j) = points(first, j);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < npts; ++i) {
            d2[i] = std::min(d2[i], sq_dist(points.row(i), centroids.row(c - 1)));
            total += d2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < npts; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
                pick = i;
            }
        } else {
            pick = rng.below(npts);
        }
        for (std::size_t j = 0; j < dim; ++j) centroids(c, j) = points(pick, j);
    }

    std::vector<int> assignment(npts, -1);
    std::vector<double> min_d(npts, 0.0);
    double prev_inertia = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 1000; ++iter) {
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < npts; ++i) {
            int best = 0;
            double bestd = sq_dist(points.row(i), centroids.row(0));
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(points.row(i), centroids.row(c));
                if (d < bestd) {
                    bestd = d;
                    best = c;
                }
            }
            if (assignment[i] != best) changed = true;
            assignment[i] = best;
            min_d[i] = bestd;
            inertia += bestd;
        }
        if (inertia > prev_inertia * (1.0 + 1e-12) + 1e-12)
            throw std::logic_error("kmeans inertia increased across a Lloyd iteration");
        prev_inertia = inertia;
        if (!changed && iter > 0) return {std::move(centroids), std::move(assignment), inertia};

        // recompute means
        Mat sums(k, dim);
        std::vector<long> counts(k, 0);
        for (std::size_t i = 0; i < npts; ++i) {
            ++counts[assignment[i]];
            auto row = points.row(i);
            for (std::size_t j = 0; j < dim; ++j) sums(assignment[i], j) += row[j];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (std::size_t j = 0; j < dim; ++j) centroids(c, j) = sums(c, j) / counts[c];
            } else {
                // re-seed an empty cluster at the farthest point
                std::size_t far = 0;
                double fd = -1.0;
                for (std::size_t i = 0; i < npts; ++i)
                    if (min_d[i] > fd) {
                        fd = min_d[i];
                        far = i;
                    }
                for (std::size_t j = 0; j < dim; ++j) centroids(c, j) = points(far, j);
                min_d[far] = 0.0;
                prev_inertia = std::numeric_limits<double>::infinity();
            }
        }
    }
    return {std::move(centroids), std::move(assignment), prev_inertia};
}

}  // namespace

double operator_norm(const Mat& a) {
    if (a.empty()) return 0.0;
    for (double x : a.data())
        if (!std::isfinite(x)) throw ConfigError("operator_norm: entries must be finite");

    double best = 0.0;
    std::vector<double> col(a.rows());
    double max_col = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) col[i] = a(i, j);
        max_col = std::max(max_col, norm2(col));
    }
    const double sanity = max_col / std::sqrt(static_cast<double>(a.cols()));
    for (std::uint64_t restart = 0; restart < 3; ++restart) {
        auto [sigma, v] = top_singular_pair(a, restart);
        best = std::max(best, sigma);
        if (best + 1e-9 >= sanity) return best;
    }
    throw NoConvergence("operator_norm below its column-norm sanity bound");
}

SpectralSummary spectral_summary(const Mat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("spectral_summary needs a square matrix");
    SpectralSummary s;
    auto [sigma1, v1] = top_singular_pair(a, 0);
    s.sigma1 = sigma1;
    if (sigma1 == 0.0) {
        s.sigma2 = 0.0;
    } else {
        // deflate the top pair and re-run
        std::vector<double> u1 = matvec(a, v1);
        double nu = norm2(u1);
        for (auto& x : u1) x /= (nu == 0.0 ? 1.0 : nu);
        Mat deflated = a;
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                deflated(i, j) -= sigma1 * u1[i] * v1[j];
        auto [sigma2, v2] = top_singular_pair(deflated, 1);
        (void)v2;
        s.sigma2 = std::min(sigma2, sigma1);
    }
    s.gap = 1.0 - s.sigma2 * s.sigma2;
    return s;
}

KMeansResult kmeans(const Mat& points, int k, std::uint64_t seed, int restarts) {
    if (k < 1) throw ConfigError("kmeans: k must be positive");
    if (points.rows() < static_cast<std::size_t>(k))
        throw DegenerateInput("kmeans: fewer points than clusters");

    std::set<std::vector<double>> distinct;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        auto r = points.row(i);
        distinct.insert(std::vector<double>(r.begin(), r.end()));
        if (distinct.size() >= static_cast<std::size_t>(k)) break;
    }
    if (distinct.size() < static_cast<std::size_t>(k))
        throw DegenerateInput("kmeans: fewer than k distinct points");

    LloydRun best;
    for (int r = 0; r < restarts; ++r) {
        LloydRun run = lloyd_once(points, k, Rng(seed, static_cast<std::uint64_t>(r)));
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return {std::move(best.centroids), std::move(best.assignment), best.inertia};
}

}  // namespace netinfer
