#pragma once

#include <cstdint>
#include <vector>

#include "netinfer/matrix.hpp"

namespace netinfer {

/// All numerical tolerances in one place.
namespace tol {
inline constexpr double kRowSum = 1e-12;             // stochastic row sums
inline constexpr double kStationaryResidual = 1e-10; // ||pi P - pi||_inf
inline constexpr double kPowerIter = 1e-12;          // power iteration convergence
inline constexpr double kPiHatIter = 1e-10;          // leading-eigenvector iteration
inline constexpr double kPiHatFloor = 1e-12;         // entries below this trigger fallback
inline constexpr double kSymmetry = 1e-12;           // symmetric-matrix checks
inline constexpr double kSvdOracle = 1e-8;           // agreement with the SVD oracle
inline constexpr double kScoreSymmetry = 1e-9;       // top-m auto-symmetrisation trigger
inline constexpr int kPowerIterMax = 100000;
inline constexpr int kPiHatIterMax = 10000;
}  // namespace tol

/// Largest singular value, by power iteration on A^T A.
double operator_norm(const Mat& a);

struct SpectralSummary {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double gap = 0.0;  // 1 - sigma2^2
};

/// sigma1 and sigma2 by power iteration with one deflation step.
SpectralSummary spectral_summary(const Mat& a);

struct KMeansResult {
    Mat centroids;                // k x d
    std::vector<int> assignment;  // one entry per point
    double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding; `restarts` independent runs,
/// best inertia kept. Points are rows of `points`. Empty clusters are
/// re-seeded from the farthest point. Throws DegenerateInput when fewer than
/// k distinct points exist.
KMeansResult kmeans(const Mat& points, int k, std::uint64_t seed, int restarts = 20);

}  // namespace netinfer
