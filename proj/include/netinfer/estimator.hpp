#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "netinfer/markov_sim.hpp"
#include "netinfer/matrix.hpp"

namespace netinfer {

/// Streaming transition counts over a node x time activity stream. Accepts
/// either exact occupancy columns or binary columns; O(active^2) per step.
class EstimatorState {
  public:
    explicit EstimatorState(int n);

    /// Ingest the occupancy (or 0/1) column for the next time step.
    void ingest_step(std::span<const std::int32_t> column);
    void ingest_step(std::span<const std::uint8_t> column);

    void ingest(const TimeSeries& ts);
    void ingest(const OccupancyTrace& trace);

    int n() const { return n_; }
    long steps_seen() const { return steps_; }
    /// N(u,v): activity at u immediately followed by activity at v.
    std::int64_t pair_count(int u, int v) const { return pair_[static_cast<std::size_t>(u) * n_ + v]; }
    /// N(u): total activity of u over all steps but the last.
    std::int64_t visit_count(int u) const { return visit_[u]; }
    /// Total activity over all steps: the nonzero-cell count for binary
    /// input, the occupancy mass for exact counts.
    std::int64_t nnz_total() const { return nnz_; }
    /// Steps t with activity at both t and t+1.
    std::int64_t consecutive_active_intervals() const { return consecutive_active_; }

  private:
    int n_;
    long steps_ = 0;
    std::vector<std::int64_t> pair_;
    std::vector<std::int64_t> visit_;
    std::int64_t nnz_ = 0;
    std::int64_t consecutive_active_ = 0;
    std::vector<std::int32_t> prev_;
    std::vector<int> prev_active_;
};

/// k_hat = nnz(TS) / #{t: activity at t and t+1}, clamped to >= 1.
/// Throws NoConsecutiveActivity when the denominator is zero.
double estimate_k(const EstimatorState& state);

struct EstimateBundle {
    int n = 0;
    long steps = 0;
    double k_used = 1.0;
    Mat m;           // M(u,v) = N(u,v)/N(u); silent rows zeroed
    Mat pi_hat_mat;  // constant rows N(v)/(kT)
    Mat p_hat;       // M - (k-1) * pi_hat_mat
    std::vector<double> pi_hat;
    bool pi_from_fallback = false;
    Mat l_hat;
    Mat l_sym;
    std::vector<int> silent_nodes;  // nodes with N(u) = 0
};

/// L_hat(u,v) = sqrt(pi(v)/pi(u)) * P_hat(u,v). Throws NonPositivePi.
Mat laplacian(const Mat& p_hat, std::span<const double> pi);

/// Symmetrised Laplacian: for u < v both (u,v) and (v,u) carry
/// sqrt(pi(v)/pi(u)) * (P_hat(u,v)+P_hat(v,u))/2, so the matrix is symmetric
/// by construction and the upper triangle follows the estimator formula.
/// Throws NonPositivePi.
Mat symmetric_laplacian(const Mat& p_hat, std::span<const double> pi);

/// Closes the counts into the full estimate. k defaults to estimate_k(state).
/// pi_hat is the leading left eigenvector of P_hat (power iteration from the
/// empirical frequencies; falls back to N(v)/(kT) when iteration fails or an
/// entry collapses). Propagates NonPositivePi if the Laplacians are not
/// computable, listing the silent nodes in the message.
EstimateBundle finalize(const EstimatorState& state, std::optional<double> k = std::nullopt);

}  // namespace netinfer
