#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "netinfer/topology.hpp"

namespace netinfer {

/// Binary node x time transmission matrix.
struct TimeSeries {
    int n = 0;
    long T = 0;
    std::vector<std::uint8_t> bits;  // row-major, n rows of length T

    TimeSeries() = default;
    TimeSeries(int n_, long t_) : n(n_), T(t_), bits(static_cast<std::size_t>(n_) * t_, 0) {}

    std::uint8_t at(int v, long t) const { return bits[static_cast<std::size_t>(v) * T + t]; }
    void set(int v, long t, std::uint8_t b) { bits[static_cast<std::size_t>(v) * T + t] = b; }
    std::span<const std::uint8_t> node_row(int v) const {
        return {bits.data() + static_cast<std::size_t>(v) * T, static_cast<std::size_t>(T)};
    }
};

/// Per-step occupancy counts of k chains, plus (optionally) the trajectories.
struct OccupancyTrace {
    int k = 0;
    int n = 0;
    long T = 0;
    std::vector<std::int32_t> counts;                  // row-major, T rows of length n
    std::optional<std::vector<std::int32_t>> trajectories;  // row-major, k rows of length T

    std::int32_t at(long t, int v) const { return counts[static_cast<std::size_t>(t) * n + v]; }
    std::span<const std::int32_t> step(long t) const {
        return {counts.data() + static_cast<std::size_t>(t) * n, static_cast<std::size_t>(n)};
    }
    std::int32_t chain_at(int i, long t) const {
        return (*trajectories)[static_cast<std::size_t>(i) * T + t];
    }
};

struct SimulateOptions {
    /// Defaults to the stationary distribution of P.
    std::optional<std::vector<double>> start_distribution;
    bool keep_trajectories = true;
};

/// k independent chains on P for T steps. Chain i draws from RNG substream i
/// of `seed`, so results are reproducible and independent of scheduling.
OccupancyTrace simulate_chains(const TransitionMatrix& p, int k, long T, std::uint64_t seed,
                               const SimulateOptions& opts = {});

/// Collapse occupancy to the binary time series; second element counts the
/// (t,v) cells with two or more chains (undetectable collisions).
std::pair<TimeSeries, long> to_time_series(const OccupancyTrace& trace);

}  // namespace netinfer
