#pragma once

#include <cstdint>
#include <span>

#include "netinfer/markov_sim.hpp"
#include "netinfer/matrix.hpp"

namespace netinfer {

struct TEConfig {
    int history_d = 5;      // target history length
    int source_history = 1; // cited-tool convention; switchable for sensitivity runs
    void validate() const;  // 1 <= d <= 16, 1 <= source_history <= 16
};

/// Plug-in transfer entropy (bits) from `source` to `target`:
///   TE = sum p(x_{t+1}, x_t^(d), y_t^(l)) log2 p(x_{t+1}|x_t^(d),y) / p(x_{t+1}|x_t^(d))
/// Counts over all valid windows, natural counts, 0 log 0 = 0. Terms are
/// accumulated in ascending (history, source, next) order so independent
/// re-implementations with the same count source agree bit-for-bit.
double transfer_entropy(std::span<const std::uint8_t> source,
                        std::span<const std::uint8_t> target, const TEConfig& cfg = {});

/// Pairwise TE matrix, averaged with its transpose, diagonal zeroed.
Mat te_matrix(const TimeSeries& ts, const TEConfig& cfg = {});

namespace detail {
/// Force the sorted-key counting path (used above 22 key bits); the dense
/// and sparse paths must agree bit-for-bit.
double transfer_entropy_sparse(std::span<const std::uint8_t> source,
                               std::span<const std::uint8_t> target, const TEConfig& cfg);
}  // namespace detail

}  // namespace netinfer
