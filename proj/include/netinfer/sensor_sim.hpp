#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netinfer/traffic_sim.hpp"

namespace netinfer {

/// How concurrent bursts combine at one sensor within one interval.
enum class BurstCombine { kMax, kLinearSum };

struct SensorField {
    std::vector<Vec2> sensor_positions;
    double tx_power_dbm = 16.0;
    double path_loss_exponent = 3.0;
    double reference_loss_db = 46.7;  // at 1 m
    double noise_floor_dbm = -95.0;
    BurstCombine combine = BurstCombine::kMax;
};

/// Log-distance received power at `distance_m` from the transmitter.
/// Throws ZeroDistance below 0.1 m.
double received_power_dbm(const SensorField& field, double distance_m);

/// Sensor power readings for the intervals in which at least one burst rose
/// above the noise floor. Column j of `values` is the original bin
/// interval_index[j].
struct PowerMatrix {
    int sensors = 0;
    long kept = 0;
    Mat values;                        // sensors x kept, dBm, noise-floored
    std::vector<long> interval_index;  // kept -> original bin
};

PowerMatrix detect_power(std::span<const TransmissionEvent> events, const SensorField& field,
                         const Topology& topo, const TrafficConfig& cfg);

struct ClusterOptions {
    int restarts = 20;
    bool linear_power = false;  // cluster in mW instead of dBm
};

/// k-means (k = n) over the kept power columns; returns one cluster id per
/// kept interval. Throws DegenerateClustering when fewer than n distinct
/// columns exist.
std::vector<int> cluster_bursts(const PowerMatrix& pd, int n, std::uint64_t seed,
                                const ClusterOptions& opts = {});

/// True transmitter per kept interval: the node if exactly one node
/// transmitted in that bin, -1 when bursts superpose (counted as incorrect).
std::vector<int> interval_ground_truth(std::span<const TransmissionEvent> events,
                                       const TrafficConfig& cfg,
                                       std::span<const long> interval_index);

struct Reconstruction {
    TimeSeries ts;
    double accuracy = 0.0;
    std::vector<int> cluster_label;  // cluster id -> node (-1 if unlabelable)
};

/// Labels each cluster by its majority transmitter (ties to the smaller node
/// index) and rebuilds a time series with a 1 at (label, bin) per interval.
Reconstruction label_and_reconstruct(std::span<const int> assignment,
                                     std::span<const int> ground_truth, int n, long total_bins,
                                     std::span<const long> interval_index);

}  // namespace netinfer
