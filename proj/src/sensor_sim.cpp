#include "netinfer/sensor_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "netinfer/errors.hpp"
#include "netinfer/numerics.hpp"

namespace netinfer {

double received_power_dbm(const SensorField& field, double distance_m) {
    if (distance_m < 0.1)
        throw ZeroDistance("sensor within 0.1 m of a transmitter");
    return field.tx_power_dbm -
           (field.reference_loss_db + 10.0 * field.path_loss_exponent * std::log10(distance_m));
}

PowerMatrix detect_power(std::span<const TransmissionEvent> events, const SensorField& field,
                         const Topology& topo, const TrafficConfig& cfg) {
    if (!topo.positions()) throw ConfigError("detect_power needs transmitter positions");
    if (field.sensor_positions.empty()) throw ConfigError("detect_power needs sensors");
    const auto& tx = *topo.positions();
    const int s = static_cast<int>(field.sensor_positions.size());
    const int n = topo.node_count();
    const long T = cfg.bin_count();

    // Precompute per (node, sensor) received power; validates distances.
    Mat rx(n, s);
    for (int u = 0; u < n; ++u)
        for (int j = 0; j < s; ++j)
            rx(u, j) = received_power_dbm(field, distance(tx[u], field.sensor_positions[j]));

    // A node transmitting in a bin is one burst, however many packets it sent.
    std::map<long, std::set<int>> bursts;
    for (const auto& e : events) {
        long bin = static_cast<long>(e.time / cfg.interval_seconds);
        if (bin < 0 || bin >= T) continue;
        bursts[bin].insert(e.node);
    }

    PowerMatrix pd;
    pd.sensors = s;
    std::vector<double> column(s);
    std::vector<std::vector<double>> kept_columns;
    for (const auto& [bin, nodes] : bursts) {
        bool any_above = false;
        for (int j = 0; j < s; ++j) {
            double combined;
            if (field.combine == BurstCombine::kMax) {
                combined = -std::numeric_limits<double>::infinity();
                for (int u : nodes) combined = std::max(combined, rx(u, j));
            } else {
                double mw = 0.0;
                for (int u : nodes) mw += std::pow(10.0, rx(u, j) / 10.0);
                combined = 10.0 * std::log10(mw);
            }
            if (combined > field.noise_floor_dbm) any_above = true;
            column[j] = std::max(combined, field.noise_floor_dbm);
        }
        if (!any_above) continue;  // discard: no burst detected anywhere
        kept_columns.push_back(column);
        pd.interval_index.push_back(bin);
    }
    pd.kept = static_cast<long>(kept_columns.size());
    pd.values = Mat(s, pd.kept);
    for (long c = 0; c < pd.kept; ++c)
        for (int j = 0; j < s; ++j) pd.values(j, c) = kept_columns[c][j];
    return pd;
}

std::vector<int> cluster_bursts(const PowerMatrix& pd, int n, std::uint64_t seed,
                                const ClusterOptions& opts) {
    if (pd.kept < n) throw DegenerateClustering("fewer kept intervals than transmitters");
    Mat points(pd.kept, pd.sensors);
    for (long c = 0; c < pd.kept; ++c)
        for (int j = 0; j < pd.sensors; ++j)
            points(c, j) = opts.linear_power ? std::pow(10.0, pd.values(j, c) / 10.0)
                                             : pd.values(j, c);
    try {
        return kmeans(points, n, seed, opts.restarts).assignment;
    } catch (const DegenerateInput& e) {
        throw DegenerateClustering(e.what());
    }
}

std::vector<int> interval_ground_truth(std::span<const TransmissionEvent> events,
                                       const TrafficConfig& cfg,
                                       std::span<const long> interval_index) {
    std::map<long, std::set<int>> bursts;
    for (const auto& e : events) {
        long bin = static_cast<long>(e.time / cfg.interval_seconds);
        bursts[bin].insert(e.node);
    }
    std::vector<int> truth;
    truth.reserve(interval_index.size());
    for (long bin : interval_index) {
        auto it = bursts.find(bin);
        if (it == bursts.end() || it->second.empty())
            throw ConfigError("kept interval has no recorded burst");
        truth.push_back(it->second.size() == 1 ? *it->second.begin() : -1);
    }
    return truth;
}

Reconstruction label_and_reconstruct(std::span<const int> assignment,
                                     std::span<const int> ground_truth, int n, long total_bins,
                                     std::span<const long> interval_index) {
    if (assignment.size() != ground_truth.size() || assignment.size() != interval_index.size())
        throw DimensionMismatch("assignment/ground-truth/interval length mismatch");

    int clusters = 0;
    for (int c : assignment) clusters = std::max(clusters, c + 1);

    // majority transmitter per cluster, ties to the smaller node index
    Mat votes(clusters, n);
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (ground_truth[i] >= 0) votes(assignment[i], ground_truth[i]) += 1.0;

    Reconstruction rec;
    rec.cluster_label.assign(clusters, -1);
    for (int c = 0; c < clusters; ++c) {
        double best = 0.0;
        for (int u = 0; u < n; ++u)
            if (votes(c, u) > best) {
                best = votes(c, u);
                rec.cluster_label[c] = u;
            }
    }

    rec.ts = TimeSeries(n, total_bins);
    long correct = 0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        int label = rec.cluster_label[assignment[i]];
        if (label >= 0) rec.ts.set(label, interval_index[i], 1);
        if (label >= 0 && label == ground_truth[i]) ++correct;
    }
    rec.accuracy = assignment.empty() ? 0.0 : static_cast<double>(correct) / assignment.size();
    return rec;
}

}  // namespace netinfer
