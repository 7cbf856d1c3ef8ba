#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netinfer/estimator.hpp"
#include "netinfer/sensor_sim.hpp"
#include "netinfer/te.hpp"
#include "netinfer/topology.hpp"

namespace netinfer {

struct TopMResult {
    double fraction = 0.0;
    bool symmetrised = false;  // input was not symmetric and got averaged
    std::vector<std::pair<int, int>> selected;
};

/// Fraction of true links among the m largest strictly-upper-triangular
/// entries, m = |E(truth)|. Ties broken by the smaller (u,v) pair.
TopMResult top_m_details(const Mat& score, const Topology& truth);
double top_m_score(const Mat& score, const Topology& truth);

struct TopologySpec {
    std::string kind = "cycle";  // cycle | path | grid | edges | geometric
    int n = 6;
    int rows = 3;
    int cols = 3;
    int count = 25;
    std::vector<std::pair<int, int>> edges;
    double box_w = 120.0;
    double box_h = 120.0;
    double comm_range = 50.0;
    std::uint64_t placement_seed = 1;

    Topology build() const;
};

struct SensorSpec {
    int count = 100;
    double box_w = 120.0;
    double box_h = 120.0;
    std::uint64_t placement_seed = 2;
    bool per_seed_placement = true;  // re-place sensors per replication
    double min_tx_distance = 0.5;    // placement keeps sensors at least this far from nodes
    SensorField field;               // sensor_positions filled by the harness
};

struct EstimatorSpec {
    std::optional<double> k_override;
    int kmeans_restarts = 20;
    bool kmeans_linear_power = false;
};

struct EvalSpec {
    std::string mode = "traffic";  // chains | traffic | sensors
    std::vector<double> windows{15.0};
    int replications = 50;
    std::uint64_t seed = 1;
    std::vector<std::string> methods{"markov", "te"};
    int chains_k = 1;
    int threads = 0;  // 0 = hardware concurrency
};

struct Config {
    TopologySpec topology;
    TrafficConfig traffic;
    SensorSpec sensors;
    EstimatorSpec estimator;
    TEConfig te;
    EvalSpec eval;

    static Config from_json_string(const std::string& text);
    static Config from_json_file(const std::string& path);
};

struct EvalReport {
    std::string method;
    double window_seconds = 0.0;
    int replications = 0;
    double proportion_correct = 0.0;
    double ci95 = 0.0;
    std::vector<double> per_seed;
    double mean_k_hat = 0.0;
    double mean_collisions = 0.0;
    std::optional<double> mean_clustering_accuracy;
    std::vector<std::string> failures;
};

/// One simulated replication: the observed time series plus diagnostics.
struct SimResult {
    TimeSeries ts;
    long collisions = 0;  // multi-transmitter (t,v) cells in the ideal series
    std::optional<double> clustering_accuracy;
};

/// Simulate one replication of the configured scenario at the given window.
SimResult run_scenario(const Config& cfg, double window_seconds, std::uint64_t seed);

/// Score one method ("markov" -> L_sym ranking, "te" -> symmetrised TE) on a
/// simulated series. Second element is the k estimate diagnostic.
std::pair<double, double> score_method(const Config& cfg, const std::string& method,
                                       const TimeSeries& ts, const Topology& truth);

/// Windows x methods evaluation with per-seed replication; seeds fan out to a
/// worker pool, aggregation is a deterministic fold in seed order. Per-seed
/// failures are recorded in the report, not fatal.
std::vector<EvalReport> sweep(const Config& cfg);

/// Report set serialized as JSON (stable key order). `timestamp` adds a
/// generated_at field; comparison mode leaves it out.
std::string reports_to_json(std::span<const EvalReport> reports, bool timestamp);

}  // namespace netinfer
