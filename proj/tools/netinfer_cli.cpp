// netinfer command line: simulate traffic or walkers, reconstruct series
// from sensor power readings, estimate the transition structure, score it
// against a ground-truth topology, and run window sweeps.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "netinfer/errors.hpp"
#include "netinfer/estimator.hpp"
#include "netinfer/harness.hpp"
#include "netinfer/io.hpp"
#include "netinfer/markov_sim.hpp"
#include "netinfer/rng.hpp"
#include "netinfer/sensor_sim.hpp"
#include "netinfer/te.hpp"
#include "netinfer/traffic_sim.hpp"

namespace fs = std::filesystem;
using namespace netinfer;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "seed override");
}

Config load_config(const CommonArgs& args) {
    Config cfg = args.config_path.empty() ? Config::from_json_string("{}")
                                          : Config::from_json_file(args.config_path);
    if (args.seed) {
        cfg.traffic.seed = *args.seed;
        cfg.eval.seed = *args.seed;
    }
    return cfg;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    return (fs::path(args.out_dir) / name).string();
}

std::vector<Vec2> place_cli_sensors(const Config& cfg, const Topology& topo) {
    Rng rng(cfg.sensors.placement_seed, 0);
    std::vector<Vec2> out;
    for (int i = 0; i < cfg.sensors.count; ++i) {
        Vec2 p;
        for (int attempt = 0; attempt < 10000; ++attempt) {
            p = {rng.uniform() * cfg.sensors.box_w, rng.uniform() * cfg.sensors.box_h};
            bool clear = true;
            for (const auto& t : *topo.positions())
                if (distance(p, t) < cfg.sensors.min_tx_distance) {
                    clear = false;
                    break;
                }
            if (clear) break;
        }
        out.push_back(p);
    }
    return out;
}

int run_simulate(const CommonArgs& args, const std::string& mode, bool dump_occupancy) {
    Config cfg = load_config(args);
    Topology topo = cfg.topology.build();
    write_text_file(out_path(args, "topology.json"), topo.to_json_string() + "\n");

    if (mode == "chains") {
        TransitionMatrix p = random_walk_matrix(topo);
        OccupancyTrace trace =
            simulate_chains(p, cfg.eval.chains_k, cfg.traffic.bin_count(), cfg.traffic.seed);
        auto [ts, collisions] = to_time_series(trace);
        write_time_series_csv(out_path(args, "ts.csv"), ts);
        if (dump_occupancy) write_occupancy_csv(out_path(args, "occupancy.csv"), trace);
        std::printf("wrote ts.csv (%d nodes x %ld bins), collisions=%ld\n", ts.n, ts.T,
                    collisions);
        return 0;
    }
    if (mode == "traffic") {
        auto events = generate_traffic(topo, cfg.traffic);
        write_events_csv(out_path(args, "events.csv"), events);
        TimeSeries ts = discretize(events, topo, cfg.traffic);
        write_time_series_csv(out_path(args, "ts.csv"), ts);
        std::printf("wrote events.csv (%zu events) and ts.csv (%d nodes x %ld bins)\n",
                    events.size(), ts.n, ts.T);
        return 0;
    }
    throw ConfigError("simulate mode must be 'chains' or 'traffic'");
}

int run_sensors(const CommonArgs& args, const std::string& events_path) {
    Config cfg = load_config(args);
    Topology topo = cfg.topology.build();
    if (!topo.positions())
        throw ConfigError("sensors need a topology with positions (geometric kind)");

    std::vector<TransmissionEvent> events;
    if (events_path.empty()) {
        events = generate_traffic(topo, cfg.traffic);
        write_events_csv(out_path(args, "events.csv"), events);
    } else {
        events = read_events_csv(events_path);
    }

    SensorField field = cfg.sensors.field;
    field.sensor_positions = place_cli_sensors(cfg, topo);

    PowerMatrix pd = detect_power(events, field, topo, cfg.traffic);
    ClusterOptions copts{cfg.estimator.kmeans_restarts, cfg.estimator.kmeans_linear_power};
    std::vector<int> assignment = cluster_bursts(pd, topo.node_count(), cfg.traffic.seed, copts);
    std::vector<int> truth = interval_ground_truth(events, cfg.traffic, pd.interval_index);
    Reconstruction rec = label_and_reconstruct(assignment, truth, topo.node_count(),
                                               cfg.traffic.bin_count(), pd.interval_index);

    write_power_csv(out_path(args, "pd.csv"), pd);
    write_assignment_csv(out_path(args, "assignment.csv"), pd.interval_index, assignment,
                         rec.cluster_label);
    write_time_series_csv(out_path(args, "ts_reconstructed.csv"), rec.ts);
    write_text_file(out_path(args, "topology.json"), topo.to_json_string() + "\n");

    nlohmann::ordered_json j;
    j["sensors"] = pd.sensors;
    j["kept_intervals"] = pd.kept;
    j["clustering_accuracy"] = rec.accuracy;
    write_text_file(out_path(args, "sensors.json"), j.dump(2) + "\n");
    std::printf("kept %ld intervals, clustering accuracy %.4f\n", pd.kept, rec.accuracy);
    return 0;
}

int run_estimate(const CommonArgs& args, const std::string& ts_path,
                 std::optional<double> k_override) {
    Config cfg = load_config(args);
    TimeSeries ts = read_time_series_csv(ts_path);
    EstimatorState state(ts.n);
    state.ingest(ts);
    std::optional<double> k = k_override ? k_override : cfg.estimator.k_override;
    EstimateBundle bundle = finalize(state, k);

    write_matrix_csv(out_path(args, "m.csv"), bundle.m);
    write_matrix_csv(out_path(args, "p_hat.csv"), bundle.p_hat);
    write_matrix_csv(out_path(args, "l_hat.csv"), bundle.l_hat);
    write_matrix_csv(out_path(args, "l_sym.csv"), bundle.l_sym);
    write_vector_csv(out_path(args, "pi_hat.csv"), bundle.pi_hat);

    nlohmann::ordered_json j;
    j["k_used"] = bundle.k_used;
    j["T"] = bundle.steps;
    j["n"] = bundle.n;
    j["silent_nodes"] = bundle.silent_nodes;
    write_text_file(out_path(args, "estimate.json"), j.dump(2) + "\n");
    std::printf("estimated %d x %d bundle, k_used=%.4f\n", bundle.n, bundle.n, bundle.k_used);
    return 0;
}

int run_te(const CommonArgs& args, const std::string& ts_path) {
    Config cfg = load_config(args);
    TimeSeries ts = read_time_series_csv(ts_path);
    Mat m = te_matrix(ts, cfg.te);
    write_matrix_csv(out_path(args, "te_matrix.csv"), m);
    std::printf("wrote te_matrix.csv (%d x %d)\n", ts.n, ts.n);
    return 0;
}

int run_eval(const CommonArgs& args, const std::string& matrix_path,
             const std::string& topology_path) {
    Mat score = read_matrix_csv(matrix_path);
    Topology truth = Topology::from_json_string(read_text_file(topology_path));
    TopMResult res = top_m_details(score, truth);

    nlohmann::ordered_json j;
    j["proportion_correct"] = res.fraction;
    j["m"] = truth.edges().size();
    j["symmetrised_input"] = res.symmetrised;
    j["selected"] = nlohmann::ordered_json::array();
    for (auto [u, v] : res.selected) j["selected"].push_back({u, v});
    write_text_file(out_path(args, "report.json"), j.dump(2) + "\n");
    std::printf("proportion_correct %.4f over m=%zu links\n", res.fraction,
                truth.edges().size());
    return 0;
}

int run_sweep(const CommonArgs& args, int threads, bool no_timestamp) {
    Config cfg = load_config(args);
    if (threads > 0) cfg.eval.threads = threads;
    auto reports = sweep(cfg);
    write_text_file(out_path(args, "reports.json"),
                    reports_to_json(reports, !no_timestamp) + "\n");
    for (const auto& r : reports)
        std::printf("%-7s window %8.3fs  proportion %.4f +- %.4f  (%zu/%d seeds)\n",
                    r.method.c_str(), r.window_seconds, r.proportion_correct, r.ci95,
                    r.per_seed.size(), r.replications);
    return 0;
}

void emit_error(const std::string& message, int code) {
    nlohmann::ordered_json j;
    j["error"] = message;
    j["exit_code"] = code;
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wireless topology inference from transmission time series"};
    app.require_subcommand(1);

    CommonArgs sim_args, sensor_args, est_args, te_args, eval_args, sweep_args;

    auto* sim = app.add_subcommand("simulate", "generate a time series (chains or traffic)");
    add_common(sim, sim_args);
    std::string sim_mode = "traffic";
    bool dump_occupancy = false;
    sim->add_option("--mode", sim_mode, "chains | traffic");
    sim->add_flag("--occupancy", dump_occupancy, "also dump occupancy counts (chains)");

    auto* sens = app.add_subcommand("sensors", "power detection, clustering, reconstruction");
    add_common(sens, sensor_args);
    std::string events_path;
    sens->add_option("--events", events_path, "existing event log (else traffic is generated)");

    auto* est = app.add_subcommand("estimate", "estimate the transition bundle from a series");
    add_common(est, est_args);
    std::string est_ts;
    std::optional<double> est_k;
    est->add_option("--ts", est_ts, "time series CSV")->required();
    est->add_option("--k", est_k, "override the concurrency estimate");

    auto* te = app.add_subcommand("te", "transfer entropy matrix from a series");
    add_common(te, te_args);
    std::string te_ts;
    te->add_option("--ts", te_ts, "time series CSV")->required();

    auto* ev = app.add_subcommand("eval", "top-m link recovery score for a matrix");
    add_common(ev, eval_args);
    std::string matrix_path, topology_path;
    ev->add_option("--matrix", matrix_path, "score matrix CSV")->required();
    ev->add_option("--topology", topology_path, "ground truth topology JSON")->required();

    auto* sw = app.add_subcommand("sweep", "windows x methods evaluation with replication");
    add_common(sw, sweep_args);
    int threads = 0;
    bool no_timestamp = false;
    sw->add_option("--threads", threads, "worker pool size (0 = hardware)");
    sw->add_flag("--no-timestamp", no_timestamp, "omit generated_at for byte comparison");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        emit_error(e.what(), 2);
        return 2;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_args, sim_mode, dump_occupancy);
        if (sens->parsed()) return run_sensors(sensor_args, events_path);
        if (est->parsed()) return run_estimate(est_args, est_ts, est_k);
        if (te->parsed()) return run_te(te_args, te_ts);
        if (ev->parsed()) return run_eval(eval_args, matrix_path, topology_path);
        if (sw->parsed()) return run_sweep(sweep_args, threads, no_timestamp);
    } catch (const std::exception& e) {
        emit_error(e.what(), 3);
        return 3;
    }
    emit_error("no subcommand", 2);
    return 2;
}
