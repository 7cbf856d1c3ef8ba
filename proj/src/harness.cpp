#include "netinfer/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <map>
#include <thread>

#include "json.hpp"
#include "netinfer/errors.hpp"
#include "netinfer/io.hpp"
#include "netinfer/markov_sim.hpp"
#include "netinfer/numerics.hpp"
#include "netinfer/rng.hpp"

namespace netinfer {

using ordered_json = nlohmann::ordered_json;

TopMResult top_m_details(const Mat& score, const Topology& truth) {
    const int n = truth.node_count();
    if (score.rows() != score.cols() || static_cast<int>(score.rows()) != n)
        throw DimensionMismatch("score matrix shape does not match the topology");
    const std::size_t m = truth.edges().size();
    if (m == 0) throw TruthEmpty("topology has no edges");

    TopMResult res;
    Mat s = score;
    double asym = 0.0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) asym = std::max(asym, std::abs(score(u, v) - score(v, u)));
    if (asym > tol::kScoreSymmetry) {
        s = symmetric_part(score);
        res.symmetrised = true;
    }

    struct Entry {
        double value;
        int u, v;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) entries.push_back({s(u, v), u, v});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });

    std::size_t hits = 0;
    for (std::size_t i = 0; i < m && i < entries.size(); ++i) {
        res.selected.push_back({entries[i].u, entries[i].v});
        if (truth.has_edge(entries[i].u, entries[i].v)) ++hits;
    }
    res.fraction = static_cast<double>(hits) / static_cast<double>(m);
    return res;
}

double top_m_score(const Mat& score, const Topology& truth) {
    return top_m_details(score, truth).fraction;
}

Topology TopologySpec::build() const {
    if (kind == "cycle") return Topology::cycle(n);
    if (kind == "path") return Topology::path(n);
    if (kind == "grid") return Topology::grid(rows, cols);
    if (kind == "edges") return Topology::from_edges(n, edges);
    if (kind == "geometric")
        return Topology::random_geometric(count, box_w, box_h, comm_range, placement_seed);
    throw ConfigError("unknown topology kind: " + kind);
}

namespace {

template <typename J>
void parse_topology(const J& j, TopologySpec& t) {
    t.kind = j.value("kind", t.kind);
    t.n = j.value("n", t.n);
    t.rows = j.value("rows", t.rows);
    t.cols = j.value("cols", t.cols);
    t.count = j.value("count", t.count);
    t.comm_range = j.value("comm_range", t.comm_range);
    t.placement_seed = j.value("placement_seed", t.placement_seed);
    if (j.contains("box")) {
        t.box_w = j["box"].at(0).template get<double>();
        t.box_h = j["box"].at(1).template get<double>();
    }
    if (j.contains("edges")) {
        t.edges.clear();
        for (const auto& e : j["edges"])
            t.edges.push_back({e.at(0).template get<int>(), e.at(1).template get<int>()});
    }
}

double mean_of(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double ci95_of(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    double mu = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - mu) * (x - mu);
    double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
}

std::vector<Vec2> place_sensors(const SensorSpec& spec, const Topology& topo,
                                std::uint64_t replication_seed) {
    std::uint64_t stream = spec.per_seed_placement ? replication_seed : 0;
    Rng rng(spec.placement_seed, stream);
    const auto& tx = topo.positions();
    std::vector<Vec2> out;
    out.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        Vec2 p;
        for (int attempt = 0; attempt < 10000; ++attempt) {
            p = {rng.uniform() * spec.box_w, rng.uniform() * spec.box_h};
            bool clear = true;
            if (tx)
                for (const auto& t : *tx)
                    if (distance(p, t) < spec.min_tx_distance) {
                        clear = false;
                        break;
                    }
            if (clear) break;
        }
        out.push_back(p);
    }
    return out;
}

long count_traffic_collisions(std::span<const TransmissionEvent> events,
                              const TrafficConfig& cfg) {
    // (node, bin) cells hit by more than one message: undetectable overlaps
    std::map<std::pair<int, long>, std::map<int, int>> cells;
    for (const auto& e : events) {
        long bin = static_cast<long>(e.time / cfg.interval_seconds);
        if (bin >= cfg.bin_count()) continue;
        cells[{e.node, bin}][e.message_id] = 1;
    }
    long collisions = 0;
    for (const auto& [cell, msgs] : cells)
        if (msgs.size() >= 2) ++collisions;
    return collisions;
}

}  // namespace

Config Config::from_json_string(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    Config c;
    if (j.contains("topology")) parse_topology(j["topology"], c.topology);
    if (j.contains("traffic")) {
        const auto& t = j["traffic"];
        c.traffic.num_messages = t.value("num_messages", c.traffic.num_messages);
        c.traffic.packets_per_message = t.value("packets_per_message", c.traffic.packets_per_message);
        c.traffic.packet_bytes = t.value("packet_bytes", c.traffic.packet_bytes);
        c.traffic.window_seconds = t.value("window_seconds", c.traffic.window_seconds);
        c.traffic.interval_seconds = t.value("interval_seconds", c.traffic.interval_seconds);
        c.traffic.per_hop_delay_seconds =
            t.value("per_hop_delay_seconds", c.traffic.per_hop_delay_seconds);
        c.traffic.seed = t.value("seed", c.traffic.seed);
    }
    if (j.contains("sensors")) {
        const auto& s = j["sensors"];
        c.sensors.count = s.value("count", c.sensors.count);
        if (s.contains("box")) {
            c.sensors.box_w = s["box"].at(0).get<double>();
            c.sensors.box_h = s["box"].at(1).get<double>();
        }
        c.sensors.placement_seed = s.value("placement_seed", c.sensors.placement_seed);
        c.sensors.per_seed_placement = s.value("per_seed_placement", c.sensors.per_seed_placement);
        c.sensors.min_tx_distance = s.value("min_tx_distance", c.sensors.min_tx_distance);
        c.sensors.field.tx_power_dbm = s.value("tx_power_dbm", c.sensors.field.tx_power_dbm);
        c.sensors.field.path_loss_exponent =
            s.value("path_loss_exponent", c.sensors.field.path_loss_exponent);
        c.sensors.field.reference_loss_db =
            s.value("reference_loss_db", c.sensors.field.reference_loss_db);
        c.sensors.field.noise_floor_dbm = s.value("noise_floor_dbm", c.sensors.field.noise_floor_dbm);
        std::string combine = s.value("combine", std::string("max"));
        if (combine == "max")
            c.sensors.field.combine = BurstCombine::kMax;
        else if (combine == "sum")
            c.sensors.field.combine = BurstCombine::kLinearSum;
        else
            throw ConfigError("sensors.combine must be 'max' or 'sum'");
    }
    if (j.contains("estimator")) {
        const auto& e = j["estimator"];
        if (e.contains("k_override") && !e["k_override"].is_null())
            c.estimator.k_override = e["k_override"].get<double>();
        c.estimator.kmeans_restarts = e.value("kmeans_restarts", c.estimator.kmeans_restarts);
        c.estimator.kmeans_linear_power =
            e.value("kmeans_linear_power", c.estimator.kmeans_linear_power);
    }
    if (j.contains("te")) {
        const auto& t = j["te"];
        c.te.history_d = t.value("history_d", c.te.history_d);
        c.te.source_history = t.value("source_history", c.te.source_history);
        c.te.validate();
    }
    if (j.contains("eval")) {
        const auto& e = j["eval"];
        c.eval.mode = e.value("mode", c.eval.mode);
        if (e.contains("windows")) c.eval.windows = e["windows"].get<std::vector<double>>();
        c.eval.replications = e.value("replications", c.eval.replications);
        c.eval.seed = e.value("seed", c.eval.seed);
        if (e.contains("methods")) c.eval.methods = e["methods"].get<std::vector<std::string>>();
        c.eval.chains_k = e.value("chains_k", c.eval.chains_k);
        c.eval.threads = e.value("threads", c.eval.threads);
    }
    return c;
}

Config Config::from_json_file(const std::string& path) {
    return from_json_string(read_text_file(path));
}

SimResult run_scenario(const Config& cfg, double window_seconds, std::uint64_t seed) {
    Topology topo = cfg.topology.build();
    SimResult res;
    if (cfg.eval.mode == "chains") {
        TransitionMatrix p = random_walk_matrix(topo);
        TrafficConfig tc = cfg.traffic;
        tc.window_seconds = window_seconds;
        long steps = tc.bin_count();
        OccupancyTrace trace = simulate_chains(p, cfg.eval.chains_k, steps, seed);
        auto [ts, collisions] = to_time_series(trace);
        res.ts = std::move(ts);
        res.collisions = collisions;
        return res;
    }

    TrafficConfig tc = cfg.traffic;
    tc.window_seconds = window_seconds;
    tc.seed = seed;
    std::vector<TransmissionEvent> events = generate_traffic(topo, tc);
    res.collisions = count_traffic_collisions(events, tc);

    if (cfg.eval.mode == "traffic") {
        res.ts = discretize(events, topo, tc);
        return res;
    }
    if (cfg.eval.mode == "sensors") {
        SensorField field = cfg.sensors.field;
        field.sensor_positions = place_sensors(cfg.sensors, topo, seed);
        PowerMatrix pd = detect_power(events, field, topo, tc);
        ClusterOptions copts{cfg.estimator.kmeans_restarts, cfg.estimator.kmeans_linear_power};
        std::vector<int> assignment = cluster_bursts(pd, topo.node_count(), seed, copts);
        std::vector<int> truth = interval_ground_truth(events, tc, pd.interval_index);
        Reconstruction rec = label_and_reconstruct(assignment, truth, topo.node_count(),
                                                   tc.bin_count(), pd.interval_index);
        res.ts = std::move(rec.ts);
        res.clustering_accuracy = rec.accuracy;
        return res;
    }
    throw ConfigError("unknown eval mode: " + cfg.eval.mode);
}

std::pair<double, double> score_method(const Config& cfg, const std::string& method,
                                       const TimeSeries& ts, const Topology& truth) {
    EstimatorState state(ts.n);
    state.ingest(ts);
    double k_diag = std::numeric_limits<double>::quiet_NaN();
    try {
        k_diag = estimate_k(state);
    } catch (const NoConsecutiveActivity&) {
        // leave NaN; the markov path below will surface the error if needed
    }
    if (method == "markov") {
        std::optional<double> k = cfg.estimator.k_override;
        EstimateBundle bundle = finalize(state, k);
        return {top_m_score(bundle.l_sym, truth), std::isnan(k_diag) ? bundle.k_used : k_diag};
    }
    if (method == "te") {
        Mat te = te_matrix(ts, cfg.te);
        return {top_m_score(te, truth), k_diag};
    }
    throw ConfigError("unknown method: " + method);
}

std::vector<EvalReport> sweep(const Config& cfg) {
    if (cfg.eval.windows.empty()) throw ConfigError("sweep needs at least one window");
    if (cfg.eval.replications < 1) throw ConfigError("sweep needs at least one seed");
    Topology truth = cfg.topology.build();

    struct SeedRun {
        bool ok = false;
        std::string error;
        long collisions = 0;
        std::optional<double> clustering_accuracy;
        std::map<std::string, std::pair<double, double>> scores;  // method -> (score, k_hat)
        std::map<std::string, std::string> method_errors;
    };

    int nthreads = cfg.eval.threads > 0 ? cfg.eval.threads
                                        : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min(nthreads, cfg.eval.replications));

    std::vector<EvalReport> reports;
    for (double window : cfg.eval.windows) {
        std::vector<SeedRun> runs(cfg.eval.replications);
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= cfg.eval.replications) return;
                SeedRun& run = runs[i];
                std::uint64_t seed = cfg.eval.seed + static_cast<std::uint64_t>(i);
                try {
                    SimResult sim = run_scenario(cfg, window, seed);
                    run.collisions = sim.collisions;
                    run.clustering_accuracy = sim.clustering_accuracy;
                    run.ok = true;
                    for (const auto& method : cfg.eval.methods) {
                        try {
                            run.scores[method] = score_method(cfg, method, sim.ts, truth);
                        } catch (const std::exception& e) {
                            run.method_errors[method] = e.what();
                        }
                    }
                } catch (const std::exception& e) {
                    run.error = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        for (const auto& method : cfg.eval.methods) {
            EvalReport r;
            r.method = method;
            r.window_seconds = window;
            r.replications = cfg.eval.replications;
            std::vector<double> k_hats, collisions, accuracies;
            for (int i = 0; i < cfg.eval.replications; ++i) {
                const SeedRun& run = runs[i];
                std::uint64_t seed = cfg.eval.seed + static_cast<std::uint64_t>(i);
                if (!run.ok) {
                    r.failures.push_back("seed " + std::to_string(seed) + ": " + run.error);
                    continue;
                }
                auto it = run.scores.find(method);
                if (it == run.scores.end()) {
                    r.failures.push_back("seed " + std::to_string(seed) + ": " +
                                         run.method_errors.at(method));
                    continue;
                }
                r.per_seed.push_back(it->second.first);
                if (!std::isnan(it->second.second)) k_hats.push_back(it->second.second);
                collisions.push_back(static_cast<double>(run.collisions));
                if (run.clustering_accuracy) accuracies.push_back(*run.clustering_accuracy);
            }
            r.proportion_correct = mean_of(r.per_seed);
            r.ci95 = ci95_of(r.per_seed);
            r.mean_k_hat = mean_of(k_hats);
            r.mean_collisions = mean_of(collisions);
            if (!accuracies.empty()) r.mean_clustering_accuracy = mean_of(accuracies);
            reports.push_back(std::move(r));
        }
    }
    return reports;
}

std::string reports_to_json(std::span<const EvalReport> reports, bool timestamp) {
    ordered_json out;
    out["reports"] = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json j;
        j["method"] = r.method;
        j["window_seconds"] = r.window_seconds;
        j["replications"] = r.replications;
        j["proportion_correct"] = r.proportion_correct;
        j["ci95"] = r.ci95;
        j["per_seed"] = r.per_seed;
        ordered_json diag;
        diag["k_hat"] = r.mean_k_hat;
        diag["collisions"] = r.mean_collisions;
        if (r.mean_clustering_accuracy) diag["clustering_accuracy"] = *r.mean_clustering_accuracy;
        if (!r.failures.empty()) diag["failures"] = r.failures;
        j["diagnostics"] = diag;
        out["reports"].push_back(j);
    }
    if (timestamp) {
        auto now = std::chrono::system_clock::now();
        std::time_t tt = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
        out["generated_at"] = buf;
    }
    return out.dump(2);
}

}  // namespace netinfer
