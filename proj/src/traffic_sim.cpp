#include "netinfer/traffic_sim.hpp"

#include <cmath>
#include <queue>

#include "netinfer/errors.hpp"
#include "netinfer/rng.hpp"

namespace netinfer {

long TrafficConfig::bin_count() const {
    return static_cast<long>(std::ceil(window_seconds / interval_seconds));
}

void TrafficConfig::validate() const {
    if (num_messages < 1 || packets_per_message < 1 || packet_bytes < 1)
        throw ConfigError("traffic counts must be positive");
    if (window_seconds <= 0.0 || interval_seconds <= 0.0 || per_hop_delay_seconds <= 0.0)
        throw ConfigError("traffic durations must be positive");
    if (interval_seconds > window_seconds)
        throw ConfigError("interval must not exceed the window");
}

std::vector<int> shortest_path(const Topology& topo, int src, int dst) {
    const int n = topo.node_count();
    if (src < 0 || src >= n || dst < 0 || dst >= n)
        throw ConfigError("shortest_path endpoint out of range");
    // distances to dst, then walk greedily picking the smallest next hop
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    q.push(dst);
    dist[dst] = 0;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : topo.adjacency()[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
    }
    std::vector<int> path{src};
    int cur = src;
    while (cur != dst) {
        for (int v : topo.adjacency()[cur]) {  // neighbors are sorted
            if (dist[v] == dist[cur] - 1) {
                cur = v;
                break;
            }
        }
        path.push_back(cur);
    }
    return path;
}

std::vector<TransmissionEvent> generate_traffic(const Topology& topo, const TrafficConfig& cfg) {
    cfg.validate();
    const int n = topo.node_count();
    if (n < 2) throw ConfigError("traffic needs at least two nodes");
    Rng rng(cfg.seed);
    std::vector<TransmissionEvent> events;
    events.reserve(static_cast<std::size_t>(cfg.num_messages) * cfg.packets_per_message);
    for (int m = 0; m < cfg.num_messages; ++m) {
        int src = static_cast<int>(rng.below(n));
        int dst = src;
        while (dst == src) dst = static_cast<int>(rng.below(n));
        double start = rng.uniform() * cfg.window_seconds;
        std::vector<int> path = shortest_path(topo, src, dst);
        // every hop but the destination transmits; packets of one hop share the bin
        for (std::size_t h = 0; h + 1 < path.size(); ++h) {
            double t = start + static_cast<double>(h) * cfg.per_hop_delay_seconds;
            for (int pkt = 0; pkt < cfg.packets_per_message; ++pkt)
                events.push_back({path[h], t, m, static_cast<int>(h)});
        }
    }
    return events;
}

TimeSeries discretize(std::span<const TransmissionEvent> events, const Topology& topo,
                      const TrafficConfig& cfg) {
    cfg.validate();
    const long T = cfg.bin_count();
    TimeSeries ts(topo.node_count(), T);
    for (const auto& e : events) {
        if (e.time < 0.0) throw ConfigError("event time before window start");
        long bin = static_cast<long>(e.time / cfg.interval_seconds);
        if (bin >= T) continue;  // overshoot past the observation window
        ts.set(e.node, bin, 1);
    }
    return ts;
}

}  // namespace netinfer
