#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netinfer/markov_sim.hpp"
#include "netinfer/topology.hpp"

namespace netinfer {

struct TrafficConfig {
    int num_messages = 500;
    int packets_per_message = 3;
    int packet_bytes = 100;
    double window_seconds = 15.0;
    double interval_seconds = 0.0015;
    double per_hop_delay_seconds = 0.0015;
    std::uint64_t seed = 0;

    long bin_count() const;
    void validate() const;  // throws ConfigError
};

struct TransmissionEvent {
    int node = 0;
    double time = 0.0;  // seconds from window start
    int message_id = 0;
    int hop_index = 0;
};

/// BFS shortest path from src to dst, ties broken by the lexicographically
/// smallest next hop. Returns the node sequence including both endpoints.
std::vector<int> shortest_path(const Topology& topo, int src, int dst);

/// Multi-hop unicast traffic: per message, a uniform ordered source/dest pair
/// and a uniform start time; the message is forwarded along the shortest
/// path, one event per packet per hop, hops separated by per_hop_delay.
/// Hops started near the window end may overshoot it; discretize drops those.
std::vector<TransmissionEvent> generate_traffic(const Topology& topo, const TrafficConfig& cfg);

/// TS(u,t) = 1 iff some event of node u falls in bin t; T = ceil(window/interval).
TimeSeries discretize(std::span<const TransmissionEvent> events, const Topology& topo,
                      const TrafficConfig& cfg);

}  // namespace netinfer
