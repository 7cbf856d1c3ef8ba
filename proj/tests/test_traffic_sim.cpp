#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "netinfer/errors.hpp"
#include "netinfer/traffic_sim.hpp"
#include "support/oracles.hpp"

using namespace netinfer;

namespace {

TrafficConfig small_cfg(int messages, double window, std::uint64_t seed) {
    TrafficConfig c;
    c.num_messages = messages;
    c.window_seconds = window;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("shortest path breaks ties toward the smallest next hop") {
    // two equal-length routes 0-1-3 and 0-2-3
    auto topo = Topology::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    auto path = shortest_path(topo, 0, 3);
    REQUIRE(path.size() == 3);
    CHECK(path[1] == 1);
}

TEST_CASE("one message on a path emits hop events one delay apart") {
    auto topo = Topology::path(3);
    TrafficConfig cfg = small_cfg(1, 10.0, 4);
    cfg.packets_per_message = 1;
    // scan seeds for a two-hop 0 -> 2 message; the destination stays silent
    std::vector<TransmissionEvent> events;
    for (std::uint64_t s = 0; s < 200; ++s) {
        cfg.seed = s;
        events = generate_traffic(topo, cfg);
        if (events.size() == 2 && events[0].node == 0) break;
    }
    REQUIRE(events.size() == 2);
    CHECK(events[0].node == 0);
    CHECK(events[1].node == 1);  // node 2 receives only
    CHECK(events[1].time - events[0].time ==
          doctest::Approx(cfg.per_hop_delay_seconds).epsilon(1e-12));
    CHECK(events[0].hop_index == 0);
    CHECK(events[1].hop_index == 1);
}

TEST_CASE("a single-edge message is packets_per_message events at the source") {
    auto topo = Topology::from_edges(2, {{0, 1}});
    TrafficConfig cfg = small_cfg(1, 5.0, 9);
    auto events = generate_traffic(topo, cfg);
    REQUIRE(static_cast<int>(events.size()) == cfg.packets_per_message);
    for (const auto& e : events) {
        CHECK(e.node == events[0].node);
        CHECK(e.time == events[0].time);
    }
}

TEST_CASE("event totals and mean hop count match the all-pairs BFS oracle") {
    auto topo = Topology::cycle(6);
    TrafficConfig cfg = small_cfg(500, 15.0, 7);
    auto events = generate_traffic(topo, cfg);

    // total events = packets * sum of hop lengths
    std::map<int, int> hops_per_message;
    for (const auto& e : events)
        hops_per_message[e.message_id] = std::max(hops_per_message[e.message_id], e.hop_index + 1);
    long hop_sum = 0;
    for (auto& [mid, hops] : hops_per_message) hop_sum += hops;
    CHECK(static_cast<long>(events.size()) == 3 * hop_sum);

    // mean hop length within 3 standard errors of the exact mean
    double exact = testing::average_shortest_path(topo);  // 1.8 on the 6-cycle
    CHECK(exact == doctest::Approx(1.8));
    double mean = static_cast<double>(hop_sum) / 500.0;
    double var = (1.0 + 1.0 + 4.0 + 4.0 + 9.0) / 5.0 - exact * exact;
    double se = std::sqrt(var / 500.0);
    CHECK(std::abs(mean - exact) <= 3.0 * se);
}

TEST_CASE("each message transmits along a simple adjacent-hop route") {
    auto topo = Topology::grid(3, 3);
    TrafficConfig cfg = small_cfg(200, 10.0, 3);
    auto events = generate_traffic(topo, cfg);
    std::map<int, std::map<int, int>> route;  // message -> hop -> node
    for (const auto& e : events) route[e.message_id][e.hop_index] = e.node;
    for (auto& [mid, hops] : route) {
        std::set<int> seen;
        int prev = -1;
        for (auto& [h, node] : hops) {
            CHECK(seen.insert(node).second);  // no node transmits twice
            if (prev >= 0) CHECK(topo.has_edge(prev, node));
            prev = node;
        }
    }
}

TEST_CASE("discretize maps events to bins and is binary") {
    auto topo = Topology::path(3);
    TrafficConfig cfg = small_cfg(1, 0.015, 1);

    SUBCASE("one event in bin zero") {
        std::vector<TransmissionEvent> events{{1, 0.0, 0, 0}};
        auto ts = discretize(events, topo, cfg);
        CHECK(ts.at(1, 0) == 1);
        long ones = 0;
        for (auto b : ts.bits) ones += b;
        CHECK(ones == 1);
    }
    SUBCASE("two same-bin events of one node produce a single 1") {
        std::vector<TransmissionEvent> events{{2, 0.0001, 0, 0}, {2, 0.0002, 0, 1}};
        auto ts = discretize(events, topo, cfg);
        long ones = 0;
        for (auto b : ts.bits) ones += b;
        CHECK(ones == 1);
        CHECK(ts.at(2, 0) == 1);
    }
    SUBCASE("empty event list gives the all-zero matrix") {
        auto ts = discretize({}, topo, cfg);
        for (auto b : ts.bits) CHECK(b == 0);
        CHECK(ts.T == cfg.bin_count());
    }
    SUBCASE("events past the window are dropped") {
        std::vector<TransmissionEvent> events{{0, 0.0151, 0, 0}};
        auto ts = discretize(events, topo, cfg);
        for (auto b : ts.bits) CHECK(b == 0);
    }
}

TEST_CASE("consecutive hops land in consecutive bins by default") {
    auto topo = Topology::path(4);
    TrafficConfig cfg = small_cfg(50, 5.0, 21);
    auto events = generate_traffic(topo, cfg);
    auto ts = discretize(events, topo, cfg);
    std::map<int, std::vector<const TransmissionEvent*>> by_msg;
    for (const auto& e : events) by_msg[e.message_id].push_back(&e);
    for (auto& [mid, evs] : by_msg) {
        long bin0 = static_cast<long>(evs.front()->time / cfg.interval_seconds);
        for (auto* e : evs) {
            long bin = static_cast<long>(e->time / cfg.interval_seconds);
            if (bin < ts.T) CHECK(bin == bin0 + e->hop_index);
        }
    }
}

TEST_CASE("shrinking the window increases per-bin concurrency") {
    auto topo = Topology::cycle(6);
    auto mean_concurrency = [&](double window) {
        double total = 0.0;
        int seeds = 20;
        for (std::uint64_t s = 1; s <= static_cast<std::uint64_t>(seeds); ++s) {
            TrafficConfig cfg = small_cfg(200, window, s);
            auto ts = discretize(generate_traffic(topo, cfg), topo, cfg);
            long active_cells = 0, active_bins = 0;
            for (long t = 0; t < ts.T; ++t) {
                int c = 0;
                for (int v = 0; v < ts.n; ++v) c += ts.at(v, t);
                if (c > 0) {
                    ++active_bins;
                    active_cells += c;
                }
            }
            total += static_cast<double>(active_cells) / static_cast<double>(active_bins);
        }
        return total / seeds;
    };
    CHECK(mean_concurrency(1.0) > mean_concurrency(10.0));
}

TEST_CASE("traffic generation is deterministic per seed") {
    auto topo = Topology::grid(2, 3);
    TrafficConfig cfg = small_cfg(100, 8.0, 77);
    auto a = generate_traffic(topo, cfg);
    auto b = generate_traffic(topo, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].node == b[i].node);
        CHECK(a[i].time == b[i].time);
    }
}

TEST_CASE("traffic config is validated") {
    TrafficConfig cfg;
    cfg.num_messages = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = TrafficConfig{};
    cfg.interval_seconds = 30.0;
    cfg.window_seconds = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
