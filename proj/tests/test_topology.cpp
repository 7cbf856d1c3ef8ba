#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "netinfer/errors.hpp"
#include "netinfer/numerics.hpp"
#include "netinfer/rng.hpp"
#include "netinfer/topology.hpp"
#include "support/oracles.hpp"

using namespace netinfer;

TEST_CASE("two points within range form one edge") {
    auto t = Topology::from_positions({{0, 0}, {40, 0}}, 50.0);
    REQUIRE(t.edges().size() == 1);
    CHECK(t.has_edge(0, 1));
}

TEST_CASE("two points above range are rejected as disconnected") {
    CHECK_THROWS_AS(Topology::from_positions({{0, 0}, {60, 0}}, 50.0), DisconnectedGraph);
}

TEST_CASE("random geometric placement retries until connected") {
    auto t = Topology::random_geometric(25, 120.0, 120.0, 50.0, 1);
    CHECK(t.node_count() == 25);
    CHECK(t.positions().has_value());
    // connectivity is enforced by construction; spot-check edge consistency
    const auto& pos = *t.positions();
    for (auto [u, v] : t.edges()) CHECK(distance(pos[u], pos[v]) <= 50.0);
    for (int u = 0; u < 25; ++u)
        for (int v = u + 1; v < 25; ++v)
            CHECK(t.has_edge(u, v) == (distance(pos[u], pos[v]) <= 50.0));
}

TEST_CASE("edge-list constructor validates input") {
    CHECK_THROWS(Topology::from_edges(3, {{0, 0}}));
    CHECK_THROWS(Topology::from_edges(3, {{0, 5}}));
    CHECK_THROWS_AS(Topology::from_edges(4, {{0, 1}, {2, 3}}), DisconnectedGraph);
}

TEST_CASE("random walk on a single edge flips") {
    auto p = random_walk_matrix(Topology::from_edges(2, {{0, 1}}));
    CHECK(p(0, 0) == 0.0);
    CHECK(p(0, 1) == 1.0);
    CHECK(p(1, 0) == 1.0);
    CHECK(p(1, 1) == 0.0);
}

TEST_CASE("random walk on the 3-cycle has off-diagonal 1/2") {
    auto p = random_walk_matrix(Topology::cycle(3));
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) CHECK(p(u, v) == (u == v ? 0.0 : 0.5));
}

TEST_CASE("random walk on the path follows the degree rule") {
    auto p = random_walk_matrix(Topology::path(3));
    CHECK(p(1, 0) == 0.5);
    CHECK(p(1, 2) == 0.5);
    CHECK(p(0, 1) == 1.0);
    CHECK(p(2, 1) == 1.0);
}

TEST_CASE("walk matrix rows sum to one for any connected topology") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto t = Topology::random_geometric(15, 100.0, 100.0, 45.0, seed);
        auto p = random_walk_matrix(t);
        for (int u = 0; u < t.node_count(); ++u) {
            double sum = 0.0;
            for (int v = 0; v < t.node_count(); ++v) sum += p(u, v);
            CHECK(std::abs(sum - 1.0) <= tol::kRowSum);
        }
    }
}

TEST_CASE("stationary distribution of the 3-cycle walk is uniform") {
    auto pi = stationary_distribution(random_walk_matrix(Topology::cycle(3)));
    for (double x : pi) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("stationary distribution of the path walk is (1/4, 1/2, 1/4)") {
    auto pi = stationary_distribution(random_walk_matrix(Topology::path(3)));
    CHECK(pi[0] == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(pi[1] == doctest::Approx(0.50).epsilon(1e-10));
    CHECK(pi[2] == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("stationary distribution matches the direct linear solve") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        Mat m(6, 6);
        for (int u = 0; u < 6; ++u) {
            double sum = 0.0;
            for (int v = 0; v < 6; ++v) {
                m(u, v) = rng.uniform() + 0.01;
                sum += m(u, v);
            }
            double acc = 0.0;
            for (int v = 0; v < 5; ++v) {
                m(u, v) /= sum;
                acc += m(u, v);
            }
            m(u, 5) = 1.0 - acc;  // exact row sum
        }
        TransitionMatrix p(m);
        auto pi = stationary_distribution(p);
        auto oracle = testing::stationary_by_linear_solve(p.entries());
        for (int v = 0; v < 6; ++v) CHECK(std::abs(pi[v] - oracle[v]) <= 1e-9);
    }
}

TEST_CASE("stationary distribution is proportional to degree on undirected graphs") {
    std::vector<Topology> graphs{Topology::cycle(6), Topology::path(5), Topology::grid(3, 3),
                                 Topology::grid(2, 4),
                                 Topology::random_geometric(12, 90.0, 90.0, 45.0, 3)};
    for (const auto& g : graphs) {
        auto pi = stationary_distribution(random_walk_matrix(g));
        double total_degree = 0.0;
        for (int u = 0; u < g.node_count(); ++u) total_degree += g.degree(u);
        for (int u = 0; u < g.node_count(); ++u)
            CHECK(std::abs(pi[u] - g.degree(u) / total_degree) <= 1e-10);
    }
}

TEST_CASE("from_positions is permutation equivariant") {
    Rng rng(11);
    std::vector<Vec2> pts(10);
    for (auto& p : pts) p = {rng.uniform() * 80.0, rng.uniform() * 80.0};
    auto base = Topology::from_positions(pts, 60.0);

    std::vector<int> perm(10);
    for (int i = 0; i < 10; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), std::mt19937(5));
    std::vector<Vec2> permuted(10);
    for (int i = 0; i < 10; ++i) permuted[perm[i]] = pts[i];
    auto mapped = Topology::from_positions(permuted, 60.0);

    CHECK(mapped.edges().size() == base.edges().size());
    for (auto [u, v] : base.edges()) CHECK(mapped.has_edge(perm[u], perm[v]));
}

TEST_CASE("topology JSON round-trip") {
    auto t = Topology::random_geometric(8, 70.0, 70.0, 40.0, 2);
    auto back = Topology::from_json_string(t.to_json_string());
    CHECK(back.node_count() == t.node_count());
    CHECK(back.edges() == t.edges());
    CHECK(back.comm_range() == t.comm_range());

    auto e = Topology::cycle(5);
    auto eback = Topology::from_json_string(e.to_json_string());
    CHECK(eback.edges() == e.edges());
    CHECK_FALSE(eback.positions().has_value());
}

TEST_CASE("transition matrix constructor validates stochasticity and irreducibility") {
    Mat bad(2, 2);
    bad(0, 0) = 0.7;
    bad(0, 1) = 0.7;
    bad(1, 0) = 0.5;
    bad(1, 1) = 0.5;
    CHECK_THROWS(TransitionMatrix(bad));

    Mat reducible = Mat::identity(2);  // two absorbing states
    CHECK_THROWS(TransitionMatrix(reducible));
}
