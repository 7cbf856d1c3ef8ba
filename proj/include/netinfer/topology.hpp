#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netinfer/matrix.hpp"

namespace netinfer {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

/// Undirected, connected network topology. Nodes are indices 0..n-1; the edge
/// list is canonical (u < v, sorted). Immutable after construction.
class Topology {
  public:
    /// Explicit edge list. Validates endpoint range, rejects self-loops and
    /// disconnected graphs.
    static Topology from_edges(int n, std::vector<std::pair<int, int>> edges);

    /// Geometric construction: edge iff Euclidean distance <= comm_range.
    /// Throws DisconnectedGraph when the placement does not connect.
    static Topology from_positions(std::vector<Vec2> points, double comm_range);

    /// Uniform placement in a w x h box, resampling the placement substream
    /// until the geometric graph is connected.
    static Topology random_geometric(int count, double box_w, double box_h,
                                     double comm_range, std::uint64_t seed,
                                     int max_attempts = 1000);

    static Topology cycle(int n);
    static Topology path(int n);
    static Topology grid(int rows, int cols);

    int node_count() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::optional<std::vector<Vec2>>& positions() const { return positions_; }
    double comm_range() const { return comm_range_; }

    bool has_edge(int u, int v) const;
    int degree(int u) const { return static_cast<int>(adjacency_[u].size()); }
    /// Sorted neighbor lists.
    const std::vector<std::vector<int>>& adjacency() const { return adjacency_; }

    std::string to_json_string() const;
    static Topology from_json_string(const std::string& text);

  private:
    Topology() = default;
    void build_adjacency();
    void require_connected() const;

    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
    std::optional<std::vector<Vec2>> positions_;
    double comm_range_ = 50.0;
};

/// Row-stochastic transition matrix with irreducible support.
class TransitionMatrix {
  public:
    /// Validates nonnegativity, row sums within 1e-12 of one, and strong
    /// connectivity of the support.
    explicit TransitionMatrix(Mat entries);

    int dim() const { return n_; }
    const Mat& entries() const { return p_; }
    double operator()(int u, int v) const { return p_(u, v); }

  private:
    int n_ = 0;
    Mat p_;
};

/// P(u,v) = 1/deg(u) on edges, 0 elsewhere.
TransitionMatrix random_walk_matrix(const Topology& topo);

/// Stationary distribution of P, solved by power iteration on the transpose
/// of the half-lazy kernel (P+I)/2 (same fixed point, converges for periodic
/// chains too). Successive-iterate tolerance 1e-12, max 100000 iterations;
/// the result is verified to satisfy ||pi P - pi||_inf <= 1e-10.
std::vector<double> stationary_distribution(const TransitionMatrix& p);

}  // namespace netinfer
