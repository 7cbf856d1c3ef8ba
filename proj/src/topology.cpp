#include "netinfer/topology.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "json.hpp"
#include "netinfer/errors.hpp"
#include "netinfer/numerics.hpp"
#include "netinfer/rng.hpp"

namespace netinfer {

double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

void Topology::build_adjacency() {
    adjacency_.assign(n_, {});
    for (auto [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

void Topology::require_connected() const {
    if (n_ == 0) throw DisconnectedGraph("topology has no nodes");
    std::vector<char> seen(n_, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adjacency_[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
        }
    }
    if (reached != n_) {
        throw DisconnectedGraph("graph is not connected (" + std::to_string(reached) + " of " +
                                std::to_string(n_) + " nodes reachable)");
    }
}

Topology Topology::from_edges(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 1) throw ConfigError("node count must be positive");
    std::set<std::pair<int, int>> canonical;
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw ConfigError("edge endpoint out of range");
        if (u == v) throw ConfigError("self-loops are not allowed");
        canonical.insert({std::min(u, v), std::max(u, v)});
    }
    Topology t;
    t.n_ = n;
    t.edges_.assign(canonical.begin(), canonical.end());
    t.build_adjacency();
    t.require_connected();
    return t;
}

Topology Topology::from_positions(std::vector<Vec2> points, double comm_range) {
    if (points.size() < 2) throw ConfigError("need at least two points");
    for (const auto& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw ConfigError("positions must be finite");
    int n = static_cast<int>(points.size());
    Topology t;
    t.n_ = n;
    t.comm_range_ = comm_range;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (distance(points[u], points[v]) <= comm_range) t.edges_.push_back({u, v});
    t.positions_ = std::move(points);
    t.build_adjacency();
    t.require_connected();
    return t;
}

Topology Topology::random_geometric(int count, double box_w, double box_h, double comm_range,
                                    std::uint64_t seed, int max_attempts) {
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        Rng rng(seed, static_cast<std::uint64_t>(attempt));
        std::vector<Vec2> pts(count);
        for (auto& p : pts) {
            p.x = rng.uniform() * box_w;
            p.y = rng.uniform() * box_h;
        }
        try {
            return from_positions(std::move(pts), comm_range);
        } catch (const DisconnectedGraph&) {
            // resample the next placement substream
        }
    }
    throw DisconnectedGraph("no connected placement found in " + std::to_string(max_attempts) +
                            " attempts");
}

Topology Topology::cycle(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
    return from_edges(n, std::move(e));
}

Topology Topology::path(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return from_edges(n, std::move(e));
}

Topology Topology::grid(int rows, int cols) {
    std::vector<std::pair<int, int>> e;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) e.push_back({id(r, c), id(r, c + 1)});
            if (r + 1 < rows) e.push_back({id(r, c), id(r + 1, c)});
        }
    }
    return from_edges(rows * cols, std::move(e));
}

bool Topology::has_edge(int u, int v) const {
    if (u == v) return false;
    const auto& nbrs = adjacency_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::string Topology::to_json_string() const {
    nlohmann::json j;
    j["n"] = n_;
    j["edges"] = nlohmann::json::array();
    for (auto [u, v] : edges_) j["edges"].push_back({u, v});
    if (positions_) {
        j["positions"] = nlohmann::json::array();
        for (const auto& p : *positions_) j["positions"].push_back({p.x, p.y});
    }
    j["comm_range"] = comm_range_;
    return j.dump(2);
}

Topology Topology::from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    if (j.contains("positions")) {
        std::vector<Vec2> pts;
        for (const auto& p : j["positions"]) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        if (static_cast<int>(pts.size()) != n) throw ConfigError("positions length != n");
        double range = j.value("comm_range", 50.0);
        return from_positions(std::move(pts), range);
    }
    Topology t = from_edges(n, std::move(edges));
    t.comm_range_ = j.value("comm_range", 50.0);
    return t;
}

TransitionMatrix::TransitionMatrix(Mat entries) {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
        throw DimensionMismatch("transition matrix must be square and nonempty");
    n_ = static_cast<int>(entries.rows());
    for (int u = 0; u < n_; ++u) {
        double sum = 0.0;
        for (int v = 0; v < n_; ++v) {
            double x = entries(u, v);
            if (!(x >= 0.0)) throw ConfigError("transition entries must be nonnegative");
            sum += x;
        }
        if (std::abs(sum - 1.0) > tol::kRowSum)
            throw ConfigError("row " + std::to_string(u) + " sums to " + std::to_string(sum));
    }
    // Irreducibility: support must be strongly connected (forward and
    // backward reachability from node 0).
    auto reach = [&](bool forward) {
        std::vector<char> seen(n_, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int count = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v = 0; v < n_; ++v) {
                double x = forward ? entries(u, v) : entries(v, u);
                if (x > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    ++count;
                    q.push(v);
                }
            }
        }
        return count;
    };
    if (reach(true) != n_ || reach(false) != n_)
        throw ConfigError("transition matrix support is not irreducible");
    p_ = std::move(entries);
}

TransitionMatrix random_walk_matrix(const Topology& topo) {
    int n = topo.node_count();
    Mat p(n, n);
    for (int u = 0; u < n; ++u) {
        const auto& nbrs = topo.adjacency()[u];
        double w = 1.0 / static_cast<double>(nbrs.size());
        for (int v : nbrs) p(u, v) = w;
    }
    return TransitionMatrix(std::move(p));
}

std::vector<double> stationary_distribution(const TransitionMatrix& p) {
    const int n = p.dim();
    std::vector<double> x(n, 1.0 / n);
    std::vector<double> next(n);
    for (int it = 0; it < tol::kPowerIterMax; ++it) {
        // next = ((P + I)/2)^T x
        for (int v = 0; v < n; ++v) next[v] = 0.5 * x[v];
        for (int u = 0; u < n; ++u) {
            double xu = 0.5 * x[u];
            for (int v = 0; v < n; ++v) next[v] += p(u, v) * xu;
        }
        double sum = 0.0;
        for (double s : next) sum += s;
        for (double& s : next) s /= sum;
        double delta = max_abs_diff(next, x);
        x.swap(next);
        if (delta <= tol::kPowerIter) {
            // verify against the original kernel
            std::vector<double> px(n, 0.0);
            for (int u = 0; u < n; ++u)
                for (int v = 0; v < n; ++v) px[v] += x[u] * p(u, v);
            if (max_abs_diff(px, x) > tol::kStationaryResidual)
                throw NoConvergence("stationary distribution residual above tolerance");
            return x;
        }
    }
    throw NoConvergence("stationary distribution power iteration did not converge");
}

}  // namespace netinfer
