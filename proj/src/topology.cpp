#include "layerplace/topology.hpp"

#include <cmath>
#include <deque>

namespace layerplace {

std::string to_string(VertexRole role) {
    switch (role) {
    case VertexRole::unit: return "unit";
    case VertexRole::source: return "source";
    case VertexRole::sink: return "sink";
    }
    return "unit";
}

VertexRole role_from_string(std::string_view name) {
    if (name == "unit") return VertexRole::unit;
    if (name == "source") return VertexRole::source;
    if (name == "sink") return VertexRole::sink;
    throw Error("unknown vertex role: " + std::string(name));
}

std::vector<std::vector<bool>>
build_disk_graph(const std::vector<std::pair<double, double>>& positions, double range) {
    const std::size_t n = positions.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double dx = positions[a].first - positions[b].first;
            const double dy = positions[a].second - positions[b].second;
            if (std::sqrt(dx * dx + dy * dy) <= range) {
                adj[a][b] = adj[b][a] = true;
            }
        }
    }
    return adj;
}

std::vector<std::vector<int>>
all_pairs_hop_distance(const std::vector<std::vector<bool>>& adjacency) {
    const std::size_t n = adjacency.size();
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, kUnreachable));
    std::deque<std::size_t> queue;
    for (std::size_t start = 0; start < n; ++start) {
        auto& row = dist[start];
        row[start] = 0;
        queue.clear();
        queue.push_back(start);
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t w = 0; w < n; ++w) {
                if (adjacency[v][w] && row[w] == kUnreachable) {
                    row[w] = row[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return dist;
}

Topology Topology::disk_graph(std::vector<Vertex> vertices, double range) {
    Topology t;
    t.vertices_ = std::move(vertices);
    t.range_ = range;
    std::vector<std::pair<double, double>> pos;
    pos.reserve(t.vertices_.size());
    for (const auto& v : t.vertices_) pos.emplace_back(v.x, v.y);
    t.adjacency_ = build_disk_graph(pos, range);
    t.finish();
    return t;
}

Topology Topology::explicit_graph(std::vector<Vertex> vertices,
                                  std::vector<std::pair<std::string, std::string>> edges,
                                  double range) {
    Topology t;
    t.vertices_ = std::move(vertices);
    t.range_ = range;
    t.explicit_edges_ = true;
    const std::size_t n = t.vertices_.size();
    t.adjacency_.assign(n, std::vector<bool>(n, false));
    for (const auto& [ida, idb] : edges) {
        const int a = t.index_of(ida);
        const int b = t.index_of(idb);
        if (a < 0 || b < 0) {
            throw Error("edge endpoint not a vertex: " + (a < 0 ? ida : idb));
        }
        if (a == b) continue;
        t.adjacency_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
        t.adjacency_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = true;
    }
    t.finish();
    return t;
}

void Topology::finish() {
    hop_ = all_pairs_hop_distance(adjacency_);
}

bool Topology::adjacent(int a, int b) const {
    return adjacency_.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b));
}

std::optional<int> Topology::hops(int a, int b) const {
    const int d = hop_.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b));
    if (d == kUnreachable) return std::nullopt;
    return d;
}

int Topology::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

std::vector<int> Topology::unit_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].role == VertexRole::unit) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> Topology::source_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].role == VertexRole::source) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> Topology::sink_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].role == VertexRole::sink) out.push_back(static_cast<int>(i));
    }
    return out;
}

bool Topology::connected() const {
    for (const auto& row : hop_) {
        for (int d : row) {
            if (d == kUnreachable) return false;
        }
    }
    return true;
}

std::vector<std::pair<std::string, std::string>> Topology::unreachable_pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t a = 0; a < hop_.size(); ++a) {
        for (std::size_t b = a + 1; b < hop_.size(); ++b) {
            if (hop_[a][b] == kUnreachable) {
                out.emplace_back(vertices_[a].id, vertices_[b].id);
            }
        }
    }
    return out;
}

std::vector<std::pair<int, int>> Topology::edges() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t a = 0; a < adjacency_.size(); ++a) {
        for (std::size_t b = a + 1; b < adjacency_.size(); ++b) {
            if (adjacency_[a][b]) out.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    }
    return out;
}

void assert_connected(const Topology& topo) {
    auto pairs = topo.unreachable_pairs();
    if (pairs.empty()) return;
    std::string msg = "topology is not connected; unreachable pairs:";
    const std::size_t shown = pairs.size() < 8 ? pairs.size() : 8;
    for (std::size_t i = 0; i < shown; ++i) {
        msg += " (" + pairs[i].first + "," + pairs[i].second + ")";
    }
    if (shown < pairs.size()) msg += " ...";
    throw DisconnectedTopology(std::move(msg), std::move(pairs));
}

} // namespace layerplace
