#ifndef LAYERPLACE_TOPOLOGY_HPP
#define LAYERPLACE_TOPOLOGY_HPP

// Network topology: vertices with roles (compute unit, image source, decision
// sink) connected by symmetric communication links. Links either come from a
// disk model (two vertices hear each other iff their Euclidean distance is
// within the radio range, ties included) or from an explicit edge list.
// Multi-hop cost is hop count, precomputed all-pairs by BFS.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "layerplace/errors.hpp"

namespace layerplace {

enum class VertexRole { unit, source, sink };

std::string to_string(VertexRole role);
VertexRole role_from_string(std::string_view name);

struct Vertex {
    std::string id;
    VertexRole role = VertexRole::unit;
    double x = 0.0;
    double y = 0.0;
};

// Marker for "no path" in raw hop matrices. Topology::hops() converts it to
// an empty optional so callers never do arithmetic on it by accident.
inline constexpr int kUnreachable = -1;

// Adjacency of the disk graph over `positions`: edge iff distance <= range
// (exact ties are edges) and the endpoints are distinct. Coincident vertices
// are adjacent. Symmetric, irreflexive.
std::vector<std::vector<bool>>
build_disk_graph(const std::vector<std::pair<double, double>>& positions, double range);

// BFS from every vertex; entry [a][b] is the minimum hop count, kUnreachable
// if no path. Diagonal is 0.
std::vector<std::vector<int>>
all_pairs_hop_distance(const std::vector<std::vector<bool>>& adjacency);

class Topology {
  public:
    Topology() = default;

    // Disk-graph construction from vertex coordinates.
    static Topology disk_graph(std::vector<Vertex> vertices, double range);

    // Explicit undirected edge list keyed by vertex id; geometry is kept for
    // display only. Throws Error on an unknown endpoint. `range` is advisory.
    static Topology explicit_graph(std::vector<Vertex> vertices,
                                   std::vector<std::pair<std::string, std::string>> edges,
                                   double range = 0.0);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const Vertex& vertex(int idx) const { return vertices_.at(static_cast<std::size_t>(idx)); }
    int size() const { return static_cast<int>(vertices_.size()); }
    double range() const { return range_; }
    bool from_explicit_edges() const { return explicit_edges_; }

    bool adjacent(int a, int b) const;

    // Hop distance, empty if unreachable.
    std::optional<int> hops(int a, int b) const;

    // Index of the vertex with this id, or -1 if absent.
    int index_of(std::string_view id) const;

    std::vector<int> unit_indices() const;
    std::vector<int> source_indices() const;
    std::vector<int> sink_indices() const;

    bool connected() const;

    // Every unordered pair with no connecting path, by id.
    std::vector<std::pair<std::string, std::string>> unreachable_pairs() const;

    // Undirected edge list (a < b by index), for serialization.
    std::vector<std::pair<int, int>> edges() const;

  private:
    void finish(); // fills hop matrix from adjacency

    std::vector<Vertex> vertices_;
    double range_ = 0.0;
    bool explicit_edges_ = false;
    std::vector<std::vector<bool>> adjacency_;
    std::vector<std::vector<int>> hop_;
};

// Throws DisconnectedTopology listing the unreachable pairs.
void assert_connected(const Topology& topo);

} // namespace layerplace

#endif
