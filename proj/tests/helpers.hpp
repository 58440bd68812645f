#ifndef LAYERPLACE_TESTS_HELPERS_HPP
#define LAYERPLACE_TESTS_HELPERS_HPP

// Builders for synthetic problems shared across the test suites.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "layerplace/latency.hpp"
#include "layerplace/model.hpp"
#include "layerplace/rng.hpp"
#include "layerplace/topology.hpp"

namespace testutil {

using namespace layerplace;

inline DeviceClass device(std::string name, double mem_cap_kb, double speed,
                          std::optional<double> compute_cap = std::nullopt) {
    DeviceClass d;
    d.name = std::move(name);
    d.mem_cap_kb = mem_cap_kb;
    d.compute_cap_mmul = compute_cap;
    d.speed_mmul_per_s = speed;
    return d;
}

// s - u1 - u2 - ... - uN - f, unit spacing, range 1 (so consecutive vertices
// are exactly at range: 1 hop each).
inline Topology line_topology(int n_units) {
    std::vector<Vertex> vs;
    vs.push_back({"s", VertexRole::source, 0.0, 0.0});
    for (int i = 1; i <= n_units; ++i) {
        vs.push_back({"u" + std::to_string(i), VertexRole::unit,
                      static_cast<double>(i), 0.0});
    }
    vs.push_back({"f", VertexRole::sink, static_cast<double>(n_units + 1), 0.0});
    return Topology::disk_graph(std::move(vs), 1.0);
}

// layers: {memory_kb, compute_mmul, out_repr_kb} per layer, labels L1, L2...
inline CnnSpec make_cnn(std::string name, double input_kb,
                        std::vector<std::array<double, 3>> layers, double final_out_kb,
                        std::vector<double> reach = {}) {
    CnnSpec c;
    c.name = std::move(name);
    c.input_kb = input_kb;
    int j = 0;
    for (const auto& [m, comp, out] : layers) {
        c.layers.push_back({"L" + std::to_string(++j), m, comp, out});
    }
    c.final_out_kb = final_out_kb;
    c.gate = reach.empty() ? GateProfile::always_to_last(c.depth())
                           : GateProfile::from_reach(std::move(reach));
    return c;
}

// One CNN on a line of identical units.
inline PlacementProblem line_problem(CnnSpec cnn, int n_units, const DeviceClass& dc,
                                     int cap = 1, double rate = 1e6,
                                     EvalConventions ev = {}) {
    PlacementProblem p;
    p.cnns.push_back({std::move(cnn), "s"});
    p.topology = line_topology(n_units);
    for (int i = 1; i <= n_units; ++i) {
        p.unit_classes["u" + std::to_string(i)] = dc;
    }
    p.layers_per_unit_cap = cap;
    p.data_rate_bits_per_s = rate;
    p.conventions = ev;
    return p;
}

// Placement that sends every layer of every CNN to one vertex.
inline Placement place_all(const PlacementProblem& p, const std::string& unit) {
    const int vertex = p.topology.index_of(unit);
    Placement pl;
    for (const auto& entry : p.cnns) {
        pl.assign.emplace_back(static_cast<std::size_t>(entry.cnn.depth()), vertex);
    }
    return pl;
}

struct RandomInstanceParams {
    int max_units = 6;
    int max_layers = 4;
    int max_cnns = 2;
    bool allow_sharing = true;
    bool allow_gates = true;
    // Cap on units^layers so exhaustive search stays fast.
    double max_space = 60000.0;
};

// Small random problem with a connected explicit-edge topology, mixed device
// classes, optional gates and sharing, and random conventions. May well be
// infeasible (tight memory caps are drawn on purpose); always validates.
inline PlacementProblem random_instance(std::uint64_t seed,
                                        const RandomInstanceParams& prm = {}) {
    std::mt19937_64 gen(seed);
    const auto coin = [&](double p) { return uniform01(gen) < p; };

    const int n_units = 1 + static_cast<int>(uniform_index(gen, static_cast<std::size_t>(prm.max_units)));
    const int n_cnns = 1 + static_cast<int>(uniform_index(gen, static_cast<std::size_t>(prm.max_cnns)));
    std::vector<int> depths;
    for (int u = 0; u < n_cnns; ++u) {
        depths.push_back(1 + static_cast<int>(uniform_index(gen, static_cast<std::size_t>(prm.max_layers))));
    }
    const auto total = [&] {
        int t = 0;
        for (int d : depths) t += d;
        return t;
    };
    while (std::pow(n_units, total()) > prm.max_space) {
        auto deepest = std::max_element(depths.begin(), depths.end());
        if (*deepest <= 1) break;
        --*deepest;
    }

    PlacementProblem p;
    for (int u = 0; u < n_cnns; ++u) {
        CnnSpec c;
        c.name = "net" + std::to_string(u);
        c.input_kb = uniform_in(gen, 1.0, 20.0);
        for (int j = 0; j < depths[static_cast<std::size_t>(u)]; ++j) {
            c.layers.push_back({"L" + std::to_string(j + 1), uniform_in(gen, 1.0, 100.0),
                                uniform_in(gen, 0.1, 30.0), uniform_in(gen, 0.1, 60.0)});
        }
        c.final_out_kb = uniform_in(gen, 0.01, 1.0);
        if (prm.allow_gates && c.depth() >= 2 && coin(0.5)) {
            std::vector<double> reach{1.0};
            for (int j = 1; j < c.depth(); ++j) {
                reach.push_back(coin(0.6) ? reach.back()
                                          : reach.back() * uniform_in(gen, 0.05, 0.95));
            }
            c.gate = GateProfile::from_reach(std::move(reach));
        } else {
            c.gate = GateProfile::always_to_last(c.depth());
        }
        p.cnns.push_back({std::move(c), "s" + std::to_string(u + 1)});
    }

    if (prm.allow_sharing && n_cnns == 2 && coin(0.5)) {
        // Both first layers become the same physical layer.
        auto& a = p.cnns[0].cnn.layers[0];
        auto& b = p.cnns[1].cnn.layers[0];
        b.memory_kb = a.memory_kb;
        b.compute_mmul = a.compute_mmul;
        p.sharing.push_back({{{0, 0}, {1, 0}}});
    }

    // Connected explicit-edge topology: random spanning tree plus extras.
    std::vector<Vertex> vs;
    for (int i = 1; i <= n_units; ++i) {
        vs.push_back({"u" + std::to_string(i), VertexRole::unit, static_cast<double>(i), 0.0});
    }
    for (int u = 0; u < n_cnns; ++u) {
        vs.push_back({"s" + std::to_string(u + 1), VertexRole::source, -1.0,
                      static_cast<double>(u)});
    }
    vs.push_back({"f", VertexRole::sink, static_cast<double>(n_units + 1), 0.0});
    deterministic_shuffle(vs, gen);
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 1; i < vs.size(); ++i) {
        edges.emplace_back(vs[uniform_index(gen, i)].id, vs[i].id);
    }
    for (std::size_t a = 0; a < vs.size(); ++a) {
        for (std::size_t b = a + 1; b < vs.size(); ++b) {
            if (coin(0.15)) edges.emplace_back(vs[a].id, vs[b].id);
        }
    }
    p.topology = Topology::explicit_graph(std::move(vs), std::move(edges));

    for (int i = 1; i <= n_units; ++i) {
        // A slice of the units get caps tight enough to break feasibility.
        const double mem = coin(0.15) ? uniform_in(gen, 5.0, 60.0)
                                      : uniform_in(gen, 80.0, 400.0);
        const double speed = uniform_in(gen, 40.0, 600.0);
        std::optional<double> load;
        if (coin(0.3)) load = uniform_in(gen, 10.0, 80.0);
        p.unit_classes["u" + std::to_string(i)] =
            device("dev" + std::to_string(i), mem, speed, load);
    }

    p.layers_per_unit_cap = 1 + static_cast<int>(uniform_index(gen, 3));
    const double rates[] = {1e6, 7.2e6, 72.2e6};
    p.data_rate_bits_per_s = rates[uniform_index(gen, 3)];
    p.conventions.processing_weight =
        coin(0.5) ? ProcessingWeight::as_written : ProcessingWeight::next_layer_compat;
    p.conventions.include_processing = coin(0.8);
    p.conventions.payload_unit =
        coin(0.5) ? PayloadUnit::bits_exact : PayloadUnit::bytes_as_bits_compat;

    ensure_valid(p);
    return p;
}

} // namespace testutil

#endif
