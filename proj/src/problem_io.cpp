#include "layerplace/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace layerplace {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key, const std::string& ctx) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw Error("missing key '" + std::string(key) + "' in " + ctx);
    }
    return *it;
}

double num(const json& j, const char* key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_number()) {
        throw Error("key '" + std::string(key) + "' in " + ctx + " is not a number");
    }
    return v.get<double>();
}

std::string str(const json& j, const char* key, const std::string& ctx) {
    const json& v = require(j, key, ctx);
    if (!v.is_string()) {
        throw Error("key '" + std::string(key) + "' in " + ctx + " is not a string");
    }
    return v.get<std::string>();
}

} // namespace

json cnn_to_json(const CnnSpec& cnn) {
    json layers = json::array();
    for (const LayerSpec& l : cnn.layers) {
        layers.push_back({{"label", l.label},
                          {"memory_kb", l.memory_kb},
                          {"compute_mmul", l.compute_mmul},
                          {"out_repr_kb", l.out_repr_kb}});
    }
    return {{"name", cnn.name},
            {"input_kb", cnn.input_kb},
            {"final_out_kb", cnn.final_out_kb},
            {"layers", std::move(layers)},
            {"reach_prob", cnn.gate.reach_prob}};
}

CnnSpec cnn_from_json(const json& j) {
    CnnSpec cnn;
    cnn.name = str(j, "name", "cnn");
    const std::string ctx = "cnn '" + cnn.name + "'";
    cnn.input_kb = num(j, "input_kb", ctx);
    cnn.final_out_kb = num(j, "final_out_kb", ctx);
    const json& layers = require(j, "layers", ctx);
    if (!layers.is_array() || layers.empty()) {
        throw Error(ctx + " needs a non-empty 'layers' array");
    }
    for (const json& lj : layers) {
        LayerSpec l;
        l.label = str(lj, "label", ctx + " layer");
        const std::string lctx = ctx + " layer '" + l.label + "'";
        l.memory_kb = num(lj, "memory_kb", lctx);
        l.compute_mmul = num(lj, "compute_mmul", lctx);
        l.out_repr_kb = num(lj, "out_repr_kb", lctx);
        cnn.layers.push_back(std::move(l));
    }
    if (const auto it = j.find("reach_prob"); it != j.end()) {
        if (!it->is_array() || it->size() != cnn.layers.size()) {
            throw Error(ctx + " reach_prob must list one probability per layer");
        }
        cnn.gate = GateProfile::from_reach(it->get<std::vector<double>>());
    } else {
        cnn.gate = GateProfile::always_to_last(cnn.depth());
    }
    return cnn;
}

json device_to_json(const DeviceClass& device) {
    json j = {{"mem_cap_kb", device.mem_cap_kb},
              {"speed_mmul_per_s", device.speed_mmul_per_s}};
    if (device.compute_cap_mmul) {
        j["compute_cap_mmul"] = *device.compute_cap_mmul;
    }
    return j;
}

DeviceClass device_from_json(const std::string& name, const json& j) {
    DeviceClass d;
    d.name = name;
    const std::string ctx = "device class '" + name + "'";
    d.mem_cap_kb = num(j, "mem_cap_kb", ctx);
    d.speed_mmul_per_s = num(j, "speed_mmul_per_s", ctx);
    if (j.contains("compute_cap_mmul")) {
        d.compute_cap_mmul = num(j, "compute_cap_mmul", ctx);
    }
    return d;
}

json topology_to_json(const Topology& topo) {
    json vertices = json::array();
    for (const Vertex& v : topo.vertices()) {
        vertices.push_back(
            {{"id", v.id}, {"role", to_string(v.role)}, {"x", v.x}, {"y", v.y}});
    }
    json j = {{"range", topo.range()}, {"vertices", std::move(vertices)}};
    if (topo.from_explicit_edges()) {
        json edges = json::array();
        for (const auto& [a, b] : topo.edges()) {
            edges.push_back({topo.vertex(a).id, topo.vertex(b).id});
        }
        j["edges"] = std::move(edges);
    }
    return j;
}

Topology topology_from_json(const json& j) {
    const json& vj = require(j, "vertices", "topology");
    if (!vj.is_array() || vj.empty()) {
        throw Error("topology needs a non-empty 'vertices' array");
    }
    std::vector<Vertex> vertices;
    for (const json& entry : vj) {
        Vertex v;
        v.id = str(entry, "id", "topology vertex");
        v.role = role_from_string(str(entry, "role", "vertex '" + v.id + "'"));
        v.x = num(entry, "x", "vertex '" + v.id + "'");
        v.y = num(entry, "y", "vertex '" + v.id + "'");
        vertices.push_back(std::move(v));
    }
    const double range = j.contains("range") ? num(j, "range", "topology") : 0.0;
    if (const auto it = j.find("edges"); it != j.end()) {
        std::vector<std::pair<std::string, std::string>> edges;
        for (const json& e : *it) {
            if (!e.is_array() || e.size() != 2) {
                throw Error("topology edges must be [a, b] id pairs");
            }
            edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        }
        return Topology::explicit_graph(std::move(vertices), std::move(edges), range);
    }
    if (!j.contains("range")) {
        throw Error("topology needs 'range' (disk graph) or 'edges'");
    }
    return Topology::disk_graph(std::move(vertices), range);
}

json problem_to_json(const PlacementProblem& problem) {
    json cnns = json::array();
    for (const auto& entry : problem.cnns) {
        json cj = cnn_to_json(entry.cnn);
        cj["source"] = entry.source_id;
        cnns.push_back(std::move(cj));
    }

    json classes = json::object();
    json members = json::object();
    for (const auto& [unit, cls] : problem.unit_classes) {
        classes[cls.name] = device_to_json(cls);
        members[unit] = cls.name;
    }

    json sharing = json::array();
    for (const SharingGroup& group : problem.sharing) {
        json members_j = json::array();
        for (const LayerRef& m : group.members) {
            members_j.push_back({{"cnn", m.cnn}, {"layer", m.layer + 1}});
        }
        sharing.push_back(std::move(members_j));
    }

    json j = {{"cnns", std::move(cnns)},
              {"units", {{"classes", std::move(classes)}, {"members", std::move(members)}}},
              {"topology", topology_to_json(problem.topology)},
              {"config",
               {{"layers_per_unit_cap", problem.layers_per_unit_cap},
                {"data_rate_bits_per_s", problem.data_rate_bits_per_s},
                {"conventions",
                 {{"processing_weight", to_string(problem.conventions.processing_weight)},
                  {"include_processing", problem.conventions.include_processing},
                  {"payload_unit", to_string(problem.conventions.payload_unit)}}}}}};
    if (!sharing.empty()) {
        j["sharing"] = std::move(sharing);
    }
    return j;
}

PlacementProblem problem_from_json(const json& j) {
    PlacementProblem problem;

    const json& cnns = require(j, "cnns", "problem");
    if (!cnns.is_array() || cnns.empty()) {
        throw Error("problem needs a non-empty 'cnns' array");
    }
    for (const json& cj : cnns) {
        PlacementProblem::CnnEntry entry;
        entry.cnn = cnn_from_json(cj);
        entry.source_id = str(cj, "source", "cnn '" + entry.cnn.name + "'");
        problem.cnns.push_back(std::move(entry));
    }

    const json& units = require(j, "units", "problem");
    const json& classes = require(units, "classes", "units");
    std::map<std::string, DeviceClass> by_name;
    for (const auto& [name, cj] : classes.items()) {
        by_name[name] = device_from_json(name, cj);
    }
    const json& members = require(units, "members", "units");
    for (const auto& [unit, cls] : members.items()) {
        if (!cls.is_string()) {
            throw Error("units.members['" + unit + "'] must name a class");
        }
        const auto it = by_name.find(cls.get<std::string>());
        if (it == by_name.end()) {
            throw Error("unit '" + unit + "' references unknown class '" +
                        cls.get<std::string>() + "'");
        }
        problem.unit_classes[unit] = it->second;
    }

    problem.topology = topology_from_json(require(j, "topology", "problem"));

    if (const auto it = j.find("sharing"); it != j.end()) {
        for (const json& gj : *it) {
            SharingGroup group;
            for (const json& mj : gj) {
                const int cnn = static_cast<int>(num(mj, "cnn", "sharing member"));
                const int layer = static_cast<int>(num(mj, "layer", "sharing member"));
                group.members.push_back({cnn, layer - 1});
            }
            problem.sharing.push_back(std::move(group));
        }
    }

    const json& config = require(j, "config", "problem");
    problem.layers_per_unit_cap =
        config.contains("layers_per_unit_cap")
            ? static_cast<int>(num(config, "layers_per_unit_cap", "config"))
            : 1;
    problem.data_rate_bits_per_s = num(config, "data_rate_bits_per_s", "config");
    if (const auto it = config.find("conventions"); it != config.end()) {
        EvalConventions ev;
        if (it->contains("processing_weight")) {
            ev.processing_weight =
                processing_weight_from_string(str(*it, "processing_weight", "conventions"));
        }
        if (it->contains("include_processing")) {
            const json& v = require(*it, "include_processing", "conventions");
            if (!v.is_boolean()) {
                throw Error("conventions.include_processing must be a boolean");
            }
            ev.include_processing = v.get<bool>();
        }
        if (it->contains("payload_unit")) {
            ev.payload_unit = payload_unit_from_string(str(*it, "payload_unit", "conventions"));
        }
        problem.conventions = ev;
    }

    ensure_valid(problem);
    return problem;
}

json placement_to_json(const Placement& placement, const PlacementProblem& problem) {
    if (!placement.shape_matches(problem)) {
        throw Error("placement shape does not match the problem");
    }
    json placements = json::array();
    for (std::size_t u = 0; u < problem.cnns.size(); ++u) {
        const CnnSpec& cnn = problem.cnns[u].cnn;
        json assignments = json::array();
        for (int jl = 0; jl < cnn.depth(); ++jl) {
            const int vertex = placement.assign[u][static_cast<std::size_t>(jl)];
            assignments.push_back(
                {{"layer", cnn.layers[static_cast<std::size_t>(jl)].label},
                 {"unit", problem.topology.vertex(vertex).id}});
        }
        placements.push_back({{"cnn", cnn.name}, {"assignments", std::move(assignments)}});
    }
    return {{"placements", std::move(placements)}};
}

Placement placement_from_json(const json& j, const PlacementProblem& problem) {
    const json& placements = require(j, "placements", "placement document");
    if (!placements.is_array() ||
        placements.size() != problem.cnns.size()) {
        throw Error("placement document needs one 'placements' entry per CNN (" +
                    std::to_string(problem.cnns.size()) + ")");
    }

    // Entries match CNNs by name when names are unique, by position otherwise
    // (a problem may run several instances of the same network).
    bool unique_names = true;
    for (std::size_t a = 0; a < problem.cnns.size() && unique_names; ++a) {
        for (std::size_t b = a + 1; b < problem.cnns.size(); ++b) {
            if (problem.cnns[a].cnn.name == problem.cnns[b].cnn.name) {
                unique_names = false;
                break;
            }
        }
    }

    Placement placement;
    placement.assign.resize(problem.cnns.size());
    std::vector<bool> filled(problem.cnns.size(), false);
    std::size_t position = 0;
    for (const json& pj : placements) {
        const std::string name = str(pj, "cnn", "placement entry");
        std::size_t u = position;
        if (unique_names) {
            u = problem.cnns.size();
            for (std::size_t k = 0; k < problem.cnns.size(); ++k) {
                if (problem.cnns[k].cnn.name == name) {
                    u = k;
                    break;
                }
            }
            if (u == problem.cnns.size()) {
                throw Error("placement names unknown cnn '" + name + "'");
            }
        } else if (problem.cnns[u].cnn.name != name) {
            throw Error("placement entry " + std::to_string(position) + " names '" + name +
                        "', expected '" + problem.cnns[u].cnn.name + "'");
        }
        if (filled[u]) {
            throw Error("placement lists cnn '" + name + "' twice");
        }
        filled[u] = true;

        const CnnSpec& cnn = problem.cnns[u].cnn;
        const json& assignments = require(pj, "assignments", "cnn '" + name + "'");
        if (!assignments.is_array() ||
            static_cast<int>(assignments.size()) != cnn.depth()) {
            throw Error("cnn '" + name + "' needs " + std::to_string(cnn.depth()) +
                        " assignments");
        }
        std::vector<int>& row = placement.assign[u];
        int jl = 0;
        for (const json& aj : assignments) {
            const json& layer = require(aj, "layer", "assignment of cnn '" + name + "'");
            const std::string& expected = cnn.layers[static_cast<std::size_t>(jl)].label;
            if (layer.is_string()) {
                if (layer.get<std::string>() != expected) {
                    throw Error("cnn '" + name + "' assignment " + std::to_string(jl + 1) +
                                " names layer '" + layer.get<std::string>() +
                                "', expected '" + expected + "'");
                }
            } else if (layer.is_number_integer()) {
                if (layer.get<int>() != jl + 1) {
                    throw Error("cnn '" + name + "' assignment " + std::to_string(jl + 1) +
                                " has layer index " + std::to_string(layer.get<int>()));
                }
            } else {
                throw Error("assignment 'layer' must be a label or 1-based index");
            }
            const std::string unit = str(aj, "unit", "assignment of cnn '" + name + "'");
            const int vertex = problem.topology.index_of(unit);
            if (vertex < 0) {
                throw Error("cnn '" + name + "' layer '" + expected +
                            "' assigned to unknown vertex '" + unit + "'");
            }
            row.push_back(vertex);
            ++jl;
        }
        ++position;
    }
    return placement;
}

json breakdown_to_json(const LatencyBreakdown& breakdown) {
    json per_unit = json::object();
    for (const auto& [unit, seconds] : breakdown.processing_by_unit) {
        per_unit[unit] = seconds * 1000.0;
    }
    return {{"t_ms", breakdown.total_s * 1000.0},
            {"t_t_ms", breakdown.transmission_s * 1000.0},
            {"t_p_ms", breakdown.processing_s * 1000.0},
            {"t_s_ms", breakdown.source_s * 1000.0},
            {"t_inter_ms", breakdown.inter_layer_s * 1000.0},
            {"t_f_ms", breakdown.sink_s * 1000.0},
            {"t_p_per_unit_ms", std::move(per_unit)}};
}

std::string breakdown_csv(const LatencyBreakdown& breakdown) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  breakdown.total_s * 1000.0, breakdown.transmission_s * 1000.0,
                  breakdown.processing_s * 1000.0, breakdown.source_s * 1000.0,
                  breakdown.inter_layer_s * 1000.0, breakdown.sink_s * 1000.0);
    return std::string("t_ms,t_t_ms,t_p_ms,t_s_ms,t_inter_ms,t_f_ms\n") + buf;
}

json solution_to_json(const Solution& solution, const PlacementProblem& problem,
                      const SolverConfig& config) {
    json solver = {{"method", to_string(config.method)},
                   {"seed", config.seed},
                   {"proven_optimal", solution.proven_optimal},
                   {"nodes_explored", solution.stats.nodes_explored},
                   {"ties", solution.stats.ties},
                   {"restarts", solution.stats.restarts_run}};
    json j = placement_to_json(solution.placement, problem);
    j["objective_ms"] = solution.objective_s * 1000.0;
    j["breakdown"] = breakdown_to_json(solution.breakdown);
    j["solver"] = std::move(solver);
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("failed to parse '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    out << text;
    if (!out) {
        throw Error("failed while writing '" + path + "'");
    }
}

PlacementProblem load_problem(const std::string& path) {
    try {
        return problem_from_json(load_json_file(path));
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw Error(std::string(e.what()) + " (while loading '" + path + "')");
    }
}

void save_problem(const PlacementProblem& problem, const std::string& path) {
    write_text_file(path, problem_to_json(problem).dump(2) + "\n");
}

} // namespace layerplace
