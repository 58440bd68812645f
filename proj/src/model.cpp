#include "layerplace/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace layerplace {
namespace {

std::string layer_name(int u, int j) {
    std::ostringstream os;
    os << "cnn " << u << " layer " << (j + 1);
    return os.str();
}

} // namespace

GateProfile GateProfile::from_reach(std::vector<double> reach) {
    GateProfile g;
    g.exit_prob = derive_exit_probabilities(reach);
    g.reach_prob = std::move(reach);
    return g;
}

GateProfile GateProfile::always_to_last(int depth) {
    return from_reach(std::vector<double>(static_cast<std::size_t>(depth), 1.0));
}

std::vector<double> derive_exit_probabilities(const std::vector<double>& reach_prob) {
    if (reach_prob.empty()) throw ProfileError("reach_prob must not be empty");
    if (reach_prob.front() != 1.0) throw ProfileError("reach_prob[0] must be exactly 1");
    for (std::size_t j = 0; j < reach_prob.size(); ++j) {
        if (!(reach_prob[j] >= 0.0 && reach_prob[j] <= 1.0)) {
            throw ProfileError("reach_prob entries must lie in [0, 1]");
        }
        if (j + 1 < reach_prob.size() && reach_prob[j + 1] > reach_prob[j]) {
            throw ProfileError("reach_prob must be non-increasing");
        }
    }
    std::vector<double> exit(reach_prob.size(), 0.0);
    double used = 0.0;
    for (std::size_t j = 0; j + 1 < reach_prob.size(); ++j) {
        exit[j] = reach_prob[j] - reach_prob[j + 1]; // >= 0 by monotonicity
        used += exit[j];
    }
    // The last layer takes whatever mass is left so the total is 1 even
    // after rounding in the subtractions above.
    exit.back() = std::max(0.0, 1.0 - used);
    return exit;
}

int PlacementProblem::total_layers() const {
    int n = 0;
    for (const auto& e : cnns) n += e.cnn.depth();
    return n;
}

std::vector<std::string> validate_problem(const PlacementProblem& p) {
    std::vector<std::string> issues;
    auto add = [&issues](std::string msg) { issues.push_back(std::move(msg)); };

    if (p.layers_per_unit_cap < 1) add("layers_per_unit_cap must be >= 1");
    if (!(p.data_rate_bits_per_s > 0.0)) add("data_rate_bits_per_s must be positive");

    const int C = static_cast<int>(p.cnns.size());

    for (int u = 0; u < C; ++u) {
        const CnnSpec& cnn = p.cnns[static_cast<std::size_t>(u)].cnn;
        const std::string tag = "cnn " + std::to_string(u) + " (" + cnn.name + ")";
        if (cnn.layers.empty()) {
            add(tag + ": has no layers");
            continue;
        }
        if (cnn.input_kb < 0.0) add(tag + ": negative input_kb");
        if (cnn.final_out_kb < 0.0) add(tag + ": negative final_out_kb");
        for (int j = 0; j < cnn.depth(); ++j) {
            const LayerSpec& l = cnn.layers[static_cast<std::size_t>(j)];
            if (l.memory_kb < 0.0 || l.compute_mmul < 0.0 || l.out_repr_kb < 0.0) {
                add(tag + " layer " + std::to_string(j + 1) + ": negative field");
            }
        }
        if (cnn.gate.depth() != cnn.depth()) {
            add(tag + ": gate profile length " + std::to_string(cnn.gate.depth()) +
                " does not match depth " + std::to_string(cnn.depth()));
            continue;
        }
        std::vector<double> derived;
        try {
            derived = derive_exit_probabilities(cnn.gate.reach_prob);
        } catch (const ProfileError& e) {
            add(tag + ": " + e.what());
            continue;
        }
        if (cnn.gate.exit_prob.size() != derived.size()) {
            add(tag + ": exit_prob length mismatch");
            continue;
        }
        double total = 0.0;
        for (std::size_t j = 0; j < derived.size(); ++j) {
            if (std::abs(cnn.gate.exit_prob[j] - derived[j]) > 1e-12) {
                add(tag + ": exit_prob[" + std::to_string(j) +
                    "] inconsistent with reach_prob");
            }
            if (cnn.gate.exit_prob[j] < 0.0) {
                add(tag + ": negative exit_prob[" + std::to_string(j) + "]");
            }
            total += cnn.gate.exit_prob[j];
        }
        if (std::abs(total - 1.0) > 1e-12) add(tag + ": exit_prob does not sum to 1");
    }

    // Topology shape.
    const auto sinks = p.topology.sink_indices();
    const auto sources = p.topology.source_indices();
    const auto units = p.topology.unit_indices();
    if (sinks.size() != 1) {
        add("topology must have exactly one sink vertex, found " +
            std::to_string(sinks.size()));
    }
    if (static_cast<int>(sources.size()) != C) {
        add("topology has " + std::to_string(sources.size()) +
            " source vertices for " + std::to_string(C) + " cnns");
    }
    if (C > 0 && units.empty()) add("topology has no unit vertices");
    if (!p.topology.connected()) {
        auto pairs = p.topology.unreachable_pairs();
        std::string msg = "topology is not connected (" +
                          std::to_string(pairs.size()) + " unreachable pairs, e.g. ";
        if (!pairs.empty()) msg += pairs.front().first + "," + pairs.front().second;
        msg += ")";
        add(std::move(msg));
    }

    // CNN -> source bijection.
    std::set<std::string> used_sources;
    for (int u = 0; u < C; ++u) {
        const std::string& sid = p.cnns[static_cast<std::size_t>(u)].source_id;
        const int idx = p.topology.index_of(sid);
        if (idx < 0 || p.topology.vertex(idx).role != VertexRole::source) {
            add("cnn " + std::to_string(u) + ": source_id '" + sid +
                "' is not a source vertex");
        } else if (!used_sources.insert(sid).second) {
            add("source vertex '" + sid + "' is assigned to more than one cnn");
        }
    }

    // Device classes.
    for (int i : units) {
        const std::string& id = p.topology.vertex(i).id;
        auto it = p.unit_classes.find(id);
        if (it == p.unit_classes.end()) {
            add("unit '" + id + "' has no device class");
            continue;
        }
        const DeviceClass& dc = it->second;
        if (!(dc.mem_cap_kb > 0.0)) add("unit '" + id + "': mem_cap_kb must be positive");
        if (!(dc.speed_mmul_per_s > 0.0)) {
            add("unit '" + id + "': speed_mmul_per_s must be positive");
        }
        if (dc.compute_cap_mmul && !(*dc.compute_cap_mmul > 0.0)) {
            add("unit '" + id + "': compute_cap_mmul must be positive when present");
        }
    }
    for (const auto& [id, dc] : p.unit_classes) {
        (void)dc;
        const int idx = p.topology.index_of(id);
        if (idx < 0 || p.topology.vertex(idx).role != VertexRole::unit) {
            add("unit_classes entry '" + id + "' does not name a unit vertex");
        }
    }

    // Sharing groups.
    std::set<std::pair<int, int>> seen;
    for (std::size_t gi = 0; gi < p.sharing.size(); ++gi) {
        const SharingGroup& g = p.sharing[gi];
        const std::string tag = "sharing group " + std::to_string(gi);
        if (g.members.size() < 2) {
            add(tag + ": needs at least two members");
            continue;
        }
        const LayerSpec* first = nullptr;
        for (const LayerRef& m : g.members) {
            if (m.cnn < 0 || m.cnn >= C ||
                m.layer < 0 || m.layer >= p.cnn(m.cnn).depth()) {
                add(tag + ": member out of range");
                first = nullptr;
                break;
            }
            if (!seen.insert({m.cnn, m.layer}).second) {
                add(tag + ": " + layer_name(m.cnn, m.layer) +
                    " appears in more than one group entry");
            }
            const LayerSpec& l = p.cnn(m.cnn).layers[static_cast<std::size_t>(m.layer)];
            if (!first) {
                first = &l;
            } else if (l.memory_kb != first->memory_kb ||
                       l.compute_mmul != first->compute_mmul) {
                add(tag + ": members differ in memory or compute (" +
                    layer_name(m.cnn, m.layer) + ")");
            }
        }
    }

    return issues;
}

void ensure_valid(const PlacementProblem& problem) {
    auto issues = validate_problem(problem);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

// ---- Fixtures ----

namespace {

CnnSpec make_cnn5() {
    CnnSpec c;
    c.name = "cnn5";
    c.input_kb = 9.41;
    c.layers = {
        {"L1", 19.20, 3.81, 50.18},
        {"L2", 409.60, 20.08, 12.54},
        {"L3", 4816.90, 1.20, 1.54},
        {"L4", 294.91, 0.07, 0.77},
        {"L5", 7.68, 0.002, 0.04},
    };
    c.final_out_kb = 0.04;
    c.gate = GateProfile::always_to_last(c.depth());
    return c;
}

CnnSpec make_gc6() {
    CnnSpec c;
    c.name = "gc6";
    c.input_kb = 9.41;
    c.layers = {
        {"L1", 19.20, 3.81, 50.18},
        {"L2", 19570.18, 4.89, 50.18}, // exit gate; forwards its input when not taken
        {"L3", 409.60, 20.08, 12.54},
        {"L4", 4816.90, 1.20, 1.54},
        {"L5", 294.91, 0.07, 0.77},
        {"L6", 7.68, 0.002, 0.04},
    };
    c.final_out_kb = 0.04;
    c.gate = GateProfile::from_reach({1.0, 1.0, 0.01, 0.01, 0.01, 0.01});
    return c;
}

CnnSpec make_alexnet() {
    CnnSpec c;
    c.name = "alexnet";
    c.input_kb = 618.35;
    c.layers = {
        {"L1", 139.78, 105.73, 279.94},
        {"L2", 1229.82, 224.34, 173.06},
        {"L3", 3540.48, 149.52, 259.58},
        {"L4", 2655.74, 112.14, 259.58},
        {"L5", 1770.50, 74.84, 36.86},
        {"L6", 151011.39, 37.75, 16.38},
        {"L7", 67158.02, 16.78, 16.38},
    };
    c.final_out_kb = 16.38;
    c.gate = GateProfile::always_to_last(c.depth());
    return c;
}

CnnSpec make_gc_alexnet() {
    CnnSpec c;
    c.name = "gc-alexnet";
    c.input_kb = 618.35;
    c.layers = {
        {"L1", 139.78, 105.73, 279.94},
        {"L2", 1229.82, 224.34, 173.06},
        {"L3", 22185.22, 5.55, 173.06}, // exit gate
        {"L4", 3540.48, 149.52, 259.58},
        {"L5", 2655.74, 112.14, 259.58},
        {"L6", 1770.50, 74.84, 36.86},
        {"L7", 151011.39, 37.75, 16.38},
        {"L8", 67158.02, 16.78, 16.38},
    };
    c.final_out_kb = 16.38;
    c.gate = GateProfile::from_reach({1.0, 1.0, 1.0, 0.01, 0.01, 0.01, 0.01, 0.01});
    return c;
}

// The 11-unit deployment used by the worked examples: co-located source and
// sink at the origin, radio range 2.5 m.
std::vector<Vertex> fig1b_units() {
    return {
        {"n01", VertexRole::unit, 3.0, -2.0},   {"n02", VertexRole::unit, 5.0, -3.0},
        {"n03", VertexRole::unit, 3.5, 1.0},    {"n04", VertexRole::unit, 1.0, -2.75},
        {"n05", VertexRole::unit, -1.0, -1.5},  {"n06", VertexRole::unit, 2.0, -0.5},
        {"n07", VertexRole::unit, -1.0, 0.75},  {"n08", VertexRole::unit, 1.25, 1.55},
        {"n09", VertexRole::unit, -2.5, -1.0},  {"n10", VertexRole::unit, -1.3, -3.0},
        {"n11", VertexRole::unit, 4.25, -1.0},
    };
}

constexpr double kFig1bRange = 2.5;
constexpr double kWifi4RateBps = 72.2e6;

Topology make_fig1b(int n_sources) {
    std::vector<Vertex> vs;
    if (n_sources == 1) {
        vs.push_back({"s", VertexRole::source, 0.0, 0.0});
    } else {
        for (int k = 1; k <= n_sources; ++k) {
            vs.push_back({"s" + std::to_string(k), VertexRole::source, 0.0, 0.0});
        }
    }
    vs.push_back({"f", VertexRole::sink, 0.0, 0.0});
    for (auto& u : fig1b_units()) vs.push_back(std::move(u));
    return Topology::disk_graph(std::move(vs), kFig1bRange);
}

} // namespace

CnnSpec builtin_cnn(const std::string& name) {
    if (name == "cnn5") return make_cnn5();
    if (name == "gc6") return make_gc6();
    if (name == "alexnet") return make_alexnet();
    if (name == "gc-alexnet") return make_gc_alexnet();
    throw UnknownFixture("unknown cnn fixture: " + name);
}

DeviceClass builtin_device(const std::string& name) {
    if (name == "stm32h7") return {"stm32h7", 512.0, std::nullopt, 40.0};
    if (name == "raspberry-3bp") return {"raspberry-3bp", 512000.0, std::nullopt, 560.0};
    if (name == "odroid-c2") return {"odroid-c2", 1000000.0, std::nullopt, 600.0};
    throw UnknownFixture("unknown device fixture: " + name);
}

Topology builtin_topology(const std::string& name) {
    if (name == "fig1b") return make_fig1b(1);
    throw UnknownFixture("unknown topology fixture: " + name);
}

Fixture builtin_fixture(const std::string& name) {
    for (const auto& n : builtin_cnn_names()) {
        if (n == name) return builtin_cnn(name);
    }
    for (const auto& n : builtin_device_names()) {
        if (n == name) return builtin_device(name);
    }
    for (const auto& n : builtin_topology_names()) {
        if (n == name) return builtin_topology(name);
    }
    throw UnknownFixture("unknown fixture: " + name);
}

std::vector<std::string> builtin_cnn_names() {
    return {"cnn5", "gc6", "alexnet", "gc-alexnet"};
}

std::vector<std::string> builtin_device_names() {
    return {"stm32h7", "raspberry-3bp", "odroid-c2"};
}

std::vector<std::string> builtin_topology_names() { return {"fig1b"}; }

std::map<std::string, DeviceClass> fig1b_unit_classes() {
    const DeviceClass stm = builtin_device("stm32h7");
    const DeviceClass odroid = builtin_device("odroid-c2");
    std::map<std::string, DeviceClass> m;
    for (const char* id : {"n01", "n02", "n05", "n06", "n07", "n08", "n09"}) m[id] = stm;
    for (const char* id : {"n03", "n04", "n10", "n11"}) m[id] = odroid;
    return m;
}

PlacementProblem builtin_problem(const std::string& name) {
    PlacementProblem p;
    p.unit_classes = fig1b_unit_classes();
    p.layers_per_unit_cap = 1;
    p.data_rate_bits_per_s = kWifi4RateBps;
    if (name == "fig1b-cnn5" || name == "fig1b-gc6") {
        p.topology = make_fig1b(1);
        p.cnns.push_back({builtin_cnn(name == "fig1b-cnn5" ? "cnn5" : "gc6"), "s"});
        return p;
    }
    if (name == "fig1b-2cnn5" || name == "fig1b-2cnn5-shared12") {
        p.topology = make_fig1b(2);
        p.cnns.push_back({builtin_cnn("cnn5"), "s1"});
        p.cnns.push_back({builtin_cnn("cnn5"), "s2"});
        if (name == "fig1b-2cnn5-shared12") {
            p.sharing.push_back({{{0, 0}, {1, 0}}});
            p.sharing.push_back({{{0, 1}, {1, 1}}});
        }
        return p;
    }
    throw UnknownFixture("unknown problem fixture: " + name);
}

std::vector<std::string> builtin_problem_names() {
    return {"fig1b-cnn5", "fig1b-gc6", "fig1b-2cnn5", "fig1b-2cnn5-shared12"};
}

} // namespace layerplace
