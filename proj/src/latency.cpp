#include "layerplace/latency.hpp"

#include <set>
#include <sstream>

namespace layerplace {

namespace {

void require_shape(const Placement& pl, const PlacementProblem& p) {
    if (!pl.shape_matches(p)) {
        throw Error("placement shape does not match the problem");
    }
}

const DeviceClass& device_at(const ProblemView& view, const PlacementProblem& p, int vertex) {
    const DeviceClass* dc = view.device.at(static_cast<std::size_t>(vertex));
    if (!dc) {
        throw MissingDeviceClass("vertex '" + p.topology.vertex(vertex).id +
                                 "' is not a compute unit with a device class");
    }
    return *dc;
}

// Per-vertex processing seconds. Accumulation order per vertex is (cnn,
// layer) ascending; see the exactness contract in the header.
std::vector<double> per_vertex_processing(const Placement& pl, const PlacementProblem& p,
                                          const ProblemView& view) {
    std::vector<double> per(static_cast<std::size_t>(p.topology.size()), 0.0);
    for (std::size_t u = 0; u < p.cnns.size(); ++u) {
        const CnnSpec& cnn = p.cnns[u].cnn;
        for (int j = 0; j < cnn.depth(); ++j) {
            double w = 0.0;
            if (!processing_term_weight(p.conventions, cnn.gate.reach_prob, j,
                                        cnn.depth(), w)) {
                continue;
            }
            const int at = pl.assign[u][static_cast<std::size_t>(j)];
            const DeviceClass& dc = device_at(view, p, at);
            per[static_cast<std::size_t>(at)] += processing_term(
                w, cnn.layers[static_cast<std::size_t>(j)].compute_mmul,
                dc.speed_mmul_per_s);
        }
    }
    return per;
}

} // namespace

bool Placement::shape_matches(const PlacementProblem& problem) const {
    if (assign.size() != problem.cnns.size()) return false;
    for (std::size_t u = 0; u < assign.size(); ++u) {
        if (static_cast<int>(assign[u].size()) != problem.cnn(static_cast<int>(u)).depth()) {
            return false;
        }
        for (int v : assign[u]) {
            if (v < 0 || v >= problem.topology.size()) return false;
        }
    }
    return true;
}

double transmission_time(double payload_kb, double rate_bits_per_s,
                         std::optional<int> hops, PayloadUnit unit) {
    if (!hops) throw UnreachableHop("transfer between unreachable vertices");
    const double factor = unit == PayloadUnit::bits_exact ? 8000.0 : 1000.0;
    return ((payload_kb * factor) / rate_bits_per_s) * static_cast<double>(*hops);
}

double source_time(const Placement& pl, const PlacementProblem& p) {
    require_shape(pl, p);
    const ProblemView view = ProblemView::build(p);
    double acc = 0.0;
    for (std::size_t u = 0; u < p.cnns.size(); ++u) {
        const CnnSpec& cnn = p.cnns[u].cnn;
        acc += weighted_transfer(cnn.gate.reach_prob.front(), cnn.input_kb,
                                 p.data_rate_bits_per_s,
                                 p.topology.hops(view.source_of_cnn[u], pl.assign[u][0]),
                                 p.conventions.payload_unit);
    }
    return acc;
}

double inter_layer_time(const Placement& pl, const PlacementProblem& p) {
    require_shape(pl, p);
    double acc = 0.0;
    for (std::size_t u = 0; u < p.cnns.size(); ++u) {
        const CnnSpec& cnn = p.cnns[u].cnn;
        for (int j = 0; j + 1 < cnn.depth(); ++j) {
            acc += weighted_transfer(
                cnn.gate.reach_prob[static_cast<std::size_t>(j + 1)],
                cnn.layers[static_cast<std::size_t>(j)].out_repr_kb,
                p.data_rate_bits_per_s,
                p.topology.hops(pl.assign[u][static_cast<std::size_t>(j)],
                                pl.assign[u][static_cast<std::size_t>(j + 1)]),
                p.conventions.payload_unit);
        }
    }
    return acc;
}

double sink_time(const Placement& pl, const PlacementProblem& p) {
    require_shape(pl, p);
    const ProblemView view = ProblemView::build(p);
    double acc = 0.0;
    for (std::size_t u = 0; u < p.cnns.size(); ++u) {
        const CnnSpec& cnn = p.cnns[u].cnn;
        for (int j = 0; j < cnn.depth(); ++j) {
            acc += weighted_transfer(
                cnn.gate.exit_prob[static_cast<std::size_t>(j)], cnn.final_out_kb,
                p.data_rate_bits_per_s,
                p.topology.hops(pl.assign[u][static_cast<std::size_t>(j)], view.sink),
                p.conventions.payload_unit);
        }
    }
    return acc;
}

std::vector<double> processing_time(const Placement& pl, const PlacementProblem& p) {
    require_shape(pl, p);
    const ProblemView view = ProblemView::build(p);
    return per_vertex_processing(pl, p, view);
}

LatencyBreakdown evaluate(const Placement& pl, const PlacementProblem& p) {
    return evaluate(pl, p, ProblemView::build(p));
}

LatencyBreakdown evaluate(const Placement& pl, const PlacementProblem& p,
                          const ProblemView& view) {
    require_shape(pl, p);
    LatencyBreakdown b;
    const double rate = p.data_rate_bits_per_s;
    const PayloadUnit pu = p.conventions.payload_unit;

    for (std::size_t u = 0; u < p.cnns.size(); ++u) {
        const CnnSpec& cnn = p.cnns[u].cnn;
        b.source_s += weighted_transfer(cnn.gate.reach_prob.front(), cnn.input_kb, rate,
                                        p.topology.hops(view.source_of_cnn[u],
                                                        pl.assign[u][0]),
                                        pu);
    }
    for (std::size_t u = 0; u < p.cnns.size(); ++u) {
        const CnnSpec& cnn = p.cnns[u].cnn;
        for (int j = 0; j + 1 < cnn.depth(); ++j) {
            b.inter_layer_s += weighted_transfer(
                cnn.gate.reach_prob[static_cast<std::size_t>(j + 1)],
                cnn.layers[static_cast<std::size_t>(j)].out_repr_kb, rate,
                p.topology.hops(pl.assign[u][static_cast<std::size_t>(j)],
                                pl.assign[u][static_cast<std::size_t>(j + 1)]),
                pu);
        }
    }
    for (std::size_t u = 0; u < p.cnns.size(); ++u) {
        const CnnSpec& cnn = p.cnns[u].cnn;
        for (int j = 0; j < cnn.depth(); ++j) {
            b.sink_s += weighted_transfer(
                cnn.gate.exit_prob[static_cast<std::size_t>(j)], cnn.final_out_kb, rate,
                p.topology.hops(pl.assign[u][static_cast<std::size_t>(j)], view.sink),
                pu);
        }
    }
    b.transmission_s = b.source_s + b.inter_layer_s + b.sink_s;

    const std::vector<double> per = per_vertex_processing(pl, p, view);
    std::vector<bool> hosts(per.size(), false);
    for (std::size_t u = 0; u < pl.assign.size(); ++u) {
        for (int v : pl.assign[u]) hosts[static_cast<std::size_t>(v)] = true;
    }
    for (std::size_t v = 0; v < per.size(); ++v) {
        b.processing_s += per[v];
        if (hosts[v]) {
            b.processing_by_unit.emplace_back(p.topology.vertex(static_cast<int>(v)).id,
                                              per[v]);
        }
    }
    b.total_s = b.transmission_s + b.processing_s;
    return b;
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
    case Violation::Kind::shape: return "shape";
    case Violation::Kind::bad_unit: return "bad_unit";
    case Violation::Kind::layer_cap: return "layer_cap";
    case Violation::Kind::memory: return "memory";
    case Violation::Kind::compute: return "compute";
    case Violation::Kind::sharing: return "sharing";
    }
    return "unknown";
}

std::vector<Violation> check_feasibility(const Placement& pl, const PlacementProblem& p) {
    return check_feasibility(pl, p, ProblemView::build(p));
}

std::vector<Violation> check_feasibility(const Placement& pl, const PlacementProblem& p,
                                         const ProblemView& view) {
    std::vector<Violation> out;
    if (!pl.shape_matches(p)) {
        out.push_back({Violation::Kind::shape,
                       "placement does not assign exactly the problem's layers"});
        return out;
    }

    for (std::size_t u = 0; u < pl.assign.size(); ++u) {
        for (int j = 0; j < static_cast<int>(pl.assign[u].size()); ++j) {
            const int at = pl.assign[u][static_cast<std::size_t>(j)];
            if (p.topology.vertex(at).role != VertexRole::unit ||
                !view.device[static_cast<std::size_t>(at)]) {
                std::ostringstream os;
                os << "cnn " << u << " layer " << (j + 1) << " assigned to '"
                   << p.topology.vertex(at).id << "', which is not a compute unit";
                out.push_back({Violation::Kind::bad_unit, os.str()});
            }
        }
    }

    // Capacity accounting charges each entity once per hosting unit; a split
    // sharing group is additionally its own violation.
    struct Load {
        int count = 0;
        double mem = 0.0;
        double compute = 0.0;
    };
    std::map<int, Load> load; // vertex index -> load
    for (const PlacementEntity& e : view.entities) {
        std::set<int> at;
        for (const LayerRef& m : e.members) {
            at.insert(pl.assign[static_cast<std::size_t>(m.cnn)]
                                [static_cast<std::size_t>(m.layer)]);
        }
        if (e.members.size() > 1 && at.size() > 1) {
            std::ostringstream os;
            os << "shared layers {";
            for (std::size_t k = 0; k < e.members.size(); ++k) {
                if (k) os << ", ";
                os << "cnn " << e.members[k].cnn << " layer " << (e.members[k].layer + 1);
            }
            os << "} are split across " << at.size() << " units";
            out.push_back({Violation::Kind::sharing, os.str()});
        }
        for (int v : at) {
            Load& l = load[v];
            l.count += 1;
            l.mem += e.memory_kb;
            l.compute += e.compute_mmul;
        }
    }

    for (const auto& [v, l] : load) {
        const DeviceClass* dc = view.device[static_cast<std::size_t>(v)];
        if (!dc) continue; // already reported as bad_unit
        const std::string& id = p.topology.vertex(v).id;
        if (l.count > p.layers_per_unit_cap) {
            std::ostringstream os;
            os << "unit '" << id << "' hosts " << l.count << " layers, cap is "
               << p.layers_per_unit_cap;
            out.push_back({Violation::Kind::layer_cap, os.str()});
        }
        if (l.mem > dc->mem_cap_kb) {
            std::ostringstream os;
            os << "unit '" << id << "' needs " << l.mem << " KB, capacity is "
               << dc->mem_cap_kb << " KB";
            out.push_back({Violation::Kind::memory, os.str()});
        }
        if (dc->compute_cap_mmul && l.compute > *dc->compute_cap_mmul) {
            std::ostringstream os;
            os << "unit '" << id << "' is loaded with " << l.compute
               << " Mmul, cap is " << *dc->compute_cap_mmul << " Mmul";
            out.push_back({Violation::Kind::compute, os.str()});
        }
    }
    return out;
}

std::string conventions_tag(const EvalConventions& ev) {
    if (ev == EvalConventions::compat()) return "compat";
    if (ev == EvalConventions{}) return "as_written";
    std::string s = ev.processing_weight == ProcessingWeight::as_written
                        ? "as_written"
                        : "next_layer";
    s += ev.payload_unit == PayloadUnit::bits_exact ? "+bits" : "+bytes";
    if (!ev.include_processing) s += "+no_proc";
    return s;
}

} // namespace layerplace
