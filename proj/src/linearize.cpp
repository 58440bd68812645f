#include "layerplace/linearize.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace layerplace {

namespace {

std::string sanitize(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_';
        out.push_back(ok ? c : '_');
    }
    return out;
}

std::string entity_tag(const PlacementProblem& p, const IlpModel::Entity& e) {
    const LayerRef& head = e.members.front();
    return "c" + std::to_string(head.cnn) + "_" +
           sanitize(p.cnn(head.cnn).layers[static_cast<std::size_t>(head.layer)].label);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::vector<double> IlpModel::merged_objective() const {
    std::vector<double> coef(variables.size(), 0.0);
    auto fold = [&coef](const std::vector<LinearTerm>& terms) {
        for (const LinearTerm& t : terms) coef[static_cast<std::size_t>(t.var)] += t.coef;
    };
    fold(source_terms);
    fold(inter_terms);
    fold(sink_terms);
    for (const auto& [unit, terms] : processing_terms) {
        (void)unit;
        fold(terms);
    }
    return coef;
}

IlpModel linearize(const PlacementProblem& p, LinearizeOptions opt) {
    ensure_valid(p);
    const ProblemView view = ProblemView::build(p);

    IlpModel m;
    m.options = opt;
    m.unit_vertices = view.units;
    const int U = m.unit_count();

    // Entity layout. Heads of sharing groups are the members that capacity
    // rows charge in equality mode.
    std::set<std::pair<int, int>> non_head;
    if (!opt.sharing_equality_rows) {
        m.entities.reserve(view.entities.size());
        for (const PlacementEntity& e : view.entities) {
            m.entities.push_back({e.members, e.memory_kb, e.compute_mmul, true});
        }
        m.entity_of = view.entity_of;
    } else {
        for (const SharingGroup& g : p.sharing) {
            auto members = g.members;
            std::sort(members.begin(), members.end());
            for (std::size_t k = 1; k < members.size(); ++k) {
                non_head.insert({members[k].cnn, members[k].layer});
            }
        }
        m.entity_of.resize(p.cnns.size());
        for (int u = 0; u < static_cast<int>(p.cnns.size()); ++u) {
            const CnnSpec& cnn = p.cnn(u);
            for (int j = 0; j < cnn.depth(); ++j) {
                IlpModel::Entity e;
                e.members = {{u, j}};
                e.memory_kb = cnn.layers[static_cast<std::size_t>(j)].memory_kb;
                e.compute_mmul = cnn.layers[static_cast<std::size_t>(j)].compute_mmul;
                e.charged = non_head.find({u, j}) == non_head.end();
                m.entity_of[static_cast<std::size_t>(u)].push_back(
                    static_cast<int>(m.entities.size()));
                m.entities.push_back(std::move(e));
            }
        }
    }
    const int E = m.entity_count();

    // Assignment variables, entity-major.
    m.variables.reserve(static_cast<std::size_t>(E * U));
    for (int e = 0; e < E; ++e) {
        for (int t = 0; t < U; ++t) {
            IlpVariable v;
            v.kind = IlpVariable::Kind::assign;
            v.entity = e;
            v.unit_pos = t;
            v.name = "a_" + entity_tag(p, m.entities[static_cast<std::size_t>(e)]) + "_" +
                     sanitize(p.topology.vertex(view.units[static_cast<std::size_t>(t)]).id);
            m.variables.push_back(std::move(v));
        }
    }
    m.assign_var_count = E * U;

    const double rate = p.data_rate_bits_per_s;
    const PayloadUnit pu = p.conventions.payload_unit;

    // Source terms, one block per CNN (canonical order: cnn-major, then unit).
    for (int u = 0; u < static_cast<int>(p.cnns.size()); ++u) {
        const CnnSpec& cnn = p.cnn(u);
        const int e = m.entity_of[static_cast<std::size_t>(u)][0];
        for (int t = 0; t < U; ++t) {
            const double coef = weighted_transfer(
                cnn.gate.reach_prob.front(), cnn.input_kb, rate,
                p.topology.hops(view.source_of_cnn[static_cast<std::size_t>(u)],
                                view.units[static_cast<std::size_t>(t)]),
                pu);
            m.source_terms.push_back({m.assign_var(e, t), coef});
        }
    }

    // Inter-layer product terms in (cnn, layer, from-unit, to-unit) order.
    // Links with zero payload or zero probability never materialize; a
    // product variable is shared by every term over the same variable pair.
    std::map<std::pair<int, int>, int> product_of;
    for (int u = 0; u < static_cast<int>(p.cnns.size()); ++u) {
        const CnnSpec& cnn = p.cnn(u);
        for (int j = 0; j + 1 < cnn.depth(); ++j) {
            const double prob = cnn.gate.reach_prob[static_cast<std::size_t>(j + 1)];
            const double payload = cnn.layers[static_cast<std::size_t>(j)].out_repr_kb;
            if (prob == 0.0 || payload == 0.0) continue;
            const int ea = m.entity_of[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)];
            const int eb =
                m.entity_of[static_cast<std::size_t>(u)][static_cast<std::size_t>(j + 1)];
            for (int ti = 0; ti < U; ++ti) {
                for (int tk = 0; tk < U; ++tk) {
                    const double coef = weighted_transfer(
                        prob, payload, rate,
                        p.topology.hops(view.units[static_cast<std::size_t>(ti)],
                                        view.units[static_cast<std::size_t>(tk)]),
                        pu);
                    if (opt.prune_zero_coefficient_w && coef == 0.0) continue;
                    const int a = m.assign_var(ea, ti);
                    const int b = m.assign_var(eb, tk);
                    const auto key = std::minmax(a, b);
                    auto it = product_of.find(key);
                    int wv;
                    if (it == product_of.end()) {
                        IlpVariable v;
                        v.kind = IlpVariable::Kind::product;
                        v.first = key.first;
                        v.second = key.second;
                        v.name = "w_" +
                                 m.variables[static_cast<std::size_t>(key.first)].name.substr(2) +
                                 "__" +
                                 m.variables[static_cast<std::size_t>(key.second)].name.substr(2);
                        wv = static_cast<int>(m.variables.size());
                        m.variables.push_back(std::move(v));
                        product_of.emplace(key, wv);
                    } else {
                        wv = it->second;
                    }
                    m.inter_terms.push_back({wv, coef});
                }
            }
        }
    }

    // Exit-to-sink terms in (cnn, layer, unit) order.
    for (int u = 0; u < static_cast<int>(p.cnns.size()); ++u) {
        const CnnSpec& cnn = p.cnn(u);
        for (int j = 0; j < cnn.depth(); ++j) {
            const int e = m.entity_of[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)];
            for (int t = 0; t < U; ++t) {
                const double coef = weighted_transfer(
                    cnn.gate.exit_prob[static_cast<std::size_t>(j)], cnn.final_out_kb, rate,
                    p.topology.hops(view.units[static_cast<std::size_t>(t)], view.sink), pu);
                m.sink_terms.push_back({m.assign_var(e, t), coef});
            }
        }
    }

    // Processing terms grouped per unit, units ascending by vertex index,
    // layers scanned cnn-major within each unit.
    for (int t = 0; t < U; ++t) {
        const int vertex = view.units[static_cast<std::size_t>(t)];
        const DeviceClass* dc = view.device[static_cast<std::size_t>(vertex)];
        std::vector<LinearTerm> terms;
        for (int u = 0; u < static_cast<int>(p.cnns.size()); ++u) {
            const CnnSpec& cnn = p.cnn(u);
            for (int j = 0; j < cnn.depth(); ++j) {
                double w = 0.0;
                if (!processing_term_weight(p.conventions, cnn.gate.reach_prob, j,
                                            cnn.depth(), w)) {
                    continue;
                }
                const int e =
                    m.entity_of[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)];
                terms.push_back(
                    {m.assign_var(e, t),
                     processing_term(w, cnn.layers[static_cast<std::size_t>(j)].compute_mmul,
                                     dc->speed_mmul_per_s)});
            }
        }
        if (!terms.empty()) m.processing_terms.emplace_back(vertex, std::move(terms));
    }

    // Assignment rows: each entity on exactly one unit.
    for (int e = 0; e < E; ++e) {
        LinearRow row;
        row.name = "assign_" + entity_tag(p, m.entities[static_cast<std::size_t>(e)]);
        row.relation = '=';
        row.rhs = 1.0;
        for (int t = 0; t < U; ++t) row.terms.push_back({m.assign_var(e, t), 1.0});
        m.rows.push_back(std::move(row));
    }

    // Per-unit capacity rows over the charged entities.
    for (int t = 0; t < U; ++t) {
        const int vertex = view.units[static_cast<std::size_t>(t)];
        const std::string uid = sanitize(p.topology.vertex(vertex).id);
        const DeviceClass* dc = view.device[static_cast<std::size_t>(vertex)];

        LinearRow cap;
        cap.name = "cap_" + uid;
        cap.relation = '<';
        cap.rhs = static_cast<double>(p.layers_per_unit_cap);
        LinearRow mem;
        mem.name = "mem_" + uid;
        mem.relation = '<';
        mem.rhs = dc->mem_cap_kb;
        for (int e = 0; e < E; ++e) {
            if (!m.entities[static_cast<std::size_t>(e)].charged) continue;
            cap.terms.push_back({m.assign_var(e, t), 1.0});
            mem.terms.push_back(
                {m.assign_var(e, t), m.entities[static_cast<std::size_t>(e)].memory_kb});
        }
        m.rows.push_back(std::move(cap));
        m.rows.push_back(std::move(mem));
        if (dc->compute_cap_mmul) {
            LinearRow load;
            load.name = "load_" + uid;
            load.relation = '<';
            load.rhs = *dc->compute_cap_mmul;
            for (int e = 0; e < E; ++e) {
                if (!m.entities[static_cast<std::size_t>(e)].charged) continue;
                load.terms.push_back(
                    {m.assign_var(e, t), m.entities[static_cast<std::size_t>(e)].compute_mmul});
            }
            m.rows.push_back(std::move(load));
        }
    }

    // Linking rows, three per product variable.
    for (int v = m.assign_var_count; v < static_cast<int>(m.variables.size()); ++v) {
        const IlpVariable& w = m.variables[static_cast<std::size_t>(v)];
        const std::string base = "w" + std::to_string(v - m.assign_var_count);
        m.rows.push_back({base + "_le_first",
                          {{v, 1.0}, {w.first, -1.0}},
                          '<',
                          0.0});
        m.rows.push_back({base + "_le_second",
                          {{v, 1.0}, {w.second, -1.0}},
                          '<',
                          0.0});
        m.rows.push_back({base + "_ge_sum",
                          {{v, 1.0}, {w.first, -1.0}, {w.second, -1.0}},
                          '>',
                          -1.0});
    }

    // Equality rows tying shared members together, per unit.
    if (opt.sharing_equality_rows) {
        for (const SharingGroup& g : p.sharing) {
            auto members = g.members;
            std::sort(members.begin(), members.end());
            const int head = m.entity_of[static_cast<std::size_t>(members.front().cnn)]
                                        [static_cast<std::size_t>(members.front().layer)];
            for (std::size_t k = 1; k < members.size(); ++k) {
                const int other = m.entity_of[static_cast<std::size_t>(members[k].cnn)]
                                             [static_cast<std::size_t>(members[k].layer)];
                for (int t = 0; t < U; ++t) {
                    LinearRow row;
                    row.name =
                        "share_" + entity_tag(p, m.entities[static_cast<std::size_t>(other)]) +
                        "_" +
                        sanitize(
                            p.topology.vertex(view.units[static_cast<std::size_t>(t)]).id);
                    row.relation = '=';
                    row.rhs = 0.0;
                    row.terms = {{m.assign_var(other, t), 1.0},
                                 {m.assign_var(head, t), -1.0}};
                    m.rows.push_back(std::move(row));
                }
            }
        }
    }

    return m;
}

IlpAssignment assignment_from_placement(const IlpModel& m, const Placement& pl,
                                        const PlacementProblem& p) {
    if (!pl.shape_matches(p)) throw Error("placement shape does not match the problem");

    std::vector<int> pos_of_vertex(static_cast<std::size_t>(p.topology.size()), -1);
    for (int t = 0; t < m.unit_count(); ++t) {
        pos_of_vertex[static_cast<std::size_t>(m.unit_vertices[static_cast<std::size_t>(t)])] = t;
    }

    IlpAssignment a(m.variables.size(), 0);
    for (int e = 0; e < m.entity_count(); ++e) {
        const auto& members = m.entities[static_cast<std::size_t>(e)].members;
        int vertex = -1;
        for (const LayerRef& ref : members) {
            const int v = pl.assign[static_cast<std::size_t>(ref.cnn)]
                                   [static_cast<std::size_t>(ref.layer)];
            if (vertex < 0) {
                vertex = v;
            } else if (v != vertex) {
                throw Error("sharing group is split across units; the substituted model "
                            "has no variable assignment for that placement");
            }
        }
        const int t = pos_of_vertex[static_cast<std::size_t>(vertex)];
        if (t < 0) {
            throw Error("layer assigned to '" + p.topology.vertex(vertex).id +
                        "', which is not a compute unit");
        }
        a[static_cast<std::size_t>(m.assign_var(e, t))] = 1;
    }
    for (std::size_t v = static_cast<std::size_t>(m.assign_var_count);
         v < m.variables.size(); ++v) {
        const IlpVariable& w = m.variables[v];
        a[v] = a[static_cast<std::size_t>(w.first)] * a[static_cast<std::size_t>(w.second)];
    }
    return a;
}

namespace {

void require_complete(const IlpModel& m, const IlpAssignment& a) {
    if (a.size() != m.variables.size()) {
        throw IncompleteAssignment("assignment covers " + std::to_string(a.size()) +
                                   " of " + std::to_string(m.variables.size()) +
                                   " variables");
    }
}

double reduce_objective(const IlpModel& m, const IlpAssignment& a, bool products) {
    auto value_of = [&](const LinearTerm& term) -> double {
        if (!products) {
            return term.coef * static_cast<double>(a[static_cast<std::size_t>(term.var)]);
        }
        const IlpVariable& v = m.variables[static_cast<std::size_t>(term.var)];
        if (v.kind == IlpVariable::Kind::product) {
            const int prod = a[static_cast<std::size_t>(v.first)] *
                             a[static_cast<std::size_t>(v.second)];
            return term.coef * static_cast<double>(prod);
        }
        return term.coef * static_cast<double>(a[static_cast<std::size_t>(term.var)]);
    };

    double t_s = 0.0;
    for (const LinearTerm& t : m.source_terms) t_s += value_of(t);
    double t_inter = 0.0;
    for (const LinearTerm& t : m.inter_terms) t_inter += value_of(t);
    double t_f = 0.0;
    for (const LinearTerm& t : m.sink_terms) t_f += value_of(t);
    const double t_t = t_s + t_inter + t_f;

    double t_p = 0.0;
    for (const auto& [unit, terms] : m.processing_terms) {
        (void)unit;
        double sub = 0.0;
        for (const LinearTerm& t : terms) sub += value_of(t);
        t_p += sub;
    }
    return t_t + t_p;
}

} // namespace

double objective_of_assignment(const IlpModel& m, const IlpAssignment& a) {
    require_complete(m, a);
    return reduce_objective(m, a, false);
}

double quadratic_objective_of_assignment(const IlpModel& m, const IlpAssignment& a) {
    require_complete(m, a);
    return reduce_objective(m, a, true);
}

std::vector<std::string> violated_rows(const IlpModel& m, const IlpAssignment& a) {
    require_complete(m, a);
    std::vector<std::string> out;
    for (const LinearRow& row : m.rows) {
        double lhs = 0.0;
        for (const LinearTerm& t : row.terms) {
            lhs += t.coef * static_cast<double>(a[static_cast<std::size_t>(t.var)]);
        }
        const bool ok = row.relation == '<'   ? lhs <= row.rhs
                        : row.relation == '>' ? lhs >= row.rhs
                                              : lhs == row.rhs;
        if (!ok) out.push_back(row.name);
    }
    return out;
}

bool satisfies_rows(const IlpModel& m, const IlpAssignment& a) {
    return violated_rows(m, a).empty();
}

namespace {

// Appends "+ c name" tokens, folding lines at ~72 columns.
void append_terms(std::ostream& out, const std::vector<std::pair<std::string, double>>& terms) {
    std::size_t col = 0;
    bool first = true;
    for (const auto& [name, coef] : terms) {
        std::string tok;
        if (coef < 0.0) {
            tok = first ? "- " : " - ";
        } else {
            tok = first ? "" : " + ";
        }
        const double mag = coef < 0.0 ? -coef : coef;
        if (mag != 1.0) tok += fmt(mag) + " ";
        tok += name;
        if (col + tok.size() > 72) {
            out << "\n   ";
            col = 3;
            if (!first && tok.front() == ' ') tok.erase(tok.begin());
        }
        out << tok;
        col += tok.size();
        first = false;
    }
}

} // namespace

void write_lp(const IlpModel& m, std::ostream& out, const std::string& title) {
    if (!title.empty()) out << "\\ " << title << "\n";
    out << "Minimize\n obj: ";
    std::vector<std::pair<std::string, double>> obj;
    const std::vector<double> coef = m.merged_objective();
    for (std::size_t v = 0; v < coef.size(); ++v) {
        if (coef[v] != 0.0) obj.emplace_back(m.variables[v].name, coef[v]);
    }
    if (obj.empty()) {
        if (!m.variables.empty()) out << "0 " << m.variables.front().name;
    } else {
        append_terms(out, obj);
    }
    out << "\nSubject To\n";
    for (const LinearRow& row : m.rows) {
        out << " " << row.name << ": ";
        std::vector<std::pair<std::string, double>> terms;
        terms.reserve(row.terms.size());
        for (const LinearTerm& t : row.terms) {
            terms.emplace_back(m.variables[static_cast<std::size_t>(t.var)].name, t.coef);
        }
        append_terms(out, terms);
        out << (row.relation == '<' ? " <= " : row.relation == '>' ? " >= " : " = ")
            << fmt(row.rhs) << "\n";
    }
    out << "Binary\n";
    std::size_t col = 0;
    for (const IlpVariable& v : m.variables) {
        if (col == 0) {
            out << " ";
            col = 1;
        } else if (col + v.name.size() + 1 > 72) {
            out << "\n ";
            col = 1;
        } else {
            out << " ";
            col += 1;
        }
        out << v.name;
        col += v.name.size();
    }
    if (!m.variables.empty()) out << "\n";
    out << "End\n";
}

std::string lp_string(const IlpModel& m, const std::string& title) {
    std::ostringstream os;
    write_lp(m, os, title);
    return os.str();
}

} // namespace layerplace
