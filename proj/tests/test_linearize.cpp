#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "layerplace/linearize.hpp"
#include "layerplace/solver.hpp"

using namespace layerplace;
using namespace testutil;

namespace {

int count_vars(const IlpModel& m, IlpVariable::Kind kind) {
    int n = 0;
    for (const auto& v : m.variables) {
        n += v.kind == kind;
    }
    return n;
}

int count_rows_with_prefix(const IlpModel& m, const std::string& prefix) {
    int n = 0;
    for (const auto& r : m.rows) {
        n += r.name.rfind(prefix, 0) == 0;
    }
    return n;
}

// Two units, one two-layer CNN, everything reachable: the smallest model
// with products.
PlacementProblem two_by_two() {
    return line_problem(make_cnn("tiny", 4.0, {{10, 2, 8}, {12, 3, 6}}, 0.5),
                        2, device("d", 100.0, 100.0), 1, 1e6);
}

// Every placement of entities onto units, as an odometer over unit positions.
template <typename Fn>
void for_all_placements(const PlacementProblem& p, const IlpModel& m, Fn&& fn) {
    const int E = m.entity_count();
    const int U = m.unit_count();
    std::vector<int> pos(static_cast<std::size_t>(E), 0);
    while (true) {
        Placement pl;
        pl.assign.resize(p.cnns.size());
        for (std::size_t u = 0; u < p.cnns.size(); ++u) {
            pl.assign[u].assign(static_cast<std::size_t>(p.cnn(static_cast<int>(u)).depth()), -1);
        }
        for (int e = 0; e < E; ++e) {
            for (const LayerRef& member : m.entities[static_cast<std::size_t>(e)].members) {
                pl.assign[static_cast<std::size_t>(member.cnn)]
                         [static_cast<std::size_t>(member.layer)] =
                    m.unit_vertices[static_cast<std::size_t>(pos[static_cast<std::size_t>(e)])];
            }
        }
        fn(pl, pos);
        int k = 0;
        while (k < E && ++pos[static_cast<std::size_t>(k)] == U) {
            pos[static_cast<std::size_t>(k)] = 0;
            ++k;
        }
        if (k == E) break;
    }
}

} // namespace

TEST_CASE("variable and linking-row counts for the two-by-two model") {
    const IlpModel m = linearize(two_by_two());
    CHECK(m.assign_var_count == 4);
    CHECK(count_vars(m, IlpVariable::Kind::assign) == 4);
    // One consecutive-layer link, all four unit pairs kept (same-unit pairs
    // carry zero hops but stay in the model by default).
    CHECK(count_vars(m, IlpVariable::Kind::product) == 4);
    CHECK(count_rows_with_prefix(m, "w") == 12); // three linking rows each
    CHECK(count_rows_with_prefix(m, "assign_") == 2);
    CHECK(count_rows_with_prefix(m, "cap_") == 2);
    CHECK(count_rows_with_prefix(m, "mem_") == 2);
    CHECK(count_rows_with_prefix(m, "load_") == 0); // devices carry no load cap

    // Product variables point at assign vars of consecutive entities.
    for (const auto& v : m.variables) {
        if (v.kind != IlpVariable::Kind::product) continue;
        CHECK(v.first <= v.second);
        CHECK(m.variables[static_cast<std::size_t>(v.first)].kind == IlpVariable::Kind::assign);
        CHECK(m.variables[static_cast<std::size_t>(v.second)].kind == IlpVariable::Kind::assign);
    }
}

TEST_CASE("zero-coefficient products can be pruned without changing optima") {
    const PlacementProblem p = two_by_two();
    LinearizeOptions opt;
    opt.prune_zero_coefficient_w = true;
    const IlpModel pruned = linearize(p, opt);
    // Same-unit pairs have zero transfer cost and disappear.
    CHECK(count_vars(pruned, IlpVariable::Kind::product) == 2);
    CHECK(count_rows_with_prefix(pruned, "w") == 6);

    const IlpModel full = linearize(p);
    double best_full = std::numeric_limits<double>::infinity();
    double best_pruned = std::numeric_limits<double>::infinity();
    for_all_placements(p, full, [&](const Placement& pl, const std::vector<int>&) {
        const auto a_full = assignment_from_placement(full, pl, p);
        const auto a_pruned = assignment_from_placement(pruned, pl, p);
        if (satisfies_rows(full, a_full)) {
            best_full = std::min(best_full, objective_of_assignment(full, a_full));
        }
        if (satisfies_rows(pruned, a_pruned)) {
            best_pruned = std::min(best_pruned, objective_of_assignment(pruned, a_pruned));
        }
    });
    CHECK(best_full == best_pruned);
}

TEST_CASE("single-layer CNN produces no product variables") {
    const PlacementProblem p =
        line_problem(make_cnn("one", 2.0, {{5, 1, 3}}, 0.2), 3, device("d", 50, 50));
    const IlpModel m = linearize(p);
    CHECK(m.assign_var_count == 3);
    CHECK(count_vars(m, IlpVariable::Kind::product) == 0);
    CHECK(count_rows_with_prefix(m, "w") == 0);
}

TEST_CASE("zero payload or zero reach probability drops the product link") {
    SUBCASE("zero out_repr") {
        const PlacementProblem p = line_problem(
            make_cnn("z", 2.0, {{5, 1, 0.0}, {5, 1, 3}}, 0.2), 2, device("d", 50, 50));
        CHECK(count_vars(linearize(p), IlpVariable::Kind::product) == 0);
    }
    SUBCASE("gate kills the downstream link") {
        // Reach probability gated to zero after layer 1: the L1->L2 transfer
        // never happens.
        const PlacementProblem p = line_problem(
            make_cnn("g", 2.0, {{5, 1, 3}, {5, 1, 3}}, 0.2, {1.0, 0.0}), 2,
            device("d", 50, 50));
        CHECK(count_vars(linearize(p), IlpVariable::Kind::product) == 0);
    }
}

TEST_CASE("sharing merges entities and capacity rows charge groups once") {
    PlacementProblem p = builtin_problem("fig1b-2cnn5-shared12");
    const IlpModel m = linearize(p);
    // 10 layers, two 2-member groups: 8 entities over 11 units.
    CHECK(m.entity_count() == 8);
    CHECK(m.assign_var_count == 8 * 11);
    CHECK(m.entity_of[0][0] == m.entity_of[1][0]);
    CHECK(m.entity_of[0][1] == m.entity_of[1][1]);
    CHECK(m.entity_of[0][2] != m.entity_of[1][2]);

    // The shared entity appears once per cap/memory row, with the single
    // memory charge as its coefficient.
    const int shared = m.entity_of[0][0];
    for (const auto& row : m.rows) {
        if (row.name.rfind("mem_", 0) != 0) continue;
        int appearances = 0;
        for (const auto& t : row.terms) {
            const auto& v = m.variables[static_cast<std::size_t>(t.var)];
            if (v.entity == shared) {
                ++appearances;
                CHECK(t.coef == 19.20); // one L1 worth of memory, not two
            }
        }
        CHECK(appearances == 1);
    }
}

TEST_CASE("worked fig1b placement maps onto a satisfying assignment") {
    PlacementProblem p = builtin_problem("fig1b-cnn5");
    p.conventions = EvalConventions::compat();
    const IlpModel m = linearize(p);

    Placement pl;
    pl.assign = {{}};
    for (const char* id : {"n05", "n10", "n04", "n01", "n06"}) {
        pl.assign[0].push_back(p.topology.index_of(id));
    }
    const IlpAssignment a = assignment_from_placement(m, pl, p);
    CHECK(satisfies_rows(m, a));
    CHECK(violated_rows(m, a).empty());

    // The cornerstone: linear objective == quadratic == evaluator, bit for bit.
    const double direct = evaluate(pl, p).total_s;
    CHECK(objective_of_assignment(m, a) == direct);
    CHECK(quadratic_objective_of_assignment(m, a) == direct);
}

TEST_CASE("an all-zero assignment violates exactly the assignment rows") {
    const PlacementProblem p = two_by_two();
    const IlpModel m = linearize(p);
    const IlpAssignment zero(m.variables.size(), 0);
    CHECK_FALSE(satisfies_rows(m, zero));
    for (const auto& name : violated_rows(m, zero)) {
        CHECK(name.rfind("assign_", 0) == 0);
    }
    CHECK(objective_of_assignment(m, zero) == 0.0);
}

TEST_CASE("model agrees with the evaluator on every placement, many instances") {
    RandomInstanceParams prm;
    prm.max_units = 4;
    prm.max_layers = 3;
    prm.max_space = 1500.0;
    int placements_checked = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const PlacementProblem p = random_instance(seed, prm);
        const IlpModel m = linearize(p);
        const ProblemView view = ProblemView::build(p);
        for_all_placements(p, m, [&](const Placement& pl, const std::vector<int>&) {
            const IlpAssignment a = assignment_from_placement(m, pl, p);
            const bool rows_ok = satisfies_rows(m, a);
            const bool feasible = check_feasibility(pl, p, view).empty();
            REQUIRE(rows_ok == feasible);
            const double lin = objective_of_assignment(m, a);
            REQUIRE(lin == evaluate(pl, p, view).total_s);
            REQUIRE(lin == quadratic_objective_of_assignment(m, a));
            ++placements_checked;
        });
    }
    CHECK(placements_checked > 1000);
}

TEST_CASE("equality-row sharing formulation has the same optimum") {
    // Two tiny CNNs sharing their first layer, three units.
    PlacementProblem p;
    p.cnns.push_back({make_cnn("a", 3.0, {{10, 2, 5}, {8, 1, 2}}, 0.3), "s1"});
    p.cnns.push_back({make_cnn("b", 2.0, {{10, 2, 4}}, 0.3), "s2"});
    std::vector<Vertex> vs = {
        {"s1", VertexRole::source, 0, 0}, {"s2", VertexRole::source, 0, 1},
        {"u1", VertexRole::unit, 1, 0},   {"u2", VertexRole::unit, 1, 1},
        {"u3", VertexRole::unit, 2, 0},   {"f", VertexRole::sink, 3, 0},
    };
    p.topology = Topology::explicit_graph(
        vs, {{"s1", "u1"}, {"s2", "u2"}, {"u1", "u2"}, {"u1", "u3"}, {"u2", "u3"},
             {"u3", "f"}});
    for (const char* id : {"u1", "u2", "u3"}) {
        p.unit_classes[id] = device("d", 25.0, 50.0);
    }
    p.layers_per_unit_cap = 2;
    p.data_rate_bits_per_s = 1e6;
    p.sharing.push_back({{{0, 0}, {1, 0}}});
    ensure_valid(p);

    const IlpModel sub = linearize(p);
    double best_sub = std::numeric_limits<double>::infinity();
    for_all_placements(p, sub, [&](const Placement& pl, const std::vector<int>&) {
        const auto a = assignment_from_placement(sub, pl, p);
        if (satisfies_rows(sub, a)) {
            best_sub = std::min(best_sub, objective_of_assignment(sub, a));
        }
    });

    LinearizeOptions opt;
    opt.sharing_equality_rows = true;
    const IlpModel eq = linearize(p, opt);
    CHECK(eq.entity_count() == 3); // every layer its own entity
    CHECK(count_rows_with_prefix(eq, "share_") > 0);
    double best_eq = std::numeric_limits<double>::infinity();
    // Odometer over per-layer unit choices, including split (infeasible) ones.
    for_all_placements(p, eq, [&](const Placement& pl, const std::vector<int>&) {
        const auto a = assignment_from_placement(eq, pl, p);
        if (satisfies_rows(eq, a)) {
            best_eq = std::min(best_eq, objective_of_assignment(eq, a));
        }
    });

    CHECK(best_sub < std::numeric_limits<double>::infinity());
    CHECK(best_sub == best_eq);

    // And both agree with the solver.
    SolverConfig cfg;
    cfg.method = SolveMethod::exhaustive;
    CHECK(solve(p, cfg).objective_s == best_sub);
}

TEST_CASE("LP export shape") {
    PlacementProblem p = two_by_two();
    const IlpModel m = linearize(p);
    const std::string lp = lp_string(m, "tiny model");
    CHECK(lp.find("\\ tiny model") != std::string::npos);
    CHECK(lp.find("Minimize") != std::string::npos);
    CHECK(lp.find("Subject To") != std::string::npos);
    CHECK(lp.find("Binary") != std::string::npos);
    CHECK(lp.find("End") != std::string::npos);
    for (const auto& v : m.variables) {
        CHECK(lp.find(v.name) != std::string::npos);
    }
    // No unreasonably long lines (folded for LP readers).
    std::size_t start = 0;
    while (start < lp.size()) {
        auto end = lp.find('\n', start);
        if (end == std::string::npos) end = lp.size();
        CHECK(end - start < 255);
        start = end + 1;
    }
}
