#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "layerplace/latency.hpp"
#include "layerplace/model.hpp"
#include "layerplace/rng.hpp"

using namespace layerplace;
using namespace testutil;

namespace {

constexpr double kWifi = 72.2e6;

// Problem with every layer of one CNN on a single raspberry-3bp.
PlacementProblem single_pi(const char* cnn, EvalConventions ev) {
    CnnSpec c = builtin_cnn(cnn);
    const int depth = c.depth();
    return line_problem(std::move(c), 1, builtin_device("raspberry-3bp"), depth, kWifi, ev);
}

// The worked single-CNN placement on fig1b: L1..L5 down the n05-n10-n04-n01-n06
// chain, every link one hop.
Placement fig1c_placement(const PlacementProblem& p) {
    Placement pl;
    pl.assign = {{}};
    for (const char* id : {"n05", "n10", "n04", "n01", "n06"}) {
        pl.assign[0].push_back(p.topology.index_of(id));
    }
    return pl;
}

// Straightforward re-derivation of the whole latency formula, written
// independently of evaluate() (different traversal, same math).
double reference_total(const Placement& pl, const PlacementProblem& p) {
    const double factor =
        p.conventions.payload_unit == PayloadUnit::bits_exact ? 8000.0 : 1000.0;
    const int sink = p.topology.sink_indices().at(0);
    double total = 0.0;
    for (std::size_t u = 0; u < p.cnns.size(); ++u) {
        const CnnSpec& cnn = p.cnns[u].cnn;
        const int source = p.topology.index_of(p.cnns[u].source_id);
        const auto& reach = cnn.gate.reach_prob;
        const auto& exit = cnn.gate.exit_prob;
        total += reach[0] * cnn.input_kb * factor / p.data_rate_bits_per_s *
                 p.topology.hops(source, pl.assign[u][0]).value();
        for (int j = 0; j < cnn.depth(); ++j) {
            const auto jj = static_cast<std::size_t>(j);
            if (j + 1 < cnn.depth()) {
                total += reach[jj + 1] * cnn.layers[jj].out_repr_kb * factor /
                         p.data_rate_bits_per_s *
                         p.topology.hops(pl.assign[u][jj], pl.assign[u][jj + 1]).value();
            }
            total += exit[jj] * cnn.final_out_kb * factor / p.data_rate_bits_per_s *
                     p.topology.hops(pl.assign[u][jj], sink).value();
            if (p.conventions.include_processing) {
                const double speed =
                    p.unit_classes.at(p.topology.vertex(pl.assign[u][jj]).id)
                        .speed_mmul_per_s;
                if (p.conventions.processing_weight == ProcessingWeight::as_written) {
                    total += reach[jj] * cnn.layers[jj].compute_mmul / speed;
                } else if (j + 1 < cnn.depth()) {
                    total += reach[jj + 1] * cnn.layers[jj].compute_mmul / speed;
                }
            }
        }
    }
    return total;
}

} // namespace

TEST_CASE("transmission time formula") {
    CHECK(transmission_time(9.41, kWifi, 1, PayloadUnit::bits_exact) ==
          doctest::Approx(0.0010426592797783934).epsilon(1e-15));
    CHECK(transmission_time(9.41, kWifi, 1, PayloadUnit::bytes_as_bits_compat) ==
          doctest::Approx(0.00013033240997229918).epsilon(1e-15));
    CHECK(transmission_time(9.41, kWifi, 0, PayloadUnit::bits_exact) == 0.0);
    CHECK(transmission_time(9.41, kWifi, 3, PayloadUnit::bits_exact) ==
          3.0 * transmission_time(9.41, kWifi, 1, PayloadUnit::bits_exact));
    CHECK_THROWS_AS(transmission_time(1.0, kWifi, std::nullopt, PayloadUnit::bits_exact),
                    UnreachableHop);
}

TEST_CASE("single-unit processing time matches the reference tables") {
    struct Row {
        const char* cnn;
        double compat_ms;
        double as_written_ms;
    };
    // Everything on one raspberry-3bp (560 Mmul/s).
    const Row rows[] = {
        {"cnn5", 44.93, 44.93},
        {"gc6", 7.27, 15.92},
        {"alexnet", 1257.71, 1287.68},
        {"gc-alexnet", 596.19, 606.30},
    };
    for (const Row& row : rows) {
        CAPTURE(row.cnn);
        {
            const PlacementProblem p = single_pi(row.cnn, EvalConventions::compat());
            const auto b = evaluate(place_all(p, "u1"), p);
            CHECK(std::abs(b.processing_s * 1000.0 - row.compat_ms) < 0.01);
        }
        {
            const PlacementProblem p = single_pi(row.cnn, EvalConventions{});
            const auto b = evaluate(place_all(p, "u1"), p);
            CHECK(std::abs(b.processing_s * 1000.0 - row.as_written_ms) < 0.01);
        }
    }
}

TEST_CASE("worked fig1b placement: every component of the breakdown") {
    PlacementProblem p = builtin_problem("fig1b-cnn5");
    p.conventions = EvalConventions::compat();
    const Placement pl = fig1c_placement(p);

    const LatencyBreakdown b = evaluate(pl, p);
    CHECK(b.source_s == doctest::Approx(0.00013033240997229918).epsilon(1e-12));
    CHECK(b.inter_layer_s == doctest::Approx(0.0009006925207756233).epsilon(1e-12));
    CHECK(b.sink_s == doctest::Approx(5.54016620498615e-07).epsilon(1e-12));
    CHECK(b.transmission_s == doctest::Approx(0.0010315789473684211).epsilon(1e-12));
    CHECK(b.processing_s == doctest::Approx(0.13246666666666668).epsilon(1e-12));
    CHECK(b.total_s == doctest::Approx(0.1334982456140351).epsilon(1e-12));

    // The placement is feasible under the default cap of one layer per unit.
    CHECK(check_feasibility(pl, p).empty());

    // Scalar helpers agree with the breakdown exactly.
    CHECK(source_time(pl, p) == b.source_s);
    CHECK(inter_layer_time(pl, p) == b.inter_layer_s);
    CHECK(sink_time(pl, p) == b.sink_s);
    double proc = 0.0;
    for (double x : processing_time(pl, p)) proc += x;
    CHECK(proc == doctest::Approx(b.processing_s).epsilon(1e-15));

    // Identities hold bitwise, not just approximately.
    CHECK(b.transmission_s == b.source_s + b.inter_layer_s + b.sink_s);
    CHECK(b.total_s == b.transmission_s + b.processing_s);
}

TEST_CASE("gate exits weight the sink transfers") {
    // gc6 with the gate two hops from the sink and the tail one hop:
    // t_f = 0.99 * 2 * c + 0.01 * 1 * c, c = 0.04 KB over one hop.
    PlacementProblem p = line_problem(builtin_cnn("gc6"), 2,
                                      device("big", 1e9, 560.0), 6, kWifi,
                                      EvalConventions::compat());
    Placement pl;
    const int u1 = p.topology.index_of("u1"); // 2 hops from f
    const int u2 = p.topology.index_of("u2"); // 1 hop from f
    pl.assign = {{u1, u1, u2, u2, u2, u2}};
    CHECK(sink_time(pl, p) == doctest::Approx(1.102493074792244e-06).epsilon(1e-12));
}

TEST_CASE("payload conventions differ by exactly the bits-per-KB factor") {
    PlacementProblem p = builtin_problem("fig1b-cnn5");
    const Placement pl = fig1c_placement(p);
    p.conventions.payload_unit = PayloadUnit::bits_exact;
    const double bits = evaluate(pl, p).transmission_s;
    p.conventions.payload_unit = PayloadUnit::bytes_as_bits_compat;
    const double bytes = evaluate(pl, p).transmission_s;
    CHECK(bits == doctest::Approx(8.0 * bytes).epsilon(1e-12));
}

TEST_CASE("doubling the data rate exactly halves transmission time") {
    PlacementProblem p = builtin_problem("fig1b-gc6");
    p.layers_per_unit_cap = 6;
    const Placement pl = place_all(p, "n04");
    const LatencyBreakdown before = evaluate(pl, p);
    p.data_rate_bits_per_s *= 2.0; // power of two: scaling is exact
    const LatencyBreakdown after = evaluate(pl, p);
    CHECK(after.source_s == before.source_s / 2.0);
    CHECK(after.inter_layer_s == before.inter_layer_s / 2.0);
    CHECK(after.sink_s == before.sink_s / 2.0);
    CHECK(after.processing_s == before.processing_s); // untouched by the rate
}

TEST_CASE("arbitrary rate scaling stays within float tolerance") {
    PlacementProblem p = builtin_problem("fig1b-cnn5");
    const Placement pl = fig1c_placement(p);
    const double before = evaluate(pl, p).transmission_s;
    p.data_rate_bits_per_s *= 3.7;
    const double after = evaluate(pl, p).transmission_s;
    CHECK(after == doctest::Approx(before / 3.7).epsilon(1e-12));
}

TEST_CASE("co-located units are interchangeable") {
    // u1 and u2 sit on the same point with the same class; swapping layers
    // between them changes nothing at all.
    std::vector<Vertex> vs = {{"s", VertexRole::source, 0, 0},
                              {"u1", VertexRole::unit, 1, 0},
                              {"u2", VertexRole::unit, 1, 0},
                              {"u3", VertexRole::unit, 2, 0},
                              {"f", VertexRole::sink, 3, 0}};
    PlacementProblem p;
    p.cnns.push_back({builtin_cnn("cnn5"), "s"});
    p.topology = Topology::disk_graph(vs, 1.0);
    for (const char* id : {"u1", "u2", "u3"}) {
        p.unit_classes[id] = device("uniform", 1e9, 560.0);
    }
    p.layers_per_unit_cap = 5;
    p.data_rate_bits_per_s = kWifi;

    const int a = p.topology.index_of("u1");
    const int b = p.topology.index_of("u2");
    const int c = p.topology.index_of("u3");
    Placement left{{{a, a, c, b, c}}};
    Placement right{{{b, b, c, a, c}}};
    CHECK(evaluate(left, p).total_s == evaluate(right, p).total_s);
}

TEST_CASE("evaluate matches an independent reference on random instances") {
    std::mt19937_64 gen(99);
    int checked = 0;
    for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
        const PlacementProblem p = random_instance(seed);
        const auto units = p.topology.unit_indices();
        // Random placement, feasible or not: evaluate doesn't care.
        Placement pl;
        for (const auto& entry : p.cnns) {
            std::vector<int> row;
            for (int j = 0; j < entry.cnn.depth(); ++j) {
                row.push_back(units[uniform_index(gen, units.size())]);
            }
            pl.assign.push_back(std::move(row));
        }
        const LatencyBreakdown b = evaluate(pl, p);
        CHECK(b.total_s == doctest::Approx(reference_total(pl, p)).epsilon(1e-12));
        CHECK(b.total_s == b.transmission_s + b.processing_s);
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("processing can be excluded from the objective") {
    PlacementProblem p = builtin_problem("fig1b-cnn5");
    p.conventions.include_processing = false;
    const Placement pl = fig1c_placement(p);
    const LatencyBreakdown b = evaluate(pl, p);
    CHECK(b.processing_s == 0.0);
    CHECK(b.total_s == b.transmission_s);
    // Hosting units still show up, with zero seconds.
    CHECK(b.processing_by_unit.size() == 5);
}

TEST_CASE("feasibility violations") {
    PlacementProblem p = builtin_problem("fig1b-cnn5");

    SUBCASE("feasible placement has no violations") {
        CHECK(check_feasibility(fig1c_placement(p), p).empty());
    }
    SUBCASE("layer cap") {
        // Two layers on n04 under cap 1.
        Placement pl = fig1c_placement(p);
        pl.assign[0][1] = p.topology.index_of("n04");
        const auto v = check_feasibility(pl, p);
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == Violation::Kind::layer_cap);
    }
    SUBCASE("memory cap") {
        // L3 (4816.9 KB) cannot fit any stm32h7 (512 KB).
        Placement pl = fig1c_placement(p);
        pl.assign[0][2] = p.topology.index_of("n07");
        const auto v = check_feasibility(pl, p);
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == Violation::Kind::memory);
        CHECK(v[0].message.find("n07") != std::string::npos);
    }
    SUBCASE("compute load cap") {
        PlacementProblem q = line_problem(builtin_cnn("cnn5"), 5,
                                          device("capped", 1e9, 560.0, 10.0), 1, kWifi);
        Placement pl;
        pl.assign = {{}};
        for (int j = 1; j <= 5; ++j) {
            pl.assign[0].push_back(q.topology.index_of("u" + std::to_string(j)));
        }
        // L2 alone is 20.08 Mmul > 10.
        const auto v = check_feasibility(pl, q);
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == Violation::Kind::compute);
    }
    SUBCASE("layer on a non-unit vertex") {
        Placement pl = fig1c_placement(p);
        pl.assign[0][4] = p.topology.index_of("s");
        bool bad_unit = false;
        for (const auto& v : check_feasibility(pl, p)) {
            bad_unit |= v.kind == Violation::Kind::bad_unit;
        }
        CHECK(bad_unit);
    }
    SUBCASE("wrong shape short-circuits") {
        Placement pl;
        pl.assign = {{0, 0}};
        const auto v = check_feasibility(pl, p);
        REQUIRE(v.size() == 1);
        CHECK(v[0].kind == Violation::Kind::shape);
        CHECK_THROWS_AS(evaluate(pl, p), Error);
    }
}

TEST_CASE("shared layers are charged once per hosting unit") {
    PlacementProblem p = builtin_problem("fig1b-2cnn5-shared12");
    // L1 of both copies shares one unit; memory charge is 19.2 KB, not 38.4.
    // Verify with a cap that only admits the single charge: stm32h7 is 512 KB
    // and L2 is 409.6 KB, so two L2 copies (819.2) would burst it.
    const int n01 = p.topology.index_of("n01"); // stm32h7
    const int n03 = p.topology.index_of("n03");
    const int n04 = p.topology.index_of("n04");
    const int n10 = p.topology.index_of("n10");
    const int n11 = p.topology.index_of("n11");
    p.layers_per_unit_cap = 2;
    Placement pl;
    pl.assign = {{n03, n01, n04, n10, n11}, {n03, n01, n04, n10, n11}};
    // Shared pairs co-located, both on-cap: group counts once toward the
    // 2-layer cap and once toward memory.
    const auto v = check_feasibility(pl, p);
    CHECK(v.empty());

    // Splitting a shared pair across units is its own violation.
    Placement split = pl;
    split.assign[1][0] = n11;
    bool sharing = false;
    for (const auto& viol : check_feasibility(split, p)) {
        sharing |= viol.kind == Violation::Kind::sharing;
    }
    CHECK(sharing);

    // Un-shared duplicate L2 pairs do burst the stm32h7 memory cap.
    PlacementProblem q = builtin_problem("fig1b-2cnn5");
    q.layers_per_unit_cap = 2;
    Placement both;
    both.assign = {{n03, n01, n04, n10, n11}, {n03, n01, n04, n10, n11}};
    bool memory = false;
    for (const auto& viol : check_feasibility(both, q)) {
        memory |= viol.kind == Violation::Kind::memory &&
                  viol.message.find("n01") != std::string::npos;
    }
    CHECK(memory);
}

TEST_CASE("conventions tags") {
    CHECK(conventions_tag(EvalConventions::compat()) == "compat");
    CHECK(conventions_tag(EvalConventions{}) == "as_written");
    EvalConventions ev;
    ev.include_processing = false;
    CHECK(conventions_tag(ev) == "as_written+bits+no_proc");
}
