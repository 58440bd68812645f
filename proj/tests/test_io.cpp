#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "layerplace/problem_io.hpp"
#include "layerplace/scenario.hpp"
#include "layerplace/solver.hpp"

using namespace layerplace;
using nlohmann::json;

namespace {

// Serialize -> parse -> serialize must be a fixed point byte for byte.
void check_roundtrip(const PlacementProblem& p) {
    const json first = problem_to_json(p);
    const PlacementProblem back = problem_from_json(first);
    const json second = problem_to_json(back);
    CHECK(first.dump() == second.dump());
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("io_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

// Runs fn, which must throw an Error, and returns its message.
template <typename Fn>
std::string error_message(Fn&& fn) {
    try {
        std::forward<Fn>(fn)();
    } catch (const Error& e) {
        return e.what();
    }
    FAIL("expected an Error");
    return {};
}

} // namespace

TEST_CASE("problem documents round-trip byte for byte") {
    for (const std::string name :
         {"fig1b-cnn5", "fig1b-gc6", "fig1b-2cnn5", "fig1b-2cnn5-shared12"}) {
        CAPTURE(name);
        check_roundtrip(builtin_problem(name));
    }

    // A generated layout exercises free-form coordinates and classes.
    ScenarioParams sp;
    sp.n_units = 10;
    sp.area_side_m = 10.0;
    sp.mix = device_mix_from_string("50-50");
    check_roundtrip(generate(sp, {builtin_cnn("gc6")}, 2, 123));

    // Explicit-edge topologies must keep their edge list, not re-derive it
    // from geometry, and gates, sharing and conventions must all survive.
    for (std::uint64_t seed = 40; seed < 60; ++seed) {
        CAPTURE(seed);
        const PlacementProblem p = testutil::random_instance(seed);
        check_roundtrip(p);
        const PlacementProblem back = problem_from_json(problem_to_json(p));
        REQUIRE(back.topology.from_explicit_edges());
        CHECK(back.topology.hops(back.topology.index_of("s1"),
                                 back.topology.index_of("f")) ==
              p.topology.hops(p.topology.index_of("s1"), p.topology.index_of("f")));
    }
}

TEST_CASE("conventions and sharing survive the round trip") {
    PlacementProblem p = builtin_problem("fig1b-2cnn5-shared12");
    p.conventions = EvalConventions::compat();
    const PlacementProblem back = problem_from_json(problem_to_json(p));
    CHECK(back.conventions.processing_weight == ProcessingWeight::next_layer_compat);
    CHECK(back.conventions.payload_unit == PayloadUnit::bytes_as_bits_compat);
    CHECK(back.conventions.include_processing);
    REQUIRE(back.sharing.size() == 2);
    CHECK(back.sharing[0].members[0].cnn == 0);
    CHECK(back.sharing[0].members[0].layer == 0);
    CHECK(back.sharing[1].members[1].cnn == 1);
    CHECK(back.sharing[1].members[1].layer == 1);

    // In the file the layer indices read 1-based.
    const json doc = problem_to_json(p);
    CHECK(doc["sharing"][0][0]["layer"] == 1);
    CHECK(doc["sharing"][1][0]["layer"] == 2);
}

TEST_CASE("malformed problem documents name the offending context") {
    json doc = problem_to_json(builtin_problem("fig1b-cnn5"));
    SUBCASE("missing cnn key") {
        doc["cnns"][0].erase("input_kb");
        const std::string msg = error_message([&] { problem_from_json(doc); });
        CHECK(msg.find("input_kb") != std::string::npos);
    }
    SUBCASE("unknown member class") {
        doc["units"]["members"]["n01"] = "cray-1";
        const std::string msg = error_message([&] { problem_from_json(doc); });
        CHECK(msg.find("cray-1") != std::string::npos);
    }
    SUBCASE("bad vertex role") {
        doc["topology"]["vertices"][0]["role"] = "router";
        const std::string msg = error_message([&] { problem_from_json(doc); });
        CHECK(msg.find("router") != std::string::npos);
    }
    SUBCASE("topology without range or edges") {
        doc["topology"].erase("range");
        CHECK_THROWS_AS(problem_from_json(doc), Error);
    }
    SUBCASE("validation still runs") {
        doc["config"]["layers_per_unit_cap"] = 0;
        CHECK_THROWS_AS(problem_from_json(doc), ValidationError);
    }
}

TEST_CASE("placement documents") {
    const PlacementProblem p = builtin_problem("fig1b-cnn5");
    Placement pl;
    pl.assign = {{p.topology.index_of("n05"), p.topology.index_of("n10"),
                  p.topology.index_of("n04"), p.topology.index_of("n01"),
                  p.topology.index_of("n06")}};

    const json doc = placement_to_json(pl, p);
    REQUIRE(doc["placements"].size() == 1);
    CHECK(doc["placements"][0]["cnn"] == "cnn5");
    REQUIRE(doc["placements"][0]["assignments"].size() == 5);
    CHECK(doc["placements"][0]["assignments"][0]["layer"] == "L1");
    CHECK(doc["placements"][0]["assignments"][0]["unit"] == "n05");

    SUBCASE("round trip by label") {
        const Placement back = placement_from_json(doc, p);
        CHECK(back.assign == pl.assign);
    }
    SUBCASE("1-based positions work too") {
        json by_pos = doc;
        for (int j = 0; j < 5; ++j) {
            by_pos["placements"][0]["assignments"][static_cast<std::size_t>(j)]["layer"] =
                j + 1;
        }
        CHECK(placement_from_json(by_pos, p).assign == pl.assign);
    }
    SUBCASE("wrong assignment count") {
        json bad = doc;
        bad["placements"][0]["assignments"].erase(4);
        CHECK_THROWS_AS(placement_from_json(bad, p), Error);
    }
    SUBCASE("unknown cnn name") {
        json bad = doc;
        bad["placements"][0]["cnn"] = "resnet";
        const std::string msg = error_message([&] { placement_from_json(bad, p); });
        CHECK(msg.find("resnet") != std::string::npos);
    }
    SUBCASE("unknown unit") {
        json bad = doc;
        bad["placements"][0]["assignments"][0]["unit"] = "n99";
        const std::string msg = error_message([&] { placement_from_json(bad, p); });
        CHECK(msg.find("n99") != std::string::npos);
    }
    SUBCASE("wrong layer label") {
        json bad = doc;
        bad["placements"][0]["assignments"][0]["layer"] = "L9";
        CHECK_THROWS_AS(placement_from_json(bad, p), Error);
    }
    SUBCASE("missing cnn entry") {
        json bad = doc;
        bad["placements"] = json::array();
        CHECK_THROWS_AS(placement_from_json(bad, p), Error);
    }
}

TEST_CASE("placements for same-named cnns match positionally") {
    const PlacementProblem p = builtin_problem("fig1b-2cnn5"); // both named cnn5
    const Solution s = solve(p, {});
    const json doc = placement_to_json(s.placement, p);
    REQUIRE(doc["placements"].size() == 2);
    const Placement back = placement_from_json(doc, p);
    CHECK(back.assign == s.placement.assign);

    json renamed = doc;
    renamed["placements"][0]["cnn"] = "other";
    CHECK_THROWS_AS(placement_from_json(renamed, p), Error);
}

TEST_CASE("breakdown serialization uses milliseconds") {
    const PlacementProblem p = builtin_problem("fig1b-cnn5");
    const Solution s = solve(p, {});
    const json j = breakdown_to_json(s.breakdown);
    CHECK(j["t_ms"].get<double>() == s.breakdown.total_s * 1000.0);
    CHECK(j["t_t_ms"].get<double>() == s.breakdown.transmission_s * 1000.0);
    CHECK(j["t_p_ms"].get<double>() == s.breakdown.processing_s * 1000.0);
    CHECK(j["t_s_ms"].get<double>() == s.breakdown.source_s * 1000.0);
    CHECK(j["t_inter_ms"].get<double>() == s.breakdown.inter_layer_s * 1000.0);
    CHECK(j["t_f_ms"].get<double>() == s.breakdown.sink_s * 1000.0);
    CHECK(j["t_p_per_unit_ms"].size() == s.breakdown.processing_by_unit.size());

    const std::string csv = breakdown_csv(s.breakdown);
    CHECK(csv.substr(0, csv.find('\n')) == "t_ms,t_t_ms,t_p_ms,t_s_ms,t_inter_ms,t_f_ms");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("solution documents are rerun-stable") {
    const PlacementProblem p = builtin_problem("fig1b-gc6");
    SolverConfig cfg;
    cfg.seed = 3;
    const json a = solution_to_json(solve(p, cfg), p, cfg);
    const json b = solution_to_json(solve(p, cfg), p, cfg);
    CHECK(a.dump() == b.dump());
    CHECK(a.dump().find("elapsed") == std::string::npos);
    CHECK(a["solver"]["method"] == "branch_and_bound");
    CHECK(a["solver"]["seed"] == 3);
    CHECK(a["solver"]["proven_optimal"] == true);
    CHECK(a.contains("objective_ms"));
    CHECK(a.contains("breakdown"));
    CHECK(a.contains("placements"));
}

TEST_CASE("file helpers") {
    SUBCASE("save and load a problem") {
        TempFile f("roundtrip.json");
        const PlacementProblem p = builtin_problem("fig1b-cnn5");
        save_problem(p, f.path);
        const PlacementProblem back = load_problem(f.path);
        CHECK(problem_to_json(back).dump() == problem_to_json(p).dump());
    }
    SUBCASE("missing file names the path") {
        const std::string msg =
            error_message([&] { load_problem("no_such_dir/nope.json"); });
        CHECK(msg.find("no_such_dir/nope.json") != std::string::npos);
    }
    SUBCASE("parse errors name the path") {
        TempFile f("garbage.json");
        {
            std::ofstream out(f.path);
            out << "{ not json";
        }
        const std::string msg = error_message([&] { load_json_file(f.path); });
        CHECK(msg.find(f.path) != std::string::npos);
    }
    SUBCASE("validation failures pass through untouched") {
        TempFile f("invalid.json");
        json doc = problem_to_json(builtin_problem("fig1b-cnn5"));
        doc["config"]["data_rate_bits_per_s"] = 0.0;
        write_text_file(f.path, doc.dump());
        CHECK_THROWS_AS(load_problem(f.path), ValidationError);
    }
}
