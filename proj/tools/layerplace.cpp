// Command-line front end: solve placement problems, evaluate placements,
// generate random deployments, run benchmark sweeps, dump fixtures, and
// export ILP models.
//
// Exit codes: 0 success, 1 bad input or I/O, 2 no feasible placement,
// 3 time budget exhausted before any feasible placement was found.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "layerplace/errors.hpp"
#include "layerplace/harness.hpp"
#include "layerplace/latency.hpp"
#include "layerplace/linearize.hpp"
#include "layerplace/model.hpp"
#include "layerplace/problem_io.hpp"
#include "layerplace/scenario.hpp"
#include "layerplace/solver.hpp"

namespace {

using namespace layerplace;

// Evaluation-convention flags shared by most subcommands. Precedence: the
// problem's stored conventions, then --paper-compat wholesale, then the
// individual flags.
struct ConventionFlags {
    bool paper_compat = false;
    bool no_processing = false;
    std::string weight;
    std::string payload;
    CLI::Option* weight_opt = nullptr;
    CLI::Option* payload_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_flag("--paper-compat", paper_compat,
                      "Use the reference-table conventions (next-layer processing "
                      "weight, byte-as-bit payloads)");
        cmd->add_flag("--no-processing", no_processing,
                      "Drop processing time from the objective");
        weight_opt = cmd->add_option("--processing-weight", weight,
                                     "Processing weight convention")
                         ->check(CLI::IsMember({"as_written", "next_layer_compat"}));
        payload_opt = cmd->add_option("--payload-unit", payload, "Payload unit convention")
                          ->check(CLI::IsMember({"bits_exact", "bytes_as_bits_compat"}));
    }

    EvalConventions apply(EvalConventions base) const {
        if (paper_compat) {
            base = EvalConventions::compat();
        }
        if (weight_opt && weight_opt->count() > 0) {
            base.processing_weight = processing_weight_from_string(weight);
        }
        if (payload_opt && payload_opt->count() > 0) {
            base.payload_unit = payload_unit_from_string(payload);
        }
        if (no_processing) {
            base.include_processing = false;
        }
        return base;
    }
};

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    write_text_file(out_path, text);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        if (end > start) {
            items.push_back(text.substr(start, end - start));
        }
        start = end + 1;
    }
    return items;
}

// "1,2,4", "1..4" ranges, and the special cap "C" (one unit may host the
// whole pipeline).
std::vector<int> parse_caps(const std::string& text) {
    std::vector<int> caps;
    for (const std::string& item : split_list(text)) {
        if (item == "C" || item == "c") {
            caps.push_back(kFullPipelineCap);
            continue;
        }
        const auto dots = item.find("..");
        try {
            if (dots != std::string::npos) {
                const int lo = std::stoi(item.substr(0, dots));
                const int hi = std::stoi(item.substr(dots + 2));
                if (lo > hi) {
                    throw Error("empty cap range '" + item + "'");
                }
                for (int v = lo; v <= hi; ++v) {
                    caps.push_back(v);
                }
            } else {
                caps.push_back(std::stoi(item));
            }
        } catch (const std::invalid_argument&) {
            throw Error("bad layer cap '" + item + "' (expected numbers, ranges or C)");
        }
    }
    if (caps.empty()) {
        throw Error("no layer caps given");
    }
    return caps;
}

std::vector<SharingGroup> share_first_layers(int shared, int n_cnns) {
    std::vector<SharingGroup> groups;
    for (int j = 0; j < shared; ++j) {
        SharingGroup g;
        for (int u = 0; u < n_cnns; ++u) {
            g.members.push_back({u, j});
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

struct SolveArgs {
    std::string problem_path;
    std::string out;
    std::string method = "branch_and_bound";
    std::uint64_t seed = 0;
    int cap_override = 0;
    double budget = 0.0;
    int restarts = 8;
    ConventionFlags conv;
    CLI::Option* cap_opt = nullptr;
    CLI::Option* budget_opt = nullptr;
};

void run_solve(const SolveArgs& args) {
    PlacementProblem problem = load_problem(args.problem_path);
    if (args.cap_opt->count() > 0) {
        problem.layers_per_unit_cap = args.cap_override;
    }
    problem.conventions = args.conv.apply(problem.conventions);
    ensure_valid(problem);

    SolverConfig config;
    config.method = solve_method_from_string(args.method);
    config.seed = args.seed;
    config.restarts = args.restarts;
    if (args.budget_opt->count() > 0) {
        config.time_budget_s = args.budget;
    }

    const Solution solution = solve(problem, config);
    std::cerr << to_string(config.method) << ": objective "
              << solution.objective_s * 1000.0 << " ms, "
              << (solution.proven_optimal ? "proven optimal" : "not proven optimal")
              << ", nodes " << solution.stats.nodes_explored << ", restarts "
              << solution.stats.restarts_run << "\n";
    emit(dump(solution_to_json(solution, problem, config)), args.out);
}

struct EvaluateArgs {
    std::string problem_path;
    std::string placement_path;
    std::string out;
    ConventionFlags conv;
};

void run_evaluate(const EvaluateArgs& args) {
    PlacementProblem problem = load_problem(args.problem_path);
    problem.conventions = args.conv.apply(problem.conventions);
    const Placement placement =
        placement_from_json(load_json_file(args.placement_path), problem);

    const LatencyBreakdown breakdown = evaluate(placement, problem);
    const std::vector<Violation> violations = check_feasibility(placement, problem);

    nlohmann::json doc = {{"breakdown", breakdown_to_json(breakdown)},
                          {"feasible", violations.empty()},
                          {"violations", nlohmann::json::array()}};
    for (const Violation& v : violations) {
        doc["violations"].push_back(
            {{"kind", to_string(v.kind)}, {"message", v.message}});
        std::cerr << "violation (" << to_string(v.kind) << "): " << v.message << "\n";
    }
    emit(dump(doc), args.out);
    if (!violations.empty()) {
        throw Infeasible("placement violates " + std::to_string(violations.size()) +
                         " constraint(s)");
    }
}

struct GenerateArgs {
    int units = 30;
    double area = 30.0;
    std::string profile = "wifi4";
    double range = 0.0;
    double rate = 0.0;
    std::string mix = "50-50";
    std::vector<std::string> cnns;
    int cap = 1;
    int share_first = 0;
    std::uint64_t seed = 0;
    std::string out;
    ConventionFlags conv;
    CLI::Option* range_opt = nullptr;
    CLI::Option* rate_opt = nullptr;
};

void run_generate(const GenerateArgs& args) {
    const TransmissionProfile profile = transmission_profile(args.profile);
    ScenarioParams params;
    params.n_units = args.units;
    params.area_side_m = args.area;
    params.range_m = args.range_opt->count() > 0 ? args.range : profile.range_m;
    params.data_rate_bits_per_s = args.rate_opt->count() > 0 ? args.rate : profile.rate_bits_per_s;
    params.mix = device_mix_from_string(args.mix);

    std::vector<CnnSpec> cnns;
    for (const std::string& name : args.cnns.empty() ? std::vector<std::string>{"cnn5"}
                                                     : args.cnns) {
        cnns.push_back(builtin_cnn(name));
    }
    params.n_sources = static_cast<int>(cnns.size());

    const PlacementProblem problem =
        generate(params, cnns, args.cap, args.seed,
                 share_first_layers(args.share_first, params.n_sources),
                 args.conv.apply({}));

    nlohmann::json doc = problem_to_json(problem);
    doc["meta"] = {{"seed", args.seed},
                   {"mix", params.mix.label},
                   {"profile", profile.name},
                   {"area_side_m", params.area_side_m}};
    std::cerr << "generated " << args.units << " units, seed " << args.seed << "\n";
    emit(dump(doc), args.out);
}

struct BenchArgs {
    std::vector<std::string> cnns;
    std::string mixes = "50-50";
    std::string profiles = "wifi4";
    std::string caps = "1";
    int trials = 100;
    int units = 30;
    double area = 30.0;
    std::uint64_t seed = 0;
    std::string method = "local_search";
    int restarts = 4;
    double budget = 0.0;
    int share_first = 0;
    std::string format = "csv";
    std::string out;
    ConventionFlags conv;
    CLI::Option* budget_opt = nullptr;
};

void run_bench(const BenchArgs& args) {
    ExperimentConfig config;
    config.scenario.n_units = args.units;
    config.scenario.area_side_m = args.area;
    for (const std::string& name : args.cnns.empty() ? std::vector<std::string>{"cnn5"}
                                                     : args.cnns) {
        config.cnns.push_back(builtin_cnn(name));
    }
    config.sharing = share_first_layers(args.share_first,
                                        static_cast<int>(config.cnns.size()));
    config.layer_caps = parse_caps(args.caps);
    for (const std::string& name : split_list(args.profiles)) {
        config.profiles.push_back(transmission_profile(name));
    }
    for (const std::string& mix : split_list(args.mixes)) {
        config.mixes.push_back(device_mix_from_string(mix));
    }
    config.conventions = args.conv.apply({});
    config.trials = args.trials;
    config.solver.method = solve_method_from_string(args.method);
    config.solver.restarts = args.restarts;
    if (args.budget_opt->count() > 0) {
        config.solver.time_budget_s = args.budget;
    }
    config.master_seed = args.seed;

    std::cerr << "sweep: " << config.mixes.size() * config.profiles.size() *
                                  config.layer_caps.size()
              << " rows x " << config.trials << " trials\n";
    const std::vector<AggregateRow> rows = run_experiment(config);
    emit(emit_report(rows, report_format_from_string(args.format)), args.out);
}

struct FixturesArgs {
    std::string name;
    std::string out;
};

void run_fixtures(const FixturesArgs& args) {
    if (args.name.empty()) {
        const auto print_list = [](const char* kind, const std::vector<std::string>& names) {
            std::cout << kind << ":";
            for (const std::string& n : names) {
                std::cout << ' ' << n;
            }
            std::cout << "\n";
        };
        print_list("cnns", builtin_cnn_names());
        print_list("devices", builtin_device_names());
        print_list("topologies", builtin_topology_names());
        print_list("problems", builtin_problem_names());
        return;
    }

    const auto problems = builtin_problem_names();
    for (const std::string& p : problems) {
        if (p == args.name) {
            emit(dump(problem_to_json(builtin_problem(args.name))), args.out);
            return;
        }
    }
    const Fixture fixture = builtin_fixture(args.name);
    nlohmann::json doc;
    if (const auto* cnn = std::get_if<CnnSpec>(&fixture)) {
        doc = cnn_to_json(*cnn);
    } else if (const auto* device = std::get_if<DeviceClass>(&fixture)) {
        doc = device_to_json(*device);
        doc["name"] = device->name;
    } else {
        doc = topology_to_json(std::get<Topology>(fixture));
    }
    emit(dump(doc), args.out);
}

struct ExportLpArgs {
    std::string problem_path;
    std::string out;
    int cap_override = 0;
    bool equality_rows = false;
    bool prune_zero_w = false;
    ConventionFlags conv;
    CLI::Option* cap_opt = nullptr;
};

void run_export_lp(const ExportLpArgs& args) {
    PlacementProblem problem = load_problem(args.problem_path);
    if (args.cap_opt->count() > 0) {
        problem.layers_per_unit_cap = args.cap_override;
    }
    problem.conventions = args.conv.apply(problem.conventions);
    ensure_valid(problem);

    LinearizeOptions options;
    options.sharing_equality_rows = args.equality_rows;
    options.prune_zero_coefficient_w = args.prune_zero_w;
    const IlpModel model = linearize(problem, options);

    std::string title = args.problem_path;
    if (const auto slash = title.find_last_of('/'); slash != std::string::npos) {
        title = title.substr(slash + 1);
    }
    emit(lp_string(model, title), args.out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal placement of CNN layers onto multi-hop IoT networks"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Find a minimum-latency placement");
    solve_cmd->add_option("problem", solve_args.problem_path, "Problem JSON file")
        ->required();
    solve_args.cap_opt =
        solve_cmd->add_option("--L", solve_args.cap_override, "Override layers-per-unit cap");
    solve_cmd->add_option("--method", solve_args.method,
                          "exhaustive | branch_and_bound | local_search")
        ->capture_default_str();
    solve_cmd->add_option("--seed", solve_args.seed, "Solver seed")->capture_default_str();
    solve_args.budget_opt =
        solve_cmd->add_option("--budget", solve_args.budget, "Time budget in seconds");
    solve_cmd->add_option("--restarts", solve_args.restarts, "Local search restarts")
        ->capture_default_str();
    solve_cmd->add_option("-o,--output", solve_args.out, "Output file (default stdout)");
    solve_args.conv.attach(solve_cmd);
    solve_cmd->callback([&] { run_solve(solve_args); });

    EvaluateArgs eval_args;
    CLI::App* eval_cmd =
        app.add_subcommand("evaluate", "Evaluate a placement's latency and feasibility");
    eval_cmd->add_option("problem", eval_args.problem_path, "Problem JSON file")->required();
    eval_cmd->add_option("placement", eval_args.placement_path, "Placement JSON file")
        ->required();
    eval_cmd->add_option("-o,--output", eval_args.out, "Output file (default stdout)");
    eval_args.conv.attach(eval_cmd);
    eval_cmd->callback([&] { run_evaluate(eval_args); });

    GenerateArgs gen_args;
    CLI::App* gen_cmd = app.add_subcommand("generate", "Generate a random deployment");
    gen_cmd->add_option("--units", gen_args.units, "Number of compute units")
        ->capture_default_str();
    gen_cmd->add_option("--area", gen_args.area, "Square area side (m)")
        ->capture_default_str();
    gen_cmd->add_option("--profile", gen_args.profile, "Transmission profile (wifi4 | halow)")
        ->capture_default_str();
    gen_args.range_opt =
        gen_cmd->add_option("--range", gen_args.range, "Radio range override (m)");
    gen_args.rate_opt =
        gen_cmd->add_option("--rate", gen_args.rate, "Data rate override (bits/s)");
    gen_cmd->add_option("--mix", gen_args.mix,
                        "Device mix: NN-MM stm32h7/raspberry split or class:prob list")
        ->capture_default_str();
    gen_cmd->add_option("--cnn", gen_args.cnns, "CNN fixture, repeatable (default cnn5)");
    gen_cmd->add_option("--L", gen_args.cap, "Layers-per-unit cap")->capture_default_str();
    gen_cmd->add_option("--share-first", gen_args.share_first,
                        "Share the first K layers across all CNNs");
    gen_cmd->add_option("--seed", gen_args.seed, "Generator seed")->capture_default_str();
    gen_cmd->add_option("-o,--output", gen_args.out, "Output file (default stdout)");
    gen_args.conv.attach(gen_cmd);
    gen_cmd->callback([&] { run_generate(gen_args); });

    BenchArgs bench_args;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "Monte-Carlo sweep over mixes, profiles and caps");
    bench_cmd->add_option("--cnn", bench_args.cnns, "CNN fixture, repeatable (default cnn5)");
    bench_cmd->add_option("--mix", bench_args.mixes, "Comma-separated device mixes")
        ->capture_default_str();
    bench_cmd->add_option("--profile", bench_args.profiles,
                          "Comma-separated transmission profiles")
        ->capture_default_str();
    bench_cmd->add_option("--L", bench_args.caps, "Comma-separated caps, ranges (1..4) or C")
        ->capture_default_str();
    bench_cmd->add_option("--trials", bench_args.trials, "Trials per row")
        ->capture_default_str();
    bench_cmd->add_option("--units", bench_args.units, "Units per deployment")
        ->capture_default_str();
    bench_cmd->add_option("--area", bench_args.area, "Square area side (m)")
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench_args.seed, "Master seed")->capture_default_str();
    bench_cmd->add_option("--method", bench_args.method,
                          "exhaustive | branch_and_bound | local_search")
        ->capture_default_str();
    bench_cmd->add_option("--restarts", bench_args.restarts, "Local search restarts")
        ->capture_default_str();
    bench_args.budget_opt = bench_cmd->add_option("--budget", bench_args.budget,
                                                  "Per-trial time budget in seconds");
    bench_cmd->add_option("--share-first", bench_args.share_first,
                          "Share the first K layers across all CNNs");
    bench_cmd->add_option("--format", bench_args.format, "csv | json | markdown")
        ->capture_default_str();
    bench_cmd->add_option("-o,--output", bench_args.out, "Output file (default stdout)");
    bench_args.conv.attach(bench_cmd);
    bench_cmd->callback([&] { run_bench(bench_args); });

    FixturesArgs fixtures_args;
    CLI::App* fixtures_cmd =
        app.add_subcommand("fixtures", "List built-in fixtures or dump one as JSON");
    fixtures_cmd->add_option("name", fixtures_args.name,
                             "Fixture or problem name (omit to list)");
    fixtures_cmd->add_option("-o,--output", fixtures_args.out, "Output file (default stdout)");
    fixtures_cmd->callback([&] { run_fixtures(fixtures_args); });

    ExportLpArgs lp_args;
    CLI::App* lp_cmd = app.add_subcommand("export-lp", "Write the linearized model in LP format");
    lp_cmd->add_option("problem", lp_args.problem_path, "Problem JSON file")->required();
    lp_args.cap_opt =
        lp_cmd->add_option("--L", lp_args.cap_override, "Override layers-per-unit cap");
    lp_cmd->add_flag("--sharing-equality-rows", lp_args.equality_rows,
                     "Keep per-member variables and tie shared layers with equality rows");
    lp_cmd->add_flag("--prune-zero-w", lp_args.prune_zero_w,
                     "Drop product variables with zero objective coefficient");
    lp_cmd->add_option("-o,--output", lp_args.out, "Output file (default stdout)");
    lp_args.conv.attach(lp_cmd);
    lp_cmd->callback([&] { run_export_lp(lp_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Infeasible& e) {
        if (e.authoritative) {
            std::cerr << "infeasible: " << e.what() << "\n";
        } else {
            std::cerr << "no placement found (heuristic search, not a proof): " << e.what()
                      << "\n";
        }
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
