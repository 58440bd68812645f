#include "layerplace/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "layerplace/errors.hpp"
#include "layerplace/latency.hpp"
#include "layerplace/rng.hpp"

namespace layerplace {

namespace {

struct Samples {
    std::vector<double> t_t, t_p, t; // ms

    void add(const LatencyBreakdown& b) {
        t_t.push_back(b.transmission_s * 1000.0);
        t_p.push_back(b.processing_s * 1000.0);
        t.push_back(b.total_s * 1000.0);
    }
};

std::pair<double, double> mean_std(const std::vector<double>& xs) {
    if (xs.empty()) {
        return {0.0, 0.0};
    }
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
    }
    const double mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

int resolve_cap(int cap, const std::vector<CnnSpec>& cnns) {
    if (cap != kFullPipelineCap) {
        return cap;
    }
    int total = 0;
    for (const CnnSpec& c : cnns) {
        total += c.depth();
    }
    return total;
}

std::string cap_label(int cap) {
    return cap == kFullPipelineCap ? std::string("C") : std::to_string(cap);
}

std::string fmt2(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string cell(double mean, double std) { return fmt2(mean) + " ± " + fmt2(std); }

} // namespace

std::vector<AggregateRow> run_experiment(const ExperimentConfig& config) {
    if (config.cnns.empty()) {
        throw ValidationError({"experiment has no CNNs"});
    }
    if (config.mixes.empty() || config.profiles.empty() || config.layer_caps.empty()) {
        throw ValidationError({"experiment needs at least one mix, profile and layer cap"});
    }
    if (config.trials < 1) {
        throw ValidationError({"experiment needs at least one trial"});
    }

    std::vector<AggregateRow> rows;
    std::uint64_t row_index = 0;
    for (const DeviceMix& mix : config.mixes) {
        for (const TransmissionProfile& profile : config.profiles) {
            for (const int cap : config.layer_caps) {
                AggregateRow row;
                row.mix = mix.label;
                row.cap_label = cap_label(cap);
                row.cap = resolve_cap(cap, config.cnns);
                row.profile = profile.name;
                row.mode = conventions_tag(config.conventions);

                Samples samples;
                for (int trial = 0; trial < config.trials; ++trial) {
                    const std::uint64_t seed =
                        derive_seed(config.master_seed, row_index, static_cast<std::uint64_t>(trial));
                    ScenarioParams params = config.scenario;
                    params.mix = mix;
                    params.range_m = profile.range_m;
                    params.data_rate_bits_per_s = profile.rate_bits_per_s;
                    params.n_sources = static_cast<int>(config.cnns.size());
                    SolverConfig solver = config.solver;
                    solver.seed = seed;
                    try {
                        const PlacementProblem problem =
                            generate(params, config.cnns, row.cap, seed, config.sharing,
                                     config.conventions);
                        samples.add(solve(problem, solver).breakdown);
                    } catch (const GenerationExhausted&) {
                        ++row.failures;
                    } catch (const Infeasible&) {
                        ++row.failures;
                    } catch (const BudgetExceeded&) {
                        ++row.failures;
                    }
                }

                row.trials = static_cast<int>(samples.t.size());
                std::tie(row.t_t_mean_ms, row.t_t_std_ms) = mean_std(samples.t_t);
                std::tie(row.t_p_mean_ms, row.t_p_std_ms) = mean_std(samples.t_p);
                std::tie(row.t_mean_ms, row.t_std_ms) = mean_std(samples.t);
                rows.push_back(std::move(row));
                ++row_index;
            }
        }
    }
    return rows;
}

ReportFormat report_format_from_string(const std::string& name) {
    if (name == "csv") {
        return ReportFormat::csv;
    }
    if (name == "json") {
        return ReportFormat::json;
    }
    if (name == "markdown" || name == "md") {
        return ReportFormat::markdown;
    }
    throw UnsupportedFormat("unknown report format '" + name +
                            "' (available: csv, json, markdown)");
}

namespace {

std::string emit_csv(const std::vector<AggregateRow>& rows) {
    std::ostringstream out;
    out << "mix,L,profile,mode,t_t_mean,t_t_std,t_p_mean,t_p_std,t_mean,t_std,trials,failures\n";
    for (const AggregateRow& r : rows) {
        out << r.mix << ',' << r.cap_label << ',' << r.profile << ',' << r.mode << ','
            << fmt2(r.t_t_mean_ms) << ',' << fmt2(r.t_t_std_ms) << ','
            << fmt2(r.t_p_mean_ms) << ',' << fmt2(r.t_p_std_ms) << ','
            << fmt2(r.t_mean_ms) << ',' << fmt2(r.t_std_ms) << ','
            << r.trials << ',' << r.failures << '\n';
    }
    return out.str();
}

std::string emit_json(const std::vector<AggregateRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const AggregateRow& r : rows) {
        arr.push_back({{"mix", r.mix},
                       {"L", r.cap_label},
                       {"profile", r.profile},
                       {"mode", r.mode},
                       {"t_t_mean_ms", r.t_t_mean_ms},
                       {"t_t_std_ms", r.t_t_std_ms},
                       {"t_p_mean_ms", r.t_p_mean_ms},
                       {"t_p_std_ms", r.t_p_std_ms},
                       {"t_mean_ms", r.t_mean_ms},
                       {"t_std_ms", r.t_std_ms},
                       {"trials", r.trials},
                       {"failures", r.failures}});
    }
    return arr.dump(2) + "\n";
}

std::string emit_markdown(const std::vector<AggregateRow>& rows) {
    // Group by (profile, mode); pivot each group to caps-by-mixes tables.
    std::vector<std::pair<std::string, std::string>> groups;
    for (const AggregateRow& r : rows) {
        const std::pair<std::string, std::string> key{r.profile, r.mode};
        if (std::find(groups.begin(), groups.end(), key) == groups.end()) {
            groups.push_back(key);
        }
    }

    std::ostringstream out;
    for (const auto& [profile, mode] : groups) {
        std::vector<std::string> mixes, caps;
        for (const AggregateRow& r : rows) {
            if (r.profile != profile || r.mode != mode) {
                continue;
            }
            if (std::find(mixes.begin(), mixes.end(), r.mix) == mixes.end()) {
                mixes.push_back(r.mix);
            }
            if (std::find(caps.begin(), caps.end(), r.cap_label) == caps.end()) {
                caps.push_back(r.cap_label);
            }
        }
        const auto find_row = [&](const std::string& mix,
                                  const std::string& cap) -> const AggregateRow* {
            for (const AggregateRow& r : rows) {
                if (r.profile == profile && r.mode == mode && r.mix == mix &&
                    r.cap_label == cap) {
                    return &r;
                }
            }
            return nullptr;
        };

        out << "## " << profile << ", " << mode << "\n";
        struct Metric {
            const char* title;
            double AggregateRow::*mean;
            double AggregateRow::*std;
        };
        const Metric metrics[] = {
            {"t_t (ms)", &AggregateRow::t_t_mean_ms, &AggregateRow::t_t_std_ms},
            {"t_p (ms)", &AggregateRow::t_p_mean_ms, &AggregateRow::t_p_std_ms},
            {"t (ms)", &AggregateRow::t_mean_ms, &AggregateRow::t_std_ms},
        };
        for (const Metric& m : metrics) {
            out << "\n### " << m.title << "\n\n| L |";
            for (const std::string& mix : mixes) {
                out << ' ' << mix << " |";
            }
            out << "\n|---|";
            for (std::size_t i = 0; i < mixes.size(); ++i) {
                out << "---|";
            }
            out << '\n';
            for (const std::string& cap : caps) {
                out << "| " << cap << " |";
                for (const std::string& mix : mixes) {
                    const AggregateRow* r = find_row(mix, cap);
                    out << ' ' << (r ? cell(r->*(m.mean), r->*(m.std)) : "-") << " |";
                }
                out << '\n';
            }
        }
        out << '\n';
    }
    return out.str();
}

} // namespace

std::string emit_report(const std::vector<AggregateRow>& rows, ReportFormat format) {
    switch (format) {
    case ReportFormat::csv:
        return emit_csv(rows);
    case ReportFormat::json:
        return emit_json(rows);
    case ReportFormat::markdown:
        return emit_markdown(rows);
    }
    throw UnsupportedFormat("unhandled report format");
}

} // namespace layerplace
