#include "layerplace/scenario.hpp"

#include <cmath>
#include <algorithm>
#include <random>
#include <set>
#include <utility>

#include "layerplace/errors.hpp"
#include "layerplace/rng.hpp"

namespace layerplace {

namespace {

constexpr int kMaxLayoutAttempts = 1000;

void check_mix(const DeviceMix& mix) {
    if (mix.classes.empty()) {
        throw ValidationError({"device mix has no classes"});
    }
    double sum = 0.0;
    std::set<std::string> seen;
    for (const auto& [cls, prob] : mix.classes) {
        if (prob < 0.0) {
            throw ValidationError({"device mix probability for '" + cls.name + "' is negative"});
        }
        if (!seen.insert(cls.name).second) {
            throw ValidationError({"device mix lists class '" + cls.name + "' twice"});
        }
        sum += prob;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError({"device mix probabilities sum to " + std::to_string(sum) +
                               ", expected 1"});
    }
}

const DeviceClass& draw_class(const DeviceMix& mix, std::mt19937_64& gen) {
    const double u = uniform01(gen);
    double cum = 0.0;
    for (const auto& [cls, prob] : mix.classes) {
        cum += prob;
        if (u < cum) {
            return cls;
        }
    }
    return mix.classes.back().first; // u landed on accumulated rounding slack
}

std::string unit_id(int index, int n_units) {
    std::string digits = std::to_string(index + 1);
    const std::size_t width = std::max<std::size_t>(2, std::to_string(n_units).size());
    if (digits.size() < width) {
        digits.insert(0, width - digits.size(), '0');
    }
    return "n" + digits;
}

} // namespace

TransmissionProfile transmission_profile(const std::string& name) {
    if (name == "wifi4") {
        return {"wifi4", 72.2e6, 7.5};
    }
    if (name == "halow") {
        return {"halow", 7.2e6, 7.5};
    }
    throw UnknownProfile("unknown transmission profile '" + name +
                         "' (available: wifi4, halow)");
}

std::vector<std::string> transmission_profile_names() { return {"wifi4", "halow"}; }

DeviceMix device_mix_from_string(const std::string& text) {
    if (text.empty()) {
        throw ValidationError({"empty device mix"});
    }

    // "NN-MM": percent split between stm32h7 and raspberry-3bp.
    const auto dash = text.find('-');
    if (dash != std::string::npos &&
        text.find_first_not_of("0123456789-") == std::string::npos &&
        text.find('-', dash + 1) == std::string::npos && dash > 0 &&
        dash + 1 < text.size()) {
        const int stm = std::stoi(text.substr(0, dash));
        const int pi = std::stoi(text.substr(dash + 1));
        if (stm + pi != 100) {
            throw ValidationError({"device mix '" + text + "' does not sum to 100"});
        }
        DeviceMix mix;
        mix.label = text;
        mix.classes.emplace_back(builtin_device("stm32h7"), stm / 100.0);
        mix.classes.emplace_back(builtin_device("raspberry-3bp"), pi / 100.0);
        return mix;
    }

    // "class:prob,class:prob" over the built-in device classes.
    DeviceMix mix;
    mix.label = text;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        const std::string item = text.substr(start, end - start);
        const auto colon = item.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= item.size()) {
            throw ValidationError({"bad device mix entry '" + item +
                                   "', expected class:probability"});
        }
        double prob = 0.0;
        try {
            prob = std::stod(item.substr(colon + 1));
        } catch (const std::exception&) {
            throw ValidationError({"bad probability in device mix entry '" + item + "'"});
        }
        mix.classes.emplace_back(builtin_device(item.substr(0, colon)), prob);
        start = end + 1;
    }
    check_mix(mix);
    return mix;
}

PlacementProblem generate(const ScenarioParams& params, const std::vector<CnnSpec>& cnns,
                          int layers_per_unit_cap, std::uint64_t seed,
                          const std::vector<SharingGroup>& sharing,
                          const EvalConventions& conventions) {
    if (params.n_units < 1) {
        throw ValidationError({"scenario needs at least one unit"});
    }
    if (params.area_side_m <= 0.0 || params.range_m <= 0.0) {
        throw ValidationError({"scenario area side and range must be positive"});
    }
    if (cnns.empty()) {
        throw ValidationError({"scenario needs at least one CNN"});
    }
    if (params.n_sources != static_cast<int>(cnns.size())) {
        throw ValidationError({"scenario has " + std::to_string(params.n_sources) +
                               " sources for " + std::to_string(cnns.size()) + " CNNs"});
    }
    check_mix(params.mix);

    std::mt19937_64 gen(seed);
    const auto coord = [&] { return uniform01(gen) * params.area_side_m; };

    for (int attempt = 0; attempt < kMaxLayoutAttempts; ++attempt) {
        std::vector<Vertex> vertices;
        std::vector<const DeviceClass*> classes;
        for (int i = 0; i < params.n_units; ++i) {
            const double x = coord();
            const double y = coord();
            classes.push_back(&draw_class(params.mix, gen));
            vertices.push_back({unit_id(i, params.n_units), VertexRole::unit, x, y});
        }
        for (int k = 0; k < params.n_sources; ++k) {
            const double x = coord();
            const double y = coord();
            vertices.push_back({"s" + std::to_string(k + 1), VertexRole::source, x, y});
        }
        {
            const double x = coord();
            const double y = coord();
            vertices.push_back({"f", VertexRole::sink, x, y});
        }

        Topology topo = Topology::disk_graph(std::move(vertices), params.range_m);
        if (!topo.connected()) {
            continue;
        }

        PlacementProblem problem;
        for (int k = 0; k < params.n_sources; ++k) {
            problem.cnns.push_back({cnns[static_cast<std::size_t>(k)],
                                    "s" + std::to_string(k + 1)});
        }
        problem.topology = std::move(topo);
        for (int i = 0; i < params.n_units; ++i) {
            problem.unit_classes[unit_id(i, params.n_units)] =
                *classes[static_cast<std::size_t>(i)];
        }
        problem.layers_per_unit_cap = layers_per_unit_cap;
        problem.data_rate_bits_per_s = params.data_rate_bits_per_s;
        problem.sharing = sharing;
        problem.conventions = conventions;
        ensure_valid(problem);
        return problem;
    }

    throw GenerationExhausted("no connected layout after " +
                              std::to_string(kMaxLayoutAttempts) + " attempts (" +
                              std::to_string(params.n_units) + " units, side " +
                              std::to_string(params.area_side_m) + " m, range " +
                              std::to_string(params.range_m) + " m)");
}

} // namespace layerplace
