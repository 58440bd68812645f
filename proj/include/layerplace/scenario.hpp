#ifndef LAYERPLACE_SCENARIO_HPP
#define LAYERPLACE_SCENARIO_HPP

// Random deployment generator: units, sources and the sink are dropped
// uniformly into a square area, device classes are drawn from a mix, and the
// disk-graph topology over them is kept only if connected; otherwise the
// whole layout is resampled (positions and classes together, so the kept
// layout is uniform conditioned on connectivity). Deterministic given the
// seed.

#include <cstdint>
#include <string>
#include <vector>

#include "layerplace/model.hpp"

namespace layerplace {

struct TransmissionProfile {
    std::string name;
    double rate_bits_per_s = 0.0;
    double range_m = 0.0;
};

// "wifi4" (72.2 Mb/s) or "halow" (7.2 Mb/s), both with 7.5 m range.
// Throws UnknownProfile otherwise.
TransmissionProfile transmission_profile(const std::string& name);
std::vector<std::string> transmission_profile_names();

struct DeviceMix {
    std::string label;
    std::vector<std::pair<DeviceClass, double>> classes; // probabilities, sum 1
};

// "NN-MM" percent split between stm32h7 and raspberry-3bp (e.g. "50-50",
// "10-90"; the first number is the stm32h7 share), or an explicit
// "class:prob,class:prob" list over the built-in device classes.
DeviceMix device_mix_from_string(const std::string& text);

struct ScenarioParams {
    int n_units = 30;
    double area_side_m = 30.0;
    double range_m = 7.5;
    DeviceMix mix;
    int n_sources = 1;
    double data_rate_bits_per_s = 72.2e6;
    std::uint64_t seed = 0; // default when generate() gets no explicit seed
};

// Draw order per attempt, one mt19937_64 stream: for each unit x, y, class;
// then for each source x, y; then sink x, y. Up to 1000 attempts, then
// GenerationExhausted. Unit ids are "n01".."nNN"; sources "s1".."sK"
// (cnns[k] reads from "s{k+1}"); the sink is "f".
PlacementProblem generate(const ScenarioParams& params, const std::vector<CnnSpec>& cnns,
                          int layers_per_unit_cap, std::uint64_t seed,
                          const std::vector<SharingGroup>& sharing = {},
                          const EvalConventions& conventions = {});

inline PlacementProblem generate(const ScenarioParams& params,
                                 const std::vector<CnnSpec>& cnns,
                                 int layers_per_unit_cap) {
    return generate(params, cnns, layers_per_unit_cap, params.seed);
}

} // namespace layerplace

#endif
