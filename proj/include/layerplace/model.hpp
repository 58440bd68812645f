#ifndef LAYERPLACE_MODEL_HPP
#define LAYERPLACE_MODEL_HPP

// Problem model: CNNs as chains of layers with per-layer memory, compute and
// outgoing-representation size; device classes; early-exit (gate) profiles;
// cross-CNN layer sharing; and the full placement problem tying them to a
// topology.
//
// Unit conventions, fixed across the library:
//   memory      KB, 1 KB = 1000 bytes
//   compute     Mmul (10^6 multiplications)
//   speed       Mmul/s
//   payloads    KB
//   data rate   bits/s
//   time        seconds internally, milliseconds at serialization edges

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "layerplace/conventions.hpp"
#include "layerplace/errors.hpp"
#include "layerplace/topology.hpp"

namespace layerplace {

struct LayerSpec {
    std::string label;
    double memory_kb = 0.0;    // parameter storage while resident on a unit
    double compute_mmul = 0.0; // multiplications to run the layer once
    double out_repr_kb = 0.0;  // representation forwarded to the next layer
};

// Early-exit profile of a CNN with M layers.
//
// reach_prob[j] is the probability the input is still being processed when
// layer j+1 (1-based j+1) starts, so reach_prob[0] == 1 and the sequence is
// non-increasing. exit_prob[j] is the probability the decision is emitted at
// layer j+1; it is derived, not stored independently:
//   exit_prob[j]   = reach_prob[j] - reach_prob[j+1]   for j < M-1
//   exit_prob[M-1] = 1 - sum of the earlier exits
struct GateProfile {
    std::vector<double> reach_prob;
    std::vector<double> exit_prob;

    static GateProfile from_reach(std::vector<double> reach);
    // No early exits: reach 1 everywhere, exit 1 at the last layer.
    static GateProfile always_to_last(int depth);

    int depth() const { return static_cast<int>(reach_prob.size()); }
};

// Validates the reach curve and returns the exit probabilities.
// Throws ProfileError when reach is empty, reach[0] != 1, any entry is
// outside [0, 1], or the sequence increases.
std::vector<double> derive_exit_probabilities(const std::vector<double>& reach_prob);

struct CnnSpec {
    std::string name;
    double input_kb = 0.0; // payload from the source to the first layer
    std::vector<LayerSpec> layers;
    GateProfile gate;
    // Decision payload sent to the sink whenever an exit fires (the same
    // size at every exit).
    double final_out_kb = 0.0;

    int depth() const { return static_cast<int>(layers.size()); }
};

struct DeviceClass {
    std::string name;
    double mem_cap_kb = 0.0;
    std::optional<double> compute_cap_mmul; // optional load cap
    double speed_mmul_per_s = 0.0;
};

// (cnn, layer), both 0-based.
struct LayerRef {
    int cnn = 0;
    int layer = 0;

    auto operator<=>(const LayerRef&) const = default;
};

// Layers forced to run on the same unit as one stored instance. Members must
// have identical memory and compute (it is the same physical layer).
struct SharingGroup {
    std::vector<LayerRef> members;
};

struct PlacementProblem {
    struct CnnEntry {
        CnnSpec cnn;
        std::string source_id; // id of this CNN's source vertex
    };

    std::vector<CnnEntry> cnns;
    Topology topology;
    std::map<std::string, DeviceClass> unit_classes; // unit id -> class
    int layers_per_unit_cap = 1;                     // max layers hosted per unit
    double data_rate_bits_per_s = 0.0;
    std::vector<SharingGroup> sharing;
    EvalConventions conventions;

    const CnnSpec& cnn(int u) const { return cnns.at(static_cast<std::size_t>(u)).cnn; }
    int total_layers() const;
};

// Collects every violated model invariant (empty result = valid): gate
// profiles, positive caps/rates, topology connectivity, exactly one sink,
// one source vertex per CNN (a bijection), a device class for every unit,
// and well-formed sharing groups (size >= 2, in range, no overlap, members
// with identical memory and compute).
std::vector<std::string> validate_problem(const PlacementProblem& problem);

// Throws ValidationError with the full issue list when invalid.
void ensure_valid(const PlacementProblem& problem);

// ---- Built-in fixtures ----
//
// CNNs: "cnn5", "gc6", "alexnet", "gc-alexnet" (the gc-* variants carry an
// early-exit gate layer). Device classes: "stm32h7", "raspberry-3bp",
// "odroid-c2". Topology: "fig1b", an 11-unit disk graph with co-located
// source and sink. All throw UnknownFixture for anything else.

CnnSpec builtin_cnn(const std::string& name);
DeviceClass builtin_device(const std::string& name);
Topology builtin_topology(const std::string& name);

using Fixture = std::variant<CnnSpec, DeviceClass, Topology>;
Fixture builtin_fixture(const std::string& name);

std::vector<std::string> builtin_cnn_names();
std::vector<std::string> builtin_device_names();
std::vector<std::string> builtin_topology_names();

// Device class of each unit in the "fig1b" topology.
std::map<std::string, DeviceClass> fig1b_unit_classes();

// Complete ready-to-solve problems on the fig1b topology:
//   "fig1b-cnn5", "fig1b-gc6"            one CNN fed from vertex "s"
//   "fig1b-2cnn5", "fig1b-2cnn5-shared12" two cnn5 instances with co-located
//                                         sources (the shared variant ties
//                                         layers 1 and 2 of both copies)
// L defaults to 1 and the rate to the wifi4 profile; both can be overridden
// after the call.
PlacementProblem builtin_problem(const std::string& name);
std::vector<std::string> builtin_problem_names();

} // namespace layerplace

#endif
