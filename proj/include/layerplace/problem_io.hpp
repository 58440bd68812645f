#ifndef LAYERPLACE_PROBLEM_IO_HPP
#define LAYERPLACE_PROBLEM_IO_HPP

// JSON (de)serialization for problems, placements and solver results.
//
// Problem document:
//   {
//     "cnns": [
//       {"name", "source", "input_kb", "final_out_kb",
//        "layers": [{"label", "memory_kb", "compute_mmul", "out_repr_kb"}],
//        "reach_prob": [1.0, ...]}          // optional, default no early exit
//     ],
//     "units": {
//       "classes": {"stm32h7": {"mem_cap_kb", "speed_mmul_per_s",
//                               "compute_cap_mmul"?}},
//       "members": {"n01": "stm32h7", ...}
//     },
//     "topology": {
//       "range": 7.5,
//       "vertices": [{"id", "role", "x", "y"}],   // role: unit|source|sink
//       "edges": [["a","b"], ...]                 // optional; present = use
//     },                                          // the explicit edge list
//     "sharing": [[{"cnn": 0, "layer": 1}, ...], ...],  // optional; layer 1-based
//     "config": {
//       "layers_per_unit_cap": 1,
//       "data_rate_bits_per_s": 72.2e6,
//       "conventions": {"processing_weight", "include_processing",
//                       "payload_unit"}           // optional
//     }
//   }
//
// Placement document: {"placements": [{"cnn", "assignments":
// [{"layer", "unit"}, ...]}]} with layers in network order; "layer" may be
// the label or the 1-based position.
//
// Times serialize in milliseconds at full double precision. Serialized
// objects use sorted keys, so equal inputs produce byte-equal documents.
// Malformed input surfaces as Error/ValidationError with the offending
// context in the message.

#include <string>

#include "json.hpp"
#include "layerplace/latency.hpp"
#include "layerplace/model.hpp"
#include "layerplace/solver.hpp"

namespace layerplace {

nlohmann::json cnn_to_json(const CnnSpec& cnn);
CnnSpec cnn_from_json(const nlohmann::json& j);

nlohmann::json device_to_json(const DeviceClass& device);
DeviceClass device_from_json(const std::string& name, const nlohmann::json& j);

nlohmann::json topology_to_json(const Topology& topo);
Topology topology_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const PlacementProblem& problem);
PlacementProblem problem_from_json(const nlohmann::json& j);

nlohmann::json placement_to_json(const Placement& placement,
                                 const PlacementProblem& problem);
Placement placement_from_json(const nlohmann::json& j, const PlacementProblem& problem);

// Milliseconds; includes the per-unit processing map.
nlohmann::json breakdown_to_json(const LatencyBreakdown& breakdown);
// Header line plus one value row, milliseconds.
std::string breakdown_csv(const LatencyBreakdown& breakdown);

// Full result: placements, objective_ms, breakdown, and the solver block
// (method, seed, proven_optimal, node/tie/restart counts; wall-clock time is
// deliberately left out so reruns serialize identically).
nlohmann::json solution_to_json(const Solution& solution, const PlacementProblem& problem,
                                const SolverConfig& config);

// File helpers; parse and open failures throw Error naming the path.
nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
PlacementProblem load_problem(const std::string& path);
void save_problem(const PlacementProblem& problem, const std::string& path);

} // namespace layerplace

#endif
