#ifndef LAYERPLACE_LATENCY_HPP
#define LAYERPLACE_LATENCY_HPP

// End-to-end decision latency of a placement.
//
// The total decomposes as t = t_t + t_p with
//   t_t = t_s + t_inter + t_f
//   t_s      source-to-first-layer transfers, weighted by reach_prob[0]
//   t_inter  layer-to-layer transfers, transfer after layer j weighted by
//            the probability layer j+1 runs
//   t_f      exit-to-sink transfers, one term per layer weighted by its
//            exit probability, all carrying the decision payload
//   t_p      per-unit processing, weight per the processing convention
//
// A transfer over h hops costs payload_kb * unit_factor / rate * h seconds.
//
// Exactness contract: evaluate() accumulates its sums in a fixed canonical
// order (sources by cnn; inter-layer by (cnn, layer); exits by (cnn, layer);
// processing per unit in vertex-index order, units in vertex-index order;
// t = (t_s + t_inter + t_f) + t_p). The linearized objective replays the
// same terms in the same order, so the two agree bit-for-bit, not just
// within tolerance.

#include <optional>
#include <string>
#include <vector>

#include "layerplace/conventions.hpp"
#include "layerplace/model.hpp"
#include "layerplace/problem_view.hpp"

namespace layerplace {

// Which unit runs each layer: assign[cnn][layer] = topology vertex index.
struct Placement {
    std::vector<std::vector<int>> assign;

    bool shape_matches(const PlacementProblem& problem) const;
};

// Seconds to push payload_kb over `hops` hops at rate_bits_per_s.
// Throws UnreachableHop when hops is empty.
double transmission_time(double payload_kb, double rate_bits_per_s,
                         std::optional<int> hops, PayloadUnit unit);

// Single processing term: weight * compute / speed. Kept as a function so
// every caller rounds identically.
inline double processing_term(double weight, double compute_mmul, double speed_mmul_per_s) {
    return (weight * compute_mmul) / speed_mmul_per_s;
}

// Probability-weighted transfer, the shape of every transmission term.
inline double weighted_transfer(double probability, double payload_kb,
                                double rate_bits_per_s, std::optional<int> hops,
                                PayloadUnit unit) {
    return probability * transmission_time(payload_kb, rate_bits_per_s, hops, unit);
}

// Weight of layer j's compute term under the conventions; returns false when
// the layer contributes no term at all (processing excluded, or the last
// layer under the next-layer convention). Shared with the linearizer so both
// sides build identical terms.
inline bool processing_term_weight(const EvalConventions& ev,
                                   const std::vector<double>& reach_prob, int j,
                                   int depth, double& weight) {
    if (!ev.include_processing) return false;
    if (ev.processing_weight == ProcessingWeight::as_written) {
        weight = reach_prob[static_cast<std::size_t>(j)];
        return true;
    }
    if (j + 1 >= depth) return false;
    weight = reach_prob[static_cast<std::size_t>(j + 1)];
    return true;
}

struct LatencyBreakdown {
    double source_s = 0.0;
    double inter_layer_s = 0.0;
    double sink_s = 0.0;
    double transmission_s = 0.0; // source_s + inter_layer_s + sink_s
    // Per-unit processing (unit id, seconds), vertex-index order, only units
    // hosting at least one layer.
    std::vector<std::pair<std::string, double>> processing_by_unit;
    double processing_s = 0.0;
    double total_s = 0.0; // transmission_s + processing_s
};

// Individual terms. Each assumes a validated problem and a placement whose
// shape matches (throws Error otherwise); capacity feasibility is
// deliberately not required, see check_feasibility.
double source_time(const Placement& placement, const PlacementProblem& problem);
double inter_layer_time(const Placement& placement, const PlacementProblem& problem);
double sink_time(const Placement& placement, const PlacementProblem& problem);
// Seconds of processing per vertex index (zero for vertices hosting nothing).
std::vector<double> processing_time(const Placement& placement,
                                    const PlacementProblem& problem);

LatencyBreakdown evaluate(const Placement& placement, const PlacementProblem& problem);
LatencyBreakdown evaluate(const Placement& placement, const PlacementProblem& problem,
                          const ProblemView& view);

// ---- Feasibility ----

struct Violation {
    enum class Kind {
        shape,     // placement malformed for this problem
        bad_unit,  // assigned vertex is not a compute unit
        layer_cap, // more than L entities on one unit
        memory,    // memory capacity exceeded
        compute,   // compute load cap exceeded
        sharing,   // sharing group split across units
    };
    Kind kind;
    std::string message;
};

std::string to_string(Violation::Kind kind);

// Every violated capacity or co-location constraint; empty means feasible.
// Shared groups are charged once per unit. Never throws on infeasible input;
// violations are data.
std::vector<Violation> check_feasibility(const Placement& placement,
                                         const PlacementProblem& problem);
std::vector<Violation> check_feasibility(const Placement& placement,
                                         const PlacementProblem& problem,
                                         const ProblemView& view);

} // namespace layerplace

#endif
