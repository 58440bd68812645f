#ifndef LAYERPLACE_SOLVER_HPP
#define LAYERPLACE_SOLVER_HPP

// Placement solvers.
//
//  - solve_exhaustive: enumerates every capacity-feasible assignment of
//    entities to units and keeps the best. Among equal-valued optima it
//    returns the lexicographically smallest assignment under the
//    seed-shuffled unit order (the first one depth-first search reaches).
//  - solve_branch_and_bound: same search tree, entities expanded in
//    assignment order, with an admissible lower bound (accumulated cost plus
//    each unassigned entity's cheapest feasible static cost plus each
//    unresolved transfer's cheapest possible hop cost), warm-started from a
//    short local search. Proven optimal unless the budget runs out.
//  - solve_local_search: multi-restart greedy construction (entities in
//    order, each to the unit with the least incremental cost) followed by
//    best-improvement descent over single reassignments and pairwise swaps.
//    Never proven optimal; its failure to find a placement is not a proof of
//    infeasibility.
//
// All three are deterministic given the seed: repeated runs return
// bit-identical solutions (elapsed time in the stats is the only field that
// varies, and it is excluded from serialized documents). The reported
// objective is always latency::evaluate on the returned placement.

#include <cstdint>
#include <optional>

#include "layerplace/latency.hpp"
#include "layerplace/model.hpp"

namespace layerplace {

enum class SolveMethod { exhaustive, branch_and_bound, local_search };

std::string to_string(SolveMethod m);
SolveMethod solve_method_from_string(std::string_view name);

struct SolverConfig {
    SolveMethod method = SolveMethod::branch_and_bound;
    std::uint64_t seed = 0;
    // Wall-clock budget in seconds. When it runs out an incumbent is
    // returned with proven_optimal=false; with no incumbent yet,
    // BudgetExceeded is thrown.
    std::optional<double> time_budget_s;
    int restarts = 8; // local search only
};

struct SolverStats {
    std::uint64_t nodes_explored = 0; // assignments tried (exact methods)
    std::uint64_t ties = 0;           // equal-valued optima met after the incumbent
    std::uint64_t restarts_run = 0;   // local search only
    double elapsed_s = 0.0;           // diagnostics only, never serialized
};

struct Solution {
    Placement placement;
    LatencyBreakdown breakdown;
    double objective_s = 0.0;
    bool proven_optimal = false;
    SolverStats stats;
};

Solution solve_exhaustive(const PlacementProblem& problem, const SolverConfig& config = {});
Solution solve_branch_and_bound(const PlacementProblem& problem,
                                const SolverConfig& config = {});
Solution solve_local_search(const PlacementProblem& problem, const SolverConfig& config = {});

// Dispatches on config.method.
Solution solve(const PlacementProblem& problem, const SolverConfig& config = {});

} // namespace layerplace

#endif
