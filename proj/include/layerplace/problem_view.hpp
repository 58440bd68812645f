#ifndef LAYERPLACE_PROBLEM_VIEW_HPP
#define LAYERPLACE_PROBLEM_VIEW_HPP

// Indexed view of a validated problem, shared by feasibility checking,
// linearization and the solvers.
//
// The central notion is the *placement entity*: the unit of assignment. An
// unshared layer is an entity of its own; a sharing group is one entity
// whose placement binds every member. Capacity accounting (layer count,
// memory, compute load) charges each entity once per unit, which is exactly
// the "stored once" semantics of shared layers.

#include <vector>

#include "layerplace/model.hpp"

namespace layerplace {

struct PlacementEntity {
    std::vector<LayerRef> members; // ascending (cnn, layer); size 1 when unshared
    double memory_kb = 0.0;
    double compute_mmul = 0.0;
};

struct ProblemView {
    std::vector<int> units;         // unit vertex indices, ascending
    int sink = -1;                  // sink vertex index, -1 when absent
    std::vector<int> source_of_cnn; // source vertex index per cnn
    // Device class per vertex index; null for non-unit vertices. Points into
    // the problem's unit_classes map, so the problem must outlive the view.
    std::vector<const DeviceClass*> device;

    std::vector<PlacementEntity> entities; // first-appearance order, cnn-major
    std::vector<std::vector<int>> entity_of; // [cnn][layer] -> entity index

    // Assumes the problem passed validate_problem.
    static ProblemView build(const PlacementProblem& problem);
};

} // namespace layerplace

#endif
