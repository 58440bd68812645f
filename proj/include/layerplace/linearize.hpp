#ifndef LAYERPLACE_LINEARIZE_HPP
#define LAYERPLACE_LINEARIZE_HPP

// 0/1 integer linear program for the placement problem.
//
// Assignment variables a(entity, unit) say which unit hosts which placement
// entity (an unshared layer, or a whole sharing group: sharing is realized
// by substituting one variable for all members, so capacity rows count a
// group once per unit while the objective keeps every member's terms).
// Consecutive-layer transfers are quadratic in assignments; each product
// a1*a2 appearing in the objective gets a product variable w with the three
// standard linking rows
//     w <= a1,   w <= a2,   w >= a1 + a2 - 1,
// which pin w to the product exactly for binaries.
//
// Rows: one assignment row per entity (sum over units = 1), per-unit layer
// count / memory / optional compute-load rows, linking rows, and, in
// equality mode, explicit per-unit equality rows between shared members
// (with capacity rows then charging only the group's first member, i.e. the
// "all but one member drop out" correction realized on the row
// coefficients).
//
// Objective terms are stored in the canonical evaluation order described in
// latency.hpp, so objective_of_assignment reproduces latency::evaluate
// bit-for-bit on assignments induced by placements.

#include <iosfwd>
#include <string>
#include <vector>

#include "layerplace/latency.hpp"
#include "layerplace/model.hpp"
#include "layerplace/problem_view.hpp"

namespace layerplace {

struct IlpVariable {
    enum class Kind { assign, product };
    Kind kind = Kind::assign;
    std::string name;
    // assign vars:
    int entity = -1;   // index into IlpModel::entities
    int unit_pos = -1; // index into IlpModel::unit_vertices
    // product vars: the two assign-variable ids, first <= second.
    int first = -1;
    int second = -1;
};

struct LinearTerm {
    int var = -1;
    double coef = 0.0;
};

struct LinearRow {
    std::string name;
    std::vector<LinearTerm> terms;
    char relation = '<'; // '<' means <=, '=' equality, '>' means >=
    double rhs = 0.0;
};

struct LinearizeOptions {
    // Keep one assignment variable per shared member and tie them with
    // explicit equality rows instead of substituting. Same optima; exists so
    // the substitution can be tested against the literal formulation.
    bool sharing_equality_rows = false;
    // Additionally drop product variables whose objective coefficient is
    // exactly zero (e.g. same-unit pairs). Off by default; the optimum must
    // not depend on it.
    bool prune_zero_coefficient_w = false;
};

struct IlpModel {
    // One entity per assignable thing, in assignment order. In substitution
    // mode these are the ProblemView entities; in equality mode every
    // (cnn, layer) is its own entity and `charged` marks the ones capacity
    // rows count (the first member of each sharing group, plus everything
    // unshared).
    struct Entity {
        std::vector<LayerRef> members;
        double memory_kb = 0.0;
        double compute_mmul = 0.0;
        bool charged = true;
    };

    std::vector<Entity> entities;
    std::vector<std::vector<int>> entity_of; // [cnn][layer] -> entity index
    std::vector<int> unit_vertices;          // topology vertex per unit position

    std::vector<IlpVariable> variables; // assign vars first, then products
    int assign_var_count = 0;
    std::vector<LinearRow> rows;

    // Objective term lists in canonical evaluation order. A product variable
    // can appear in several inter-layer terms (shared chains); export-side
    // consumers should merge by variable, evaluation must not.
    std::vector<LinearTerm> source_terms;
    std::vector<LinearTerm> inter_terms;
    std::vector<LinearTerm> sink_terms;
    // (unit vertex, terms) with units ascending by vertex index.
    std::vector<std::pair<int, std::vector<LinearTerm>>> processing_terms;

    LinearizeOptions options;

    int assign_var(int entity, int unit_pos) const {
        return entity * static_cast<int>(unit_vertices.size()) + unit_pos;
    }
    int unit_count() const { return static_cast<int>(unit_vertices.size()); }
    int entity_count() const { return static_cast<int>(entities.size()); }

    // Merged objective coefficient per variable (zeros included).
    std::vector<double> merged_objective() const;
};

// Builds the ILP for a validated problem.
IlpModel linearize(const PlacementProblem& problem, LinearizeOptions options = {});

// 0/1 value per variable, indexed like IlpModel::variables.
using IlpAssignment = std::vector<int>;

// Assignment induced by a placement: assign vars from the layer positions,
// product vars as the actual products. Throws Error when a sharing group is
// split across units in substitution mode (no assignment represents that).
IlpAssignment assignment_from_placement(const IlpModel& model, const Placement& placement,
                                        const PlacementProblem& problem);

// Linear objective, reduced in the canonical order. Throws
// IncompleteAssignment when the assignment length does not match. Does not
// require feasibility; any 0/1 vector has a value.
double objective_of_assignment(const IlpModel& model, const IlpAssignment& assignment);

// Same terms with every product variable replaced by the product of its two
// assignment variables; equals the linear value whenever the linking rows
// hold.
double quadratic_objective_of_assignment(const IlpModel& model,
                                         const IlpAssignment& assignment);

// True when every row is satisfied.
bool satisfies_rows(const IlpModel& model, const IlpAssignment& assignment);

// Names of violated rows (for diagnostics).
std::vector<std::string> violated_rows(const IlpModel& model,
                                       const IlpAssignment& assignment);

// LP-format text (Minimize / Subject To / Binary / End) with merged
// objective coefficients.
void write_lp(const IlpModel& model, std::ostream& out, const std::string& title = "");
std::string lp_string(const IlpModel& model, const std::string& title = "");

} // namespace layerplace

#endif
