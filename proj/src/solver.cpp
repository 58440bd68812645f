#include "layerplace/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "layerplace/rng.hpp"

namespace layerplace {

std::string to_string(SolveMethod m) {
    switch (m) {
    case SolveMethod::exhaustive: return "exhaustive";
    case SolveMethod::branch_and_bound: return "branch_and_bound";
    case SolveMethod::local_search: return "local_search";
    }
    return "branch_and_bound";
}

SolveMethod solve_method_from_string(std::string_view name) {
    if (name == "exhaustive") return SolveMethod::exhaustive;
    if (name == "branch_and_bound" || name == "branch-and-bound" || name == "bnb") {
        return SolveMethod::branch_and_bound;
    }
    if (name == "local_search" || name == "local-search") return SolveMethod::local_search;
    throw Error("unknown solve method: " + std::string(name));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Equal-value ties between differently-accumulated sums can drift by an ulp;
// this slack is far above that and far below any real objective gap.
double prune_slack(double incumbent) { return 1e-12 * (1.0 + std::abs(incumbent)); }

// Per-unit running load used for capacity pruning.
struct LoadState {
    const PlacementProblem* problem;
    const ProblemView* view;
    std::vector<int> count;
    std::vector<double> mem;
    std::vector<double> load;

    LoadState(const PlacementProblem& p, const ProblemView& v)
        : problem(&p), view(&v), count(v.units.size(), 0), mem(v.units.size(), 0.0),
          load(v.units.size(), 0.0) {}

    const DeviceClass& device(int pos) const {
        return *view->device[static_cast<std::size_t>(
            view->units[static_cast<std::size_t>(pos)])];
    }

    bool fits(int pos, const PlacementEntity& e) const {
        const DeviceClass& dc = device(pos);
        const std::size_t i = static_cast<std::size_t>(pos);
        if (count[i] + 1 > problem->layers_per_unit_cap) return false;
        if (mem[i] + e.memory_kb > dc.mem_cap_kb) return false;
        if (dc.compute_cap_mmul && load[i] + e.compute_mmul > *dc.compute_cap_mmul) {
            return false;
        }
        return true;
    }

    void add(int pos, const PlacementEntity& e) {
        const std::size_t i = static_cast<std::size_t>(pos);
        count[i] += 1;
        mem[i] += e.memory_kb;
        load[i] += e.compute_mmul;
    }

    void remove(int pos, const PlacementEntity& e) {
        const std::size_t i = static_cast<std::size_t>(pos);
        count[i] -= 1;
        mem[i] -= e.memory_kb;
        load[i] -= e.compute_mmul;
    }
};

// Objective coefficient tables over (entity, unit position). These are the
// linearized model's coefficients laid out for search: static_cost folds an
// entity's source, exit and processing terms; one Link per consecutive layer
// pair carries the transfer cost table. Used for bounds and greedy deltas
// only; final objectives always come from latency::evaluate.
struct CostTables {
    std::vector<std::vector<double>> static_cost; // [entity][unit pos]
    struct Link {
        int from_e = -1;
        int to_e = -1;
        std::vector<std::vector<double>> cost; // [from pos][to pos]
        double admissible_min = 0.0;           // valid lower bound while unresolved
    };
    std::vector<Link> links;
    std::vector<std::vector<int>> links_completing_at; // [entity] -> link indices
    std::vector<std::vector<int>> links_touching;      // [entity] -> incident links
    std::vector<double> link_min_suffix;               // [depth] -> remaining link bound

    static CostTables build(const PlacementProblem& p, const ProblemView& view) {
        CostTables ct;
        const int U = static_cast<int>(view.units.size());
        const int E = static_cast<int>(view.entities.size());
        const double rate = p.data_rate_bits_per_s;
        const PayloadUnit pu = p.conventions.payload_unit;

        ct.static_cost.assign(static_cast<std::size_t>(E),
                              std::vector<double>(static_cast<std::size_t>(U), 0.0));
        for (int e = 0; e < E; ++e) {
            for (int t = 0; t < U; ++t) {
                const int vertex = view.units[static_cast<std::size_t>(t)];
                const DeviceClass& dc = *view.device[static_cast<std::size_t>(vertex)];
                double acc = 0.0;
                for (const LayerRef& m : view.entities[static_cast<std::size_t>(e)].members) {
                    const CnnSpec& cnn = p.cnn(m.cnn);
                    if (m.layer == 0) {
                        acc += weighted_transfer(
                            cnn.gate.reach_prob.front(), cnn.input_kb, rate,
                            p.topology.hops(
                                view.source_of_cnn[static_cast<std::size_t>(m.cnn)], vertex),
                            pu);
                    }
                    acc += weighted_transfer(
                        cnn.gate.exit_prob[static_cast<std::size_t>(m.layer)],
                        cnn.final_out_kb, rate, p.topology.hops(vertex, view.sink), pu);
                    double w = 0.0;
                    if (processing_term_weight(p.conventions, cnn.gate.reach_prob, m.layer,
                                               cnn.depth(), w)) {
                        acc += processing_term(
                            w,
                            cnn.layers[static_cast<std::size_t>(m.layer)].compute_mmul,
                            dc.speed_mmul_per_s);
                    }
                }
                ct.static_cost[static_cast<std::size_t>(e)][static_cast<std::size_t>(t)] = acc;
            }
        }

        ct.links_completing_at.assign(static_cast<std::size_t>(E), {});
        ct.links_touching.assign(static_cast<std::size_t>(E), {});
        for (int u = 0; u < static_cast<int>(p.cnns.size()); ++u) {
            const CnnSpec& cnn = p.cnn(u);
            for (int j = 0; j + 1 < cnn.depth(); ++j) {
                const double prob = cnn.gate.reach_prob[static_cast<std::size_t>(j + 1)];
                const double payload = cnn.layers[static_cast<std::size_t>(j)].out_repr_kb;
                Link link;
                link.from_e = view.entity_of[static_cast<std::size_t>(u)]
                                            [static_cast<std::size_t>(j)];
                link.to_e = view.entity_of[static_cast<std::size_t>(u)]
                                          [static_cast<std::size_t>(j + 1)];
                link.cost.assign(static_cast<std::size_t>(U),
                                 std::vector<double>(static_cast<std::size_t>(U), 0.0));
                double min_any = std::numeric_limits<double>::infinity();
                double min_diag = std::numeric_limits<double>::infinity();
                double min_off = std::numeric_limits<double>::infinity();
                for (int ti = 0; ti < U; ++ti) {
                    for (int tk = 0; tk < U; ++tk) {
                        const double c = weighted_transfer(
                            prob, payload, rate,
                            p.topology.hops(view.units[static_cast<std::size_t>(ti)],
                                            view.units[static_cast<std::size_t>(tk)]),
                            pu);
                        link.cost[static_cast<std::size_t>(ti)][static_cast<std::size_t>(tk)] =
                            c;
                        min_any = std::min(min_any, c);
                        if (ti == tk) {
                            min_diag = std::min(min_diag, c);
                        } else {
                            min_off = std::min(min_off, c);
                        }
                    }
                }
                if (link.from_e == link.to_e) {
                    // Consecutive layers substituted to one entity: both ends
                    // sit on the same unit by construction.
                    link.admissible_min = min_diag;
                } else if (p.layers_per_unit_cap == 1 && U > 1) {
                    // Distinct entities cannot share a unit, so the diagonal
                    // is unreachable.
                    link.admissible_min = min_off;
                } else {
                    link.admissible_min = min_any;
                }
                const int resolves_at = std::max(link.from_e, link.to_e);
                const int li = static_cast<int>(ct.links.size());
                ct.links_completing_at[static_cast<std::size_t>(resolves_at)].push_back(li);
                ct.links_touching[static_cast<std::size_t>(link.from_e)].push_back(li);
                if (link.to_e != link.from_e) {
                    ct.links_touching[static_cast<std::size_t>(link.to_e)].push_back(li);
                }
                ct.links.push_back(std::move(link));
            }
        }

        ct.link_min_suffix.assign(static_cast<std::size_t>(E) + 1, 0.0);
        for (int e = E - 1; e >= 0; --e) {
            double acc = ct.link_min_suffix[static_cast<std::size_t>(e) + 1];
            for (int li : ct.links_completing_at[static_cast<std::size_t>(e)]) {
                acc += ct.links[static_cast<std::size_t>(li)].admissible_min;
            }
            ct.link_min_suffix[static_cast<std::size_t>(e)] = acc;
        }
        return ct;
    }

    // Link costs that become fully determined when `entity` (the highest
    // index involved) is placed; `pos_of` holds positions for entities
    // already assigned, -1 otherwise. Valid only when entities 0..entity-1
    // are all placed, as in the exact search's fixed-order descent.
    double resolved_at(int entity, int pos, const std::vector<int>& pos_of) const {
        double acc = 0.0;
        for (int li : links_completing_at[static_cast<std::size_t>(entity)]) {
            const Link& l = links[static_cast<std::size_t>(li)];
            const int pf = l.from_e == entity ? pos : pos_of[static_cast<std::size_t>(l.from_e)];
            const int pt = l.to_e == entity ? pos : pos_of[static_cast<std::size_t>(l.to_e)];
            acc += l.cost[static_cast<std::size_t>(pf)][static_cast<std::size_t>(pt)];
        }
        return acc;
    }

    // Same idea for arbitrary placement orders: a link is charged when its
    // second endpoint arrives, so links whose other end is still unplaced
    // contribute nothing yet.
    double links_now(int entity, int pos, const std::vector<int>& pos_of) const {
        double acc = 0.0;
        for (int li : links_touching[static_cast<std::size_t>(entity)]) {
            const Link& l = links[static_cast<std::size_t>(li)];
            const int other = l.from_e == entity ? l.to_e : l.from_e;
            const int other_pos = other == entity ? pos : pos_of[static_cast<std::size_t>(other)];
            if (other_pos < 0) continue;
            const int pf = l.from_e == entity ? pos : other_pos;
            const int pt = l.to_e == entity ? pos : other_pos;
            acc += l.cost[static_cast<std::size_t>(pf)][static_cast<std::size_t>(pt)];
        }
        return acc;
    }
};

Placement placement_of(const ProblemView& view, const PlacementProblem& p,
                       const std::vector<int>& pos_of) {
    Placement pl;
    pl.assign.resize(p.cnns.size());
    for (std::size_t u = 0; u < p.cnns.size(); ++u) {
        pl.assign[u].assign(static_cast<std::size_t>(p.cnn(static_cast<int>(u)).depth()), -1);
    }
    for (std::size_t e = 0; e < view.entities.size(); ++e) {
        const int vertex = view.units[static_cast<std::size_t>(pos_of[e])];
        for (const LayerRef& m : view.entities[e].members) {
            pl.assign[static_cast<std::size_t>(m.cnn)][static_cast<std::size_t>(m.layer)] =
                vertex;
        }
    }
    return pl;
}

void apply_entity(Placement& pl, const ProblemView& view, int e, int pos) {
    const int vertex = view.units[static_cast<std::size_t>(pos)];
    for (const LayerRef& m : view.entities[static_cast<std::size_t>(e)].members) {
        pl.assign[static_cast<std::size_t>(m.cnn)][static_cast<std::size_t>(m.layer)] = vertex;
    }
}

std::vector<int> shuffled_positions(int n, std::uint64_t seed) {
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::mt19937_64 gen(seed);
    deterministic_shuffle(order, gen);
    return order;
}

struct Incumbent {
    bool found = false;
    double total = 0.0;
    std::vector<int> pos_of;
    Placement placement;
    LatencyBreakdown breakdown;
};

Solution empty_solution(const PlacementProblem& p, const ProblemView& view) {
    Solution s;
    s.placement.assign.assign(p.cnns.size(), {});
    s.breakdown = evaluate(s.placement, p, view);
    s.objective_s = s.breakdown.total_s;
    s.proven_optimal = true;
    return s;
}

// Depth-first enumeration shared by the exact methods. `use_bound` switches
// between plain enumeration and bounded search.
class ExactSearch {
  public:
    ExactSearch(const PlacementProblem& p, const ProblemView& view, const SolverConfig& cfg,
                bool use_bound)
        : p_(p), view_(view), cfg_(cfg), use_bound_(use_bound),
          units_(view.units), order_(shuffled_positions(static_cast<int>(units_.size()),
                                                        cfg.seed)),
          loads_(p, view), pos_of_(view.entities.size(), -1), t0_(Clock::now()) {
        if (use_bound_) costs_ = CostTables::build(p, view);
    }

    void seed_incumbent(const Solution& warm) {
        best_.found = true;
        best_.total = warm.objective_s;
        best_.placement = warm.placement;
        best_.breakdown = warm.breakdown;
        best_.pos_of.clear();
    }

    // Returns true when the search ran to completion, false when the budget
    // stopped it.
    bool run() {
        completed_ = true;
        descend(0, 0.0);
        return completed_;
    }

    const Incumbent& best() const { return best_; }
    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t ties() const { return ties_; }

  private:
    void descend(int depth, double partial) {
        if (!completed_) return;
        if (cfg_.time_budget_s && (nodes_ & 1023u) == 0u &&
            seconds_since(t0_) > *cfg_.time_budget_s) {
            completed_ = false;
            return;
        }
        const int E = static_cast<int>(view_.entities.size());
        if (depth == E) {
            const Placement pl = placement_of(view_, p_, pos_of_);
            const LatencyBreakdown b = evaluate(pl, p_, view_);
            if (!best_.found || b.total_s < best_.total) {
                best_.found = true;
                best_.total = b.total_s;
                best_.pos_of = pos_of_;
                best_.placement = pl;
                best_.breakdown = b;
                ties_ = 0;
            } else if (b.total_s == best_.total) {
                ++ties_;
            }
            return;
        }
        const PlacementEntity& entity = view_.entities[static_cast<std::size_t>(depth)];
        for (int pos : order_) {
            if (!loads_.fits(pos, entity)) continue;
            ++nodes_;
            double next_partial = partial;
            if (use_bound_) {
                next_partial +=
                    costs_.static_cost[static_cast<std::size_t>(depth)]
                                      [static_cast<std::size_t>(pos)] +
                    costs_.resolved_at(depth, pos, pos_of_);
                if (best_.found) {
                    const double lb = next_partial + remaining_static_min(depth + 1) +
                                      costs_.link_min_suffix[static_cast<std::size_t>(depth) + 1];
                    if (lb > best_.total + prune_slack(best_.total)) continue;
                }
            }
            loads_.add(pos, entity);
            pos_of_[static_cast<std::size_t>(depth)] = pos;
            descend(depth + 1, next_partial);
            pos_of_[static_cast<std::size_t>(depth)] = -1;
            loads_.remove(pos, entity);
            if (!completed_) return;
        }
    }

    // Cheapest static cost of each still-unassigned entity over the units it
    // currently fits on. Capacities only shrink down a branch, so this never
    // overestimates within the subtree.
    double remaining_static_min(int from_depth) const {
        const int E = static_cast<int>(view_.entities.size());
        const int U = static_cast<int>(units_.size());
        double acc = 0.0;
        for (int e = from_depth; e < E; ++e) {
            const PlacementEntity& entity = view_.entities[static_cast<std::size_t>(e)];
            double best = std::numeric_limits<double>::infinity();
            for (int t = 0; t < U; ++t) {
                if (!loads_.fits(t, entity)) continue;
                best = std::min(best,
                                costs_.static_cost[static_cast<std::size_t>(e)]
                                                  [static_cast<std::size_t>(t)]);
            }
            acc += best; // infinity when nothing fits: the branch dies
        }
        return acc;
    }

    const PlacementProblem& p_;
    const ProblemView& view_;
    const SolverConfig& cfg_;
    bool use_bound_;
    const std::vector<int>& units_;
    std::vector<int> order_;
    LoadState loads_;
    std::vector<int> pos_of_;
    Clock::time_point t0_;
    CostTables costs_;
    Incumbent best_;
    std::uint64_t nodes_ = 0;
    std::uint64_t ties_ = 0;
    bool completed_ = true;
};

Solution finish_exact(ExactSearch& search, Clock::time_point t0) {
    const bool completed = search.run();
    if (!search.best().found) {
        if (!completed) throw BudgetExceeded("time budget exhausted before any placement");
        throw Infeasible("no placement satisfies the capacity constraints");
    }
    Solution s;
    s.placement = search.best().placement;
    s.breakdown = search.best().breakdown;
    s.objective_s = s.breakdown.total_s;
    s.proven_optimal = completed;
    s.stats.nodes_explored = search.nodes();
    s.stats.ties = search.ties();
    s.stats.elapsed_s = seconds_since(t0);
    return s;
}

} // namespace

Solution solve_exhaustive(const PlacementProblem& p, const SolverConfig& config) {
    const auto t0 = Clock::now();
    ensure_valid(p);
    const ProblemView view = ProblemView::build(p);
    if (view.entities.empty()) return empty_solution(p, view);
    ExactSearch search(p, view, config, false);
    return finish_exact(search, t0);
}

Solution solve_branch_and_bound(const PlacementProblem& p, const SolverConfig& config) {
    const auto t0 = Clock::now();
    ensure_valid(p);
    const ProblemView view = ProblemView::build(p);
    if (view.entities.empty()) return empty_solution(p, view);
    ExactSearch search(p, view, config, true);

    // Warm start: a cheap heuristic incumbent makes the bound bite early.
    // Its placement stays valid as a fallback if the budget runs out.
    SolverConfig warm_cfg;
    warm_cfg.method = SolveMethod::local_search;
    warm_cfg.seed = config.seed;
    warm_cfg.restarts = 2;
    try {
        search.seed_incumbent(solve_local_search(p, warm_cfg));
    } catch (const Infeasible&) {
        // Heuristic failure is not a proof; the exact search decides.
    }
    Solution s = finish_exact(search, t0);
    s.stats.elapsed_s = seconds_since(t0);
    return s;
}

Solution solve_local_search(const PlacementProblem& p, const SolverConfig& config) {
    const auto t0 = Clock::now();
    ensure_valid(p);
    const ProblemView view = ProblemView::build(p);
    if (view.entities.empty()) return empty_solution(p, view);

    const CostTables costs = CostTables::build(p, view);
    const int E = static_cast<int>(view.entities.size());
    const int U = static_cast<int>(view.units.size());

    Incumbent best;
    std::uint64_t restarts_run = 0;
    bool budget_hit = false;

    auto over_budget = [&]() {
        return config.time_budget_s && seconds_since(t0) > *config.time_budget_s;
    };

    for (int r = 0; r < std::max(1, config.restarts); ++r) {
        if (over_budget()) {
            budget_hit = true;
            break;
        }
        ++restarts_run;
        const std::vector<int> order = shuffled_positions(U, derive_seed(config.seed,
                                                                         static_cast<std::uint64_t>(r)));
        LoadState loads(p, view);
        std::vector<int> pos_of(static_cast<std::size_t>(E), -1);

        // Construction order matters: cheap-looking units can fill up before
        // the entities that fit nowhere else arrive. The first restart places
        // the hungriest entities first; later restarts draw random orders.
        std::vector<int> entity_order(static_cast<std::size_t>(E));
        for (int e = 0; e < E; ++e) entity_order[static_cast<std::size_t>(e)] = e;
        if (r == 0) {
            std::stable_sort(entity_order.begin(), entity_order.end(), [&](int a, int b) {
                const PlacementEntity& ea = view.entities[static_cast<std::size_t>(a)];
                const PlacementEntity& eb = view.entities[static_cast<std::size_t>(b)];
                if (ea.memory_kb != eb.memory_kb) return ea.memory_kb > eb.memory_kb;
                return ea.compute_mmul > eb.compute_mmul;
            });
        } else {
            entity_order = shuffled_positions(
                E, derive_seed(config.seed, static_cast<std::uint64_t>(r), 1));
        }

        // Greedy construction: each entity to the feasible unit with the
        // least incremental cost, first-in-order on ties.
        bool constructed = true;
        for (int e : entity_order) {
            const PlacementEntity& entity = view.entities[static_cast<std::size_t>(e)];
            int chosen = -1;
            double chosen_cost = std::numeric_limits<double>::infinity();
            for (int pos : order) {
                if (!loads.fits(pos, entity)) continue;
                const double c =
                    costs.static_cost[static_cast<std::size_t>(e)][static_cast<std::size_t>(pos)] +
                    costs.links_now(e, pos, pos_of);
                if (c < chosen_cost) {
                    chosen_cost = c;
                    chosen = pos;
                }
            }
            if (chosen < 0) {
                constructed = false;
                break;
            }
            loads.add(chosen, entity);
            pos_of[static_cast<std::size_t>(e)] = chosen;
        }
        if (!constructed) continue;

        // Best-improvement descent over reassignments and swaps.
        Placement pl = placement_of(view, p, pos_of);
        double cur = evaluate(pl, p, view).total_s;
        for (;;) {
            if (over_budget()) {
                budget_hit = true;
                break;
            }
            int move_e = -1, move_pos = -1, swap_a = -1, swap_b = -1;
            double best_total = cur;

            for (int e = 0; e < E; ++e) {
                const PlacementEntity& entity = view.entities[static_cast<std::size_t>(e)];
                const int from = pos_of[static_cast<std::size_t>(e)];
                loads.remove(from, entity);
                for (int t = 0; t < U; ++t) {
                    if (t == from || !loads.fits(t, entity)) continue;
                    apply_entity(pl, view, e, t);
                    const double cand = evaluate(pl, p, view).total_s;
                    if (cand < best_total) {
                        best_total = cand;
                        move_e = e;
                        move_pos = t;
                        swap_a = swap_b = -1;
                    }
                }
                apply_entity(pl, view, e, from);
                loads.add(from, entity);
            }
            for (int a = 0; a < E; ++a) {
                for (int b = a + 1; b < E; ++b) {
                    const int pa = pos_of[static_cast<std::size_t>(a)];
                    const int pb = pos_of[static_cast<std::size_t>(b)];
                    if (pa == pb) continue;
                    const PlacementEntity& ea = view.entities[static_cast<std::size_t>(a)];
                    const PlacementEntity& eb = view.entities[static_cast<std::size_t>(b)];
                    loads.remove(pa, ea);
                    loads.remove(pb, eb);
                    const bool ok = loads.fits(pb, ea) && loads.fits(pa, eb);
                    if (ok) {
                        apply_entity(pl, view, a, pb);
                        apply_entity(pl, view, b, pa);
                        const double cand = evaluate(pl, p, view).total_s;
                        if (cand < best_total) {
                            best_total = cand;
                            swap_a = a;
                            swap_b = b;
                            move_e = -1;
                        }
                        apply_entity(pl, view, a, pa);
                        apply_entity(pl, view, b, pb);
                    }
                    loads.add(pa, ea);
                    loads.add(pb, eb);
                }
            }

            if (move_e >= 0) {
                const PlacementEntity& entity =
                    view.entities[static_cast<std::size_t>(move_e)];
                loads.remove(pos_of[static_cast<std::size_t>(move_e)], entity);
                loads.add(move_pos, entity);
                pos_of[static_cast<std::size_t>(move_e)] = move_pos;
                apply_entity(pl, view, move_e, move_pos);
                cur = best_total;
            } else if (swap_a >= 0) {
                const int pa = pos_of[static_cast<std::size_t>(swap_a)];
                const int pb = pos_of[static_cast<std::size_t>(swap_b)];
                const PlacementEntity& ea = view.entities[static_cast<std::size_t>(swap_a)];
                const PlacementEntity& eb = view.entities[static_cast<std::size_t>(swap_b)];
                loads.remove(pa, ea);
                loads.remove(pb, eb);
                loads.add(pb, ea);
                loads.add(pa, eb);
                pos_of[static_cast<std::size_t>(swap_a)] = pb;
                pos_of[static_cast<std::size_t>(swap_b)] = pa;
                apply_entity(pl, view, swap_a, pb);
                apply_entity(pl, view, swap_b, pa);
                cur = best_total;
            } else {
                break;
            }
        }

        const LatencyBreakdown b = evaluate(pl, p, view);
        if (!best.found || b.total_s < best.total) {
            best.found = true;
            best.total = b.total_s;
            best.pos_of = pos_of;
            best.placement = pl;
            best.breakdown = b;
        }
        if (budget_hit) break;
    }

    if (!best.found) {
        if (budget_hit) throw BudgetExceeded("time budget exhausted before any placement");
        throw Infeasible("greedy construction found no placement "
                         "(heuristic result, not a proof of infeasibility)",
                         /*proved=*/false);
    }
    Solution s;
    s.placement = best.placement;
    s.breakdown = best.breakdown;
    s.objective_s = best.total;
    s.proven_optimal = false;
    s.stats.restarts_run = restarts_run;
    s.stats.elapsed_s = seconds_since(t0);
    return s;
}

Solution solve(const PlacementProblem& p, const SolverConfig& config) {
    switch (config.method) {
    case SolveMethod::exhaustive: return solve_exhaustive(p, config);
    case SolveMethod::branch_and_bound: return solve_branch_and_bound(p, config);
    case SolveMethod::local_search: return solve_local_search(p, config);
    }
    return solve_branch_and_bound(p, config);
}

} // namespace layerplace
