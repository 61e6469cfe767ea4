#include "ocm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <unordered_set>

namespace ocm {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> identity_indices(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

SubInstance identity_sub(const BipartiteInstance &g) {
  SubInstance sub;
  sub.graph = g;
  sub.free_labels.reserve(g.n_free);
  for (int v = 0; v < g.n_free; ++v) sub.free_labels.push_back(g.free_label(v));
  return sub;
}

std::vector<int> to_indices(const BipartiteInstance &g,
                            std::span<const int> labels) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (int label : labels) out.push_back(g.free_index(label));
  return out;
}

std::vector<int> to_labels(const BipartiteInstance &g,
                           std::span<const int> indices) {
  std::vector<int> out;
  out.reserve(indices.size());
  for (int v : indices) out.push_back(g.free_label(v));
  return out;
}

ReductionOutcome passthrough_outcome(const BipartiteInstance &g) {
  ReductionOutcome outcome;
  outcome.reduced = g;
  outcome.free_labels.reserve(g.n_free);
  for (int v = 0; v < g.n_free; ++v)
    outcome.free_labels.push_back(g.free_label(v));
  outcome.order = PartialOrder(g.n_free);
  return outcome;
}

// Encodes the committed pairs into the penalty graph: contrary arcs are
// forced into the (conceptual) feedback set and dropped, committed
// directions get a weight boost no optimal cover ever pays.
struct ForcedPenaltyGraph {
  PenaltyGraph graph;
  long long forced_removed_weight = 0;
};

ForcedPenaltyGraph force_committed(const PenaltyGraph &pg,
                                   const PartialOrder &committed) {
  long long total_weight = 0;
  for (const PenaltyArc &arc : pg.arcs) total_weight += arc.weight;
  const long long force_weight = total_weight + 1;

  ForcedPenaltyGraph out;
  out.graph.n = pg.n;
  out.graph.out.resize(pg.n);
  std::unordered_set<long long> covered_pairs;
  auto pair_key = [n = pg.n](int a, int b) {
    return static_cast<long long>(a) * n + b;
  };
  for (const PenaltyArc &arc : pg.arcs) {
    covered_pairs.insert(pair_key(arc.from, arc.to));
    covered_pairs.insert(pair_key(arc.to, arc.from));
    if (committed.before(arc.to, arc.from)) {
      out.forced_removed_weight += arc.weight;
      continue;
    }
    long long weight = arc.weight;
    if (committed.before(arc.from, arc.to)) weight += force_weight;
    out.graph.add_arc(arc.from, arc.to, weight);
  }
  for (auto [a, b] : committed.pairs())
    if (!covered_pairs.count(pair_key(a, b)))
      out.graph.add_arc(a, b, force_weight);
  return out;
}

struct ComponentResult {
  std::vector<int> ordering_labels;
  long long fas_weight = 0;
  long long lower_bound = 0;
  long long upper_bound = 0;
  int free_after_reduction = 0;
};

Budget heuristic_slice(const ExactOptions &options) {
  Budget slice = options.heuristic_budget;
  if (!slice.stop) slice.stop = options.budget.stop;
  if (slice.bounded()) return slice;
  slice.max_iterations = 1000;
  if (options.budget.deadline) {
    auto now = Clock::now();
    auto remaining = *options.budget.deadline - now;
    auto cap = std::chrono::duration_cast<Clock::duration>(
        std::chrono::seconds(60));
    slice.deadline = now + std::min(cap, remaining / 5);
  }
  return slice;
}

ComponentResult solve_component_exact(const BipartiteInstance &g,
                                      const ExactOptions &options,
                                      std::mt19937_64 &rng) {
  ComponentResult result;
  if (g.n_free == 0) return result;
  if (g.n_free == 1) {
    result.ordering_labels = {g.free_label(0)};
    return result;
  }
  if (options.budget.expired(0))
    throw incomplete_error("budget exhausted before component was solved");

  CrossingMatrix matrix = build_crossing_matrix(g, options.crossings);
  result.lower_bound = trivial_lower_bound(matrix);

  // Quick feasible solution for the reduction bounds.
  OrderState seed = make_state(matrix, to_indices(g, median_order(g)));
  sift_all(seed, matrix, rng);
  Solution quick;
  quick.ordering = to_labels(g, seed.order);
  quick.crossings = seed.crossings;

  ReductionOutcome outcome = options.enable_reductions
                                 ? reduce_pipeline(g, matrix, quick)
                                 : passthrough_outcome(g);
  result.free_after_reduction = outcome.reduced.n_free;

  if (outcome.reduced.n_free == 0) {
    result.ordering_labels = reinsert_removed(outcome, {});
    result.upper_bound = *quick.crossings;
    return result;
  }

  const BipartiteInstance &reduced = outcome.reduced;
  CrossingMatrix reduced_matrix = build_crossing_matrix(reduced, options.crossings);

  Solution heur = local_search(reduced, reduced_matrix, options.heuristic,
                               &outcome.order, heuristic_slice(options));
  result.upper_bound = *heur.crossings;

  PenaltyGraph pg = build_penalty_graph(reduced_matrix);
  ForcedPenaltyGraph forced = force_committed(pg, outcome.order);
  std::vector<int> heur_indices = to_indices(reduced, heur.ordering);

  BranchAndBoundBackend builtin;
  RestrictedMasterBackend *backend =
      options.backend ? options.backend : &builtin;
  if (options.force_bnb_below_ub) {
    long long contradiction_cost = arc_weight_sum(
        forced.graph, contradicting_arcs(forced.graph, heur_indices));
    if (contradiction_cost < options.bnb_ub_threshold) backend = &builtin;
  }

  FasSolution fas = lazy_cycle_fas(forced.graph, heur_indices, *backend, rng);
  std::vector<int> reduced_order = fas_to_ordering(forced.graph, fas.arc_ids);
  result.fas_weight = fas.weight + forced.forced_removed_weight;

  long long reduced_lb = trivial_lower_bound(reduced_matrix);
  if (crossings_from_matrix(reduced_matrix, reduced_order) !=
      reduced_lb + result.fas_weight)
    throw std::logic_error(
        "exact solver consistency check failed: crossings != lower bound + "
        "FAS weight");

  result.ordering_labels =
      reinsert_removed(outcome, to_labels(reduced, reduced_order));
  return result;
}

Solution run_exact(const BipartiteInstance &g, const ExactOptions &options,
                   SolveStats *stats) {
  auto start = Clock::now();
  std::mt19937_64 rng(options.heuristic.seed);

  SplitPlan outer = options.enable_interval_split
                        ? split_by_intervals(g)
                        : SplitPlan{{identity_sub(g)}, {}};
  if (!options.enable_interval_split && g.n_free == 0) outer.subs.clear();

  SolveStats local;
  local.n_fixed = g.n_fixed;
  local.n_free = g.n_free;
  local.edges = static_cast<long long>(g.num_edges());

  std::vector<Solution> outer_solutions;
  for (const SubInstance &block : outer.subs) {
    if (options.budget.expired(0))
      throw incomplete_error("budget exhausted");

    SplitPlan inner;
    if (options.enable_scc_split &&
        block.graph.n_free <= options.crossings.large_threshold) {
      CrossingMatrix matrix = build_crossing_matrix(block.graph, options.crossings);
      inner = split_by_scc(block.graph, matrix);
    } else {
      inner = SplitPlan{{identity_sub(block.graph)}, {}};
    }

    std::vector<Solution> inner_solutions;
    for (const SubInstance &component : inner.subs) {
      ComponentResult r = solve_component_exact(component.graph, options, rng);
      local.components += 1;
      local.largest_component =
          std::max(local.largest_component, component.graph.n_free);
      local.free_after_reduction += r.free_after_reduction;
      local.fas_weight += r.fas_weight;
      local.lower_bound += r.lower_bound;
      local.upper_bound = std::max(local.upper_bound, 0LL) + r.upper_bound;
      Solution sol;
      sol.ordering = std::move(r.ordering_labels);
      inner_solutions.push_back(std::move(sol));
    }
    outer_solutions.push_back(
        merge_solutions(block.graph, inner, inner_solutions));
  }

  Solution final = merge_solutions(g, outer, outer_solutions);
  local.crossings = *final.crossings;
  local.time_total_s =
      std::chrono::duration<double>(Clock::now() - start).count();
  if (stats) {
    local.n_fixed = g.n_fixed;
    *stats = local;
  }
  return final;
}

}  // namespace

Solution exact_solve(const BipartiteInstance &g, const ExactOptions &options,
                     SolveStats *stats) {
  try {
    return run_exact(g, options, stats);
  } catch (const instance_too_large &e) {
    throw incomplete_error(e.what());
  }
}

Solution parameterized_solve(const BipartiteInstance &g,
                             const ExactOptions &options, SolveStats *stats) {
  ExactOptions dispatched = options;
  dispatched.force_bnb_below_ub = true;
  try {
    return run_exact(g, dispatched, stats);
  } catch (const instance_too_large &e) {
    throw incomplete_error(e.what());
  }
}

Solution heuristic_solve(const BipartiteInstance &g,
                         const HeuristicOptions &options_in, SolveStats *stats) {
  auto start = Clock::now();
  std::mt19937_64 rng(options_in.params.seed);
  HeuristicOptions options = options_in;
  if (!options.budget.bounded()) options.budget.max_iterations = 10000;

  SolveStats local;
  local.n_fixed = g.n_fixed;
  local.n_free = g.n_free;
  local.edges = static_cast<long long>(g.num_edges());

  SplitPlan outer = split_by_intervals(g);
  std::vector<Solution> outer_solutions;
  for (const SubInstance &block : outer.subs) {
    if (block.graph.n_free > options.crossings.large_threshold) {
      local.components += 1;
      local.largest_component =
          std::max(local.largest_component, block.graph.n_free);
      local.free_after_reduction += block.graph.n_free;
      outer_solutions.push_back(
          large_graph_heuristic(block.graph, options.params, options.budget));
      continue;
    }

    CrossingMatrix matrix = build_crossing_matrix(block.graph, options.crossings);
    SplitPlan inner = split_by_scc(block.graph, matrix);
    std::vector<Solution> inner_solutions;
    for (const SubInstance &component : inner.subs) {
      local.components += 1;
      local.largest_component =
          std::max(local.largest_component, component.graph.n_free);
      if (component.graph.n_free <= 1) {
        Solution sol;
        for (int v = 0; v < component.graph.n_free; ++v)
          sol.ordering.push_back(component.graph.free_label(v));
        inner_solutions.push_back(std::move(sol));
        continue;
      }

      CrossingMatrix cm = build_crossing_matrix(component.graph, options.crossings);
      OrderState seed_state =
          make_state(cm, to_indices(component.graph, median_order(component.graph)));
      sift_all(seed_state, cm, rng);
      Solution quick;
      quick.ordering = to_labels(component.graph, seed_state.order);
      quick.crossings = seed_state.crossings;

      ReductionOutcome outcome = options.enable_reductions
                                     ? reduce_pipeline(component.graph, cm, quick)
                                     : passthrough_outcome(component.graph);
      local.free_after_reduction += outcome.reduced.n_free;

      Solution sol;
      if (outcome.reduced.n_free == 0) {
        sol.ordering = reinsert_removed(outcome, {});
      } else {
        CrossingMatrix rm = build_crossing_matrix(outcome.reduced, options.crossings);
        HeuristicParams params = options.params;
        params.seed = rng();  // per-component stream, still deterministic
        Solution best = local_search(outcome.reduced, rm, params,
                                     &outcome.order, options.budget);
        sol.ordering = reinsert_removed(outcome, best.ordering);
      }
      inner_solutions.push_back(std::move(sol));
    }
    outer_solutions.push_back(
        merge_solutions(block.graph, inner, inner_solutions));
  }

  Solution final = merge_solutions(g, outer, outer_solutions);
  local.crossings = *final.crossings;
  local.time_total_s =
      std::chrono::duration<double>(Clock::now() - start).count();
  if (stats) *stats = local;
  return final;
}

ReductionReport reduce_report(const BipartiteInstance &g,
                              const CrossingsBudget &budget) {
  ReductionReport report;
  report.free_before = g.n_free;
  std::mt19937_64 rng(1);

  SplitPlan outer = split_by_intervals(g);
  report.free_removed += static_cast<int>(outer.isolated_labels.size());
  for (const SubInstance &block : outer.subs) {
    if (block.graph.n_free > budget.large_threshold) {
      report.components += 1;
      continue;
    }
    CrossingMatrix matrix = build_crossing_matrix(block.graph, budget);
    SplitPlan inner = split_by_scc(block.graph, matrix);
    report.free_removed += static_cast<int>(inner.isolated_labels.size());
    for (const SubInstance &component : inner.subs) {
      report.components += 1;
      CrossingMatrix cm = build_crossing_matrix(component.graph, budget);
      OrderState seed =
          make_state(cm, identity_indices(component.graph.n_free));
      sift_all(seed, cm, rng);
      Solution quick;
      quick.ordering = to_labels(component.graph, seed.order);
      quick.crossings = seed.crossings;
      ReductionOutcome outcome = reduce_pipeline(component.graph, cm, quick);
      report.free_removed +=
          component.graph.n_free - outcome.reduced.n_free;
      report.committed_pairs +=
          static_cast<long long>(outcome.committed_pairs.size());
    }
  }
  return report;
}

}  // namespace ocm
