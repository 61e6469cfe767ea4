#ifndef OCM_SOLVER_HPP
#define OCM_SOLVER_HPP

#include <memory>

#include "ocm/fas.hpp"
#include "ocm/heuristic.hpp"
#include "ocm/instance.hpp"
#include "ocm/reductions.hpp"

namespace ocm {

// The exact track returns nothing rather than a wrong answer.
class incomplete_error : public std::runtime_error {
 public:
  explicit incomplete_error(const std::string &what) : std::runtime_error(what) {}
};

struct SolveStats {
  int n_fixed = 0;
  int n_free = 0;
  long long edges = 0;
  int components = 0;             // subinstances after both splits
  int largest_component = 0;      // free vertices
  int free_after_reduction = 0;   // survivors summed over components
  long long crossings = -1;
  long long fas_weight = 0;       // effective weight over all components
  long long lower_bound = 0;      // summed trivial bounds of solved components
  long long upper_bound = -1;     // heuristic cost before the exact phase
  double time_total_s = 0;
};

struct ExactOptions {
  Budget budget;                  // overall deadline / quota
  HeuristicParams heuristic;
  Budget heuristic_budget;        // per-component slice; derived when unset
  CrossingsBudget crossings;
  bool enable_interval_split = true;
  bool enable_scc_split = true;
  bool enable_reductions = true;
  RestrictedMasterBackend *backend = nullptr;  // built-in branch & bound when null
  // Parameterized dispatch: force the built-in branch & bound whenever the
  // per-component heuristic FAS cost is below the threshold.
  bool force_bnb_below_ub = false;
  long long bnb_ub_threshold = 10;
};

// Split, reduce, then solve each component to proven optimality via lazy
// cycle generation on its penalty graph.
Solution exact_solve(const BipartiteInstance &g, const ExactOptions &options = {},
                     SolveStats *stats = nullptr);

// exact_solve with the parameterized track's backend dispatch; a provided
// numbering is ignored.
Solution parameterized_solve(const BipartiteInstance &g,
                             const ExactOptions &options = {},
                             SolveStats *stats = nullptr);

struct HeuristicOptions {
  Budget budget;
  HeuristicParams params;
  CrossingsBudget crossings;
  bool enable_reductions = true;
};

// Full heuristic pipeline: split, reduce where a matrix fits, local search
// per component (or the degraded large-graph mode), merge.
Solution heuristic_solve(const BipartiteInstance &g,
                         const HeuristicOptions &options,
                         SolveStats *stats = nullptr);

struct ReductionReport {
  int free_before = 0;
  int free_removed = 0;
  int components = 0;
  long long committed_pairs = 0;
};

ReductionReport reduce_report(const BipartiteInstance &g,
                              const CrossingsBudget &budget = {});

}  // namespace ocm

#endif
