#ifndef OCM_FAS_HPP
#define OCM_FAS_HPP

#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ocm/penalty.hpp"

namespace ocm {

// Arc ids into RestrictedFasProblem::arcs, consecutive head-to-tail.
struct Cycle {
  std::vector<int> arc_ids;
};

// The restricted master problem: cover every generated cycle with arcs of
// minimum total weight.
struct RestrictedFasProblem {
  std::vector<PenaltyArc> arcs;
  std::vector<Cycle> cycles;
};

struct FasSolution {
  std::vector<int> arc_ids;
  long long weight = 0;
  bool optimal = false;
};

struct GreedyParams {
  double removal_fraction = 0.3;
  int iterations = 200;
};

// Backend consuming the restricted master problem. Must be deterministic for
// a given problem and rng state.
class RestrictedMasterBackend {
 public:
  virtual ~RestrictedMasterBackend() = default;
  virtual FasSolution solve(const RestrictedFasProblem &problem,
                            std::mt19937_64 &rng) = 0;
  virtual std::string name() const = 0;
};

class BranchAndBoundBackend final : public RestrictedMasterBackend {
 public:
  GreedyParams greedy;
  FasSolution solve(const RestrictedFasProblem &problem,
                    std::mt19937_64 &rng) override;
  std::string name() const override { return "branch-and-bound"; }
};

// Arc ids of pg whose head precedes its tail in the ordering, i.e. the FAS
// induced by the ordering.
std::vector<int> contradicting_arcs(const PenaltyGraph &pg,
                                    std::span<const int> ordering_indices);

long long arc_weight_sum(const PenaltyGraph &pg, std::span<const int> arc_ids);

// BFS from the arc's head back to its tail over arcs not flagged in
// `removed`; minimum-arc-count cycle containing the arc, if any.
std::optional<Cycle> shortest_cycle_through(const PenaltyGraph &pg, int arc_id,
                                            const std::vector<char> &removed);

// Cycle-packing bound with shared-edge weight deduction: per cycle, add the
// residual minimum and subtract it along the cycle. Cycles are processed in
// insertion order.
long long packing_lower_bound(const RestrictedFasProblem &problem);

// Randomized greedy cover plus destroy-and-rebuild restarts; always feasible.
FasSolution randomized_greedy_ub(const RestrictedFasProblem &problem,
                                 std::mt19937_64 &rng,
                                 const GreedyParams &params = {});

// Exact cover of the generated cycles: DFS on an explicit stack, branching
// over the arcs of the first uncovered cycle (descending weight), pruned by
// the packing bound. `initial` supplies the incumbent upper bound.
FasSolution branch_and_bound(const RestrictedFasProblem &problem,
                             const FasSolution &initial);

// Lazy cycle generation: grow the cycle set from arcs contradicting the
// heuristic ordering, reconverge the restricted master, stop when the
// restricted optimum matches the heuristic cost or the residual graph is
// acyclic. Returns an optimal feedback arc set of pg.
FasSolution lazy_cycle_fas(const PenaltyGraph &pg,
                           std::span<const int> heuristic_ordering_indices,
                           RestrictedMasterBackend &backend,
                           std::mt19937_64 &rng);

// Topological order of (V, E \ X); ties broken by ascending vertex.
std::vector<int> fas_to_ordering(const PenaltyGraph &pg,
                                 std::span<const int> removed_arc_ids);

// -------- abstract ILP model descriptions (no solver attached) --------

struct IlpTerm {
  int var;
  long long coeff;
};

struct IlpConstraint {
  std::vector<IlpTerm> terms;
  char sense;  // 'L' (<=), 'G' (>=), 'E' (=)
  long long rhs;
};

struct IlpModel {
  std::vector<std::string> variables;  // all binary
  std::vector<IlpTerm> objective;      // minimized
  std::vector<IlpConstraint> constraints;
};

// One binary variable per arc, one covering constraint per cycle.
IlpModel build_cycle_ilp_model(const RestrictedFasProblem &problem);

// Linear-ordering formulation over the penalty arcs of `m`: variables
// m_{u,v} for ordered pairs, symmetry equalities, and (unless omitted for
// row generation) one transitivity constraint per ordered triple.
IlpModel build_linear_ordering_model(const CrossingMatrix &m,
                                     bool with_transitivity = true);

// Variable index of m_{u,v} in the linear-ordering model.
int linear_ordering_var(int n, int u, int v);

// Row-generation oracle: ordered triples (u,v,w) with m_uv = m_vw = 1 but
// m_uw = 0 in the candidate assignment.
std::vector<std::array<int, 3>> violated_transitivity(
    int n, std::span<const char> assignment);

}  // namespace ocm

#endif
