#ifndef OCM_PENALTY_HPP
#define OCM_PENALTY_HPP

#include <span>
#include <vector>

#include "ocm/crossings.hpp"
#include "ocm/instance.hpp"

namespace ocm {

struct PenaltyArc {
  int from;
  int to;
  long long weight;
};

// Weighted digraph over the free set: arc (u,v) with weight c_vu - c_uv
// whenever c_uv < c_vu. At most one direction per pair, weights positive.
struct PenaltyGraph {
  int n = 0;
  std::vector<PenaltyArc> arcs;
  std::vector<std::vector<int>> out;  // vertex -> arc ids

  int add_arc(int from, int to, long long weight);
};

PenaltyGraph build_penalty_graph(const CrossingMatrix &m);

// Strongly connected components in topological order of the condensation:
// every arc between distinct components goes from an earlier to a later
// entry. Vertices within a component are listed ascending.
std::vector<std::vector<int>> scc_decomposition(const PenaltyGraph &pg);

struct SubInstance {
  BipartiteInstance graph;
  std::vector<int> free_labels;  // sub free index -> original free label
};

// Recomposition recipe: solve each sub in isolation, concatenate in order,
// append isolated free vertices ascending.
struct SplitPlan {
  std::vector<SubInstance> subs;
  std::vector<int> isolated_labels;
};

// Induced subinstance on the given original free indices (any order; the sub
// keeps them ascending by label). The fixed side shrinks to the union of
// their neighborhoods, order preserved.
SubInstance induce_subinstance(const BipartiteInstance &g,
                               std::span<const int> free_indices);

SplitPlan split_by_scc(const BipartiteInstance &g, const CrossingMatrix &m);

// Matrix-free splitting for the large-graph path: maximal blocks of free
// vertices whose fixed-neighborhood intervals do not overlap, ordered by
// interval. Intervals sharing a boundary fixed vertex count as overlapping.
SplitPlan split_by_intervals(const BipartiteInstance &g);

// Concatenates per-sub orderings in plan order, appends isolated vertices,
// and recounts crossings on the original instance.
Solution merge_solutions(const BipartiteInstance &g, const SplitPlan &plan,
                         const std::vector<Solution> &sub_solutions);

}  // namespace ocm

#endif
