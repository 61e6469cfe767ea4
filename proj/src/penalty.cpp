#include "ocm/penalty.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace ocm {

int PenaltyGraph::add_arc(int from, int to, long long weight) {
  int id = static_cast<int>(arcs.size());
  arcs.push_back({from, to, weight});
  out[from].push_back(id);
  return id;
}

PenaltyGraph build_penalty_graph(const CrossingMatrix &m) {
  PenaltyGraph pg;
  pg.n = m.n;
  pg.out.resize(m.n);
  for (int u = 0; u < m.n; ++u)
    for (int v = u + 1; v < m.n; ++v) {
      long long cuv = m.cross(u, v), cvu = m.cross(v, u);
      if (cuv < cvu)
        pg.add_arc(u, v, cvu - cuv);
      else if (cvu < cuv)
        pg.add_arc(v, u, cuv - cvu);
    }
  return pg;
}

std::vector<std::vector<int>> scc_decomposition(const PenaltyGraph &pg) {
  // Iterative Tarjan; components complete in reverse topological order.
  const int n = pg.n;
  std::vector<int> index(n, -1), lowlink(n, 0), stack_pos(n, -1);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int next_index = 0;

  struct Frame {
    int v;
    std::size_t arc_i;
  };
  std::vector<Frame> frames;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack_pos[root] = static_cast<int>(stack.size());
    stack.push_back(root);

    while (!frames.empty()) {
      Frame &f = frames.back();
      int v = f.v;
      if (f.arc_i < pg.out[v].size()) {
        int w = pg.arcs[pg.out[v][f.arc_i++]].to;
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack_pos[w] = static_cast<int>(stack.size());
          stack.push_back(w);
          frames.push_back({w, 0});
        } else if (stack_pos[w] != -1) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      } else {
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
        if (lowlink[v] == index[v]) {
          std::vector<int> comp(stack.begin() + stack_pos[v], stack.end());
          for (int w : comp) stack_pos[w] = -1;
          stack.resize(stack.size() - comp.size());
          std::sort(comp.begin(), comp.end());
          comps.push_back(std::move(comp));
        }
      }
    }
  }
  std::reverse(comps.begin(), comps.end());
  return comps;
}

SubInstance induce_subinstance(const BipartiteInstance &g,
                               std::span<const int> free_indices) {
  std::vector<int> free_sorted(free_indices.begin(), free_indices.end());
  std::sort(free_sorted.begin(), free_sorted.end());

  std::vector<int> fixed_labels;
  for (int v : free_sorted)
    fixed_labels.insert(fixed_labels.end(), g.adj_free[v].begin(),
                        g.adj_free[v].end());
  std::sort(fixed_labels.begin(), fixed_labels.end());
  fixed_labels.erase(std::unique(fixed_labels.begin(), fixed_labels.end()),
                     fixed_labels.end());

  SubInstance sub;
  sub.graph.n_fixed = static_cast<int>(fixed_labels.size());
  sub.graph.n_free = static_cast<int>(free_sorted.size());
  sub.graph.adj_fixed.resize(sub.graph.n_fixed);
  sub.graph.adj_free.resize(sub.graph.n_free);
  sub.free_labels.reserve(free_sorted.size());
  for (int v : free_sorted) sub.free_labels.push_back(g.free_label(v));

  for (int i = 0; i < sub.graph.n_free; ++i) {
    for (int a : g.adj_free[free_sorted[i]]) {
      int fi = static_cast<int>(std::lower_bound(fixed_labels.begin(),
                                                 fixed_labels.end(), a) -
                                fixed_labels.begin());
      sub.graph.adj_free[i].push_back(fi + 1);
      sub.graph.adj_fixed[fi].push_back(sub.graph.free_label(i));
    }
  }
  for (auto &nbrs : sub.graph.adj_fixed) std::sort(nbrs.begin(), nbrs.end());
  return sub;
}

SplitPlan split_by_scc(const BipartiteInstance &g, const CrossingMatrix &m) {
  assert(m.n == g.n_free);
  PenaltyGraph pg = build_penalty_graph(m);
  SplitPlan plan;
  for (const auto &comp : scc_decomposition(pg)) {
    if (comp.size() == 1 && g.adj_free[comp[0]].empty()) {
      plan.isolated_labels.push_back(g.free_label(comp[0]));
      continue;
    }
    plan.subs.push_back(induce_subinstance(g, comp));
  }
  std::sort(plan.isolated_labels.begin(), plan.isolated_labels.end());
  return plan;
}

SplitPlan split_by_intervals(const BipartiteInstance &g) {
  SplitPlan plan;
  struct Interval {
    int lo, hi, vertex;
  };
  std::vector<Interval> intervals;
  for (int v = 0; v < g.n_free; ++v) {
    if (g.adj_free[v].empty()) {
      plan.isolated_labels.push_back(g.free_label(v));
      continue;
    }
    intervals.push_back({g.adj_free[v].front(), g.adj_free[v].back(), v});
  }
  std::sort(intervals.begin(), intervals.end(), [](const auto &a, const auto &b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  });

  std::vector<int> block;
  int block_hi = -1;
  auto flush = [&]() {
    if (!block.empty()) plan.subs.push_back(induce_subinstance(g, block));
    block.clear();
  };
  for (const Interval &iv : intervals) {
    // Endpoints inclusive: a shared boundary fixed vertex merges the blocks.
    if (!block.empty() && iv.lo > block_hi) flush();
    block.push_back(iv.vertex);
    block_hi = std::max(block_hi, iv.hi);
  }
  flush();
  std::sort(plan.isolated_labels.begin(), plan.isolated_labels.end());
  return plan;
}

Solution merge_solutions(const BipartiteInstance &g, const SplitPlan &plan,
                         const std::vector<Solution> &sub_solutions) {
  if (sub_solutions.size() != plan.subs.size())
    throw std::invalid_argument("one sub-solution required per subinstance");
  Solution merged;
  merged.ordering.reserve(g.n_free);
  for (std::size_t i = 0; i < plan.subs.size(); ++i) {
    const SubInstance &sub = plan.subs[i];
    const Solution &sol = sub_solutions[i];
    if (static_cast<int>(sol.ordering.size()) != sub.graph.n_free)
      throw std::invalid_argument("sub-solution size mismatch");
    for (int label : sol.ordering)
      merged.ordering.push_back(sub.free_labels[sub.graph.free_index(label)]);
  }
  merged.ordering.insert(merged.ordering.end(), plan.isolated_labels.begin(),
                         plan.isolated_labels.end());
  merged.crossings = count_crossings_fast(g, merged.ordering);
  return merged;
}

}  // namespace ocm
