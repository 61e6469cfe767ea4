#include "ocm/crossings.hpp"

#include <algorithm>

namespace ocm {

namespace {

// Validates that `ordering_labels` is a permutation of the free labels and
// fills `pos` (label-indexed, offset by n_fixed+1) with 0-based positions.
void positions_of(const BipartiteInstance &g, std::span<const int> ordering,
                  std::vector<int> &pos) {
  if (static_cast<int>(ordering.size()) != g.n_free)
    throw std::invalid_argument("ordering is not a permutation of the free set");
  pos.assign(g.n_free, -1);
  for (int i = 0; i < g.n_free; ++i) {
    int label = ordering[i];
    if (label <= g.n_fixed || label > g.n_fixed + g.n_free)
      throw std::invalid_argument("ordering contains a non-free label");
    int idx = g.free_index(label);
    if (pos[idx] != -1)
      throw std::invalid_argument("ordering repeats a free label");
    pos[idx] = i;
  }
}

}  // namespace

long long crossing_number_pair(const BipartiteInstance &g, int u_index,
                               int v_index) {
  if (u_index == v_index)
    throw std::invalid_argument("crossing_number_pair requires u != v");
  const auto &nu = g.adj_free[u_index];
  const auto &nv = g.adj_free[v_index];
  long long total = 0;
  if (nu.size() <= nv.size()) {
    for (int b : nu)
      total += std::lower_bound(nv.begin(), nv.end(), b) - nv.begin();
  } else {
    for (int a : nv)
      total += nu.end() - std::upper_bound(nu.begin(), nu.end(), a);
  }
  return total;
}

CrossingMatrix build_crossing_matrix(const BipartiteInstance &g,
                                     const CrossingsBudget &budget) {
  if (g.n_free > budget.large_threshold)
    throw instance_too_large(g.n_free, budget.large_threshold);
  CrossingMatrix m;
  m.n = g.n_free;
  const std::size_t n = static_cast<std::size_t>(m.n);
  m.c.assign(n * n, 0);
  m.delta.assign(n * n, 0);
  for (int u = 0; u < m.n; ++u)
    for (int v = u + 1; v < m.n; ++v) {
      long long cuv = crossing_number_pair(g, u, v);
      long long cvu = crossing_number_pair(g, v, u);
      m.c[u * n + v] = cuv;
      m.c[v * n + u] = cvu;
      m.delta[u * n + v] = cuv - cvu;
      m.delta[v * n + u] = cvu - cuv;
    }
  return m;
}

long long count_crossings_naive(const BipartiteInstance &g,
                                std::span<const int> ordering_labels) {
  std::vector<int> pos;
  positions_of(g, ordering_labels, pos);

  struct Edge {
    int a;
    int b_pos;
  };
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (int b = 0; b < g.n_free; ++b)
    for (int a : g.adj_free[b]) edges.push_back({a, pos[b]});

  long long total = 0;
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Edge &e = edges[i], &f = edges[j];
      if ((e.a < f.a && e.b_pos > f.b_pos) || (e.a > f.a && e.b_pos < f.b_pos))
        ++total;
    }
  return total;
}

void CrossingCounter::reserve(int n) {
  int base = 1;
  while (base < n) base <<= 1;
  if (base != base_ || tree_.empty()) {
    base_ = base;
    tree_.assign(2 * static_cast<std::size_t>(base), 0);
  }
}

long long CrossingCounter::count(const BipartiteInstance &g,
                                 std::span<const int> ordering_labels) {
  positions_of(g, ordering_labels, pos_);
  if (g.n_free == 0) return 0;
  reserve(g.n_free);

  std::vector<int> touched;
  std::vector<int> nbr_pos;
  long long total = 0;
  for (int a = 0; a < g.n_fixed; ++a) {
    nbr_pos.clear();
    for (int label : g.adj_fixed[a]) nbr_pos.push_back(pos_[g.free_index(label)]);
    std::sort(nbr_pos.begin(), nbr_pos.end());
    // Ascending position order: siblings inserted earlier sit at smaller
    // positions and never land in the strictly-greater range.
    for (int p : nbr_pos) {
      // range sum over (p, n)
      long long sum = 0;
      for (int lo = p + 1 + base_, hi = base_ + base_; lo < hi;
           lo >>= 1, hi >>= 1) {
        if (lo & 1) sum += tree_[lo++];
        if (hi & 1) sum += tree_[--hi];
      }
      total += sum;
      for (int i = p + base_; i > 0; i >>= 1) ++tree_[i];
      touched.push_back(p);
    }
  }
  for (int p : touched)
    for (int i = p + base_; i > 0; i >>= 1) --tree_[i];
  return total;
}

long long count_crossings_fast(const BipartiteInstance &g,
                               std::span<const int> ordering_labels) {
  CrossingCounter counter;
  return counter.count(g, ordering_labels);
}

long long trivial_lower_bound(const CrossingMatrix &m) {
  long long bound = 0;
  for (int u = 0; u < m.n; ++u)
    for (int v = u + 1; v < m.n; ++v)
      bound += std::min(m.cross(u, v), m.cross(v, u));
  return bound;
}

long long crossings_from_matrix(const CrossingMatrix &m,
                                std::span<const int> ordering_indices) {
  long long total = 0;
  for (std::size_t i = 0; i < ordering_indices.size(); ++i)
    for (std::size_t j = i + 1; j < ordering_indices.size(); ++j)
      total += m.cross(ordering_indices[i], ordering_indices[j]);
  return total;
}

}  // namespace ocm
