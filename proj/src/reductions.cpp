#include "ocm/reductions.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

namespace ocm {

PartialOrder::PartialOrder(int n)
    : n_(n), words_((n + 63) / 64),
      rows_(static_cast<std::size_t>(n) * ((n + 63) / 64), 0) {}

void PartialOrder::commit(int a, int b) {
  if (a == b) throw order_inconsistency("reflexive commitment");
  if (before(b, a))
    throw order_inconsistency("commitment would create a 2-cycle");
  rows_[static_cast<std::size_t>(a) * words_ + (b >> 6)] |= 1ULL << (b & 63);
}

std::vector<int> PartialOrder::successors(int a) const {
  std::vector<int> out;
  const std::uint64_t *row = rows_.data() + static_cast<std::size_t>(a) * words_;
  for (int w = 0; w < words_; ++w) {
    std::uint64_t bits = row[w];
    while (bits) {
      out.push_back(w * 64 + std::countr_zero(bits));
      bits &= bits - 1;
    }
  }
  return out;
}

void PartialOrder::close() {
  // Kahn topological order over the current direct relation.
  std::vector<int> indeg(n_, 0);
  for (int a = 0; a < n_; ++a)
    for (int b : successors(a)) ++indeg[b];
  std::vector<int> order;
  order.reserve(n_);
  for (int v = 0; v < n_; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (int b : successors(order[head]))
      if (--indeg[b] == 0) order.push_back(b);
  if (static_cast<int>(order.size()) != n_)
    throw order_inconsistency("cycle in partial order");

  // Reverse traversal, OR-ing successor rows into each vertex's row.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    std::uint64_t *row = rows_.data() + static_cast<std::size_t>(v) * words_;
    for (int s : successors(v)) {
      const std::uint64_t *srow = rows_.data() + static_cast<std::size_t>(s) * words_;
      for (int w = 0; w < words_; ++w) row[w] |= srow[w];
    }
  }
  for (int v = 0; v < n_; ++v)
    if (before(v, v)) throw order_inconsistency("cycle in partial order");
}

std::vector<std::pair<int, int>> PartialOrder::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < n_; ++a)
    for (int b : successors(a)) out.emplace_back(a, b);
  return out;
}

namespace {

// a and b contribute identically to every ordering: equal crossing rows and
// columns and a free pair between them. Swapping two such vertices is always
// cost-neutral, so chaining them in a fixed direction is safe.
bool interchangeable(const CrossingMatrix &m, int a, int b) {
  if (m.cross(a, b) != 0 || m.cross(b, a) != 0) return false;
  for (int x = 0; x < m.n; ++x) {
    if (x == a || x == b) continue;
    if (m.cross(a, x) != m.cross(b, x)) return false;
    if (m.cross(x, a) != m.cross(x, b)) return false;
  }
  return true;
}

}  // namespace

bool apply_rr1(const CrossingMatrix &m, PartialOrder &p) {
  // A pair that is zero in exactly one direction forces that direction.
  // Mutually-zero pairs are only committed (ascending) when the two vertices
  // are fully interchangeable; committing an arbitrary direction for, say, a
  // degree-0 vertex against two incomparable vertices would wrongly force
  // those two into an order no optimal solution may have.
  bool changed = false;
  for (int a = 0; a < m.n; ++a)
    for (int b = a + 1; b < m.n; ++b) {
      long long cab = m.cross(a, b), cba = m.cross(b, a);
      int first = -1, second = -1;
      if (cab == 0 && cba > 0) {
        first = a;
        second = b;
      } else if (cba == 0 && cab > 0) {
        first = b;
        second = a;
      } else if (cab == 0 && cba == 0 && interchangeable(m, a, b)) {
        first = a;
        second = b;
      }
      if (first >= 0 && !p.before(first, second)) {
        p.commit(first, second);
        changed = true;
      }
    }
  return changed;
}

bool apply_rr2(const BipartiteInstance &g, PartialOrder &p) {
  std::vector<int> by_nbrs(g.n_free);
  std::iota(by_nbrs.begin(), by_nbrs.end(), 0);
  std::sort(by_nbrs.begin(), by_nbrs.end(), [&](int a, int b) {
    return g.adj_free[a] != g.adj_free[b] ? g.adj_free[a] < g.adj_free[b]
                                          : a < b;
  });
  bool changed = false;
  for (std::size_t i = 1; i < by_nbrs.size(); ++i) {
    int a = by_nbrs[i - 1], b = by_nbrs[i];
    if (g.adj_free[a] != g.adj_free[b]) continue;
    if (a > b) std::swap(a, b);
    if (!p.comparable(a, b)) {
      p.commit(a, b);
      changed = true;
    }
  }
  return changed;
}

bool apply_rrlarge_modified(const CrossingMatrix &m, PartialOrder &p,
                            long long lower_bound, long long upper_bound) {
  if (lower_bound > upper_bound)
    throw std::invalid_argument("lower bound exceeds upper bound");
  bool changed = false;
  for (int a = 0; a < m.n; ++a)
    for (int b = 0; b < m.n; ++b) {
      if (a == b || p.comparable(a, b)) continue;
      if (m.cross(b, a) + lower_bound - m.cross(a, b) > upper_bound) {
        p.commit(a, b);
        changed = true;
      }
    }
  return changed;
}

ReductionOutcome apply_rrlo1(const BipartiteInstance &g, const PartialOrder &p) {
  const int n = g.n_free;
  std::vector<int> comparable_count(n, 0), predecessor_count(n, 0);
  for (int a = 0; a < n; ++a)
    for (int b : p.successors(a)) {
      ++comparable_count[a];
      ++comparable_count[b];
      ++predecessor_count[b];
    }

  ReductionOutcome outcome;
  std::vector<int> survivors;
  for (int v = 0; v < n; ++v) {
    if (comparable_count[v] == n - 1)
      outcome.fixed_positions.emplace_back(g.free_label(v),
                                           predecessor_count[v] + 1);
    else
      survivors.push_back(v);
  }
  std::sort(outcome.fixed_positions.begin(), outcome.fixed_positions.end(),
            [](const auto &a, const auto &b) { return a.second < b.second; });

  SubInstance sub = induce_subinstance(g, survivors);
  outcome.reduced = std::move(sub.graph);
  outcome.free_labels = std::move(sub.free_labels);

  outcome.order = PartialOrder(static_cast<int>(survivors.size()));
  for (std::size_t i = 0; i < survivors.size(); ++i)
    for (std::size_t j = 0; j < survivors.size(); ++j)
      if (i != j && p.before(survivors[i], survivors[j]))
        outcome.order.commit(static_cast<int>(i), static_cast<int>(j));
  for (auto [a, b] : outcome.order.pairs())
    outcome.committed_pairs.emplace_back(outcome.reduced.free_label(a),
                                         outcome.reduced.free_label(b));
  return outcome;
}

ReductionOutcome reduce_pipeline(const BipartiteInstance &g,
                                 const CrossingMatrix &m,
                                 const Solution &upper_bound_solution) {
  long long lb = trivial_lower_bound(m);
  long long ub = upper_bound_solution.crossings
                     ? *upper_bound_solution.crossings
                     : count_crossings_fast(g, upper_bound_solution.ordering);

  PartialOrder p(g.n_free);
  apply_rr1(m, p);
  apply_rr2(g, p);
  while (apply_rrlarge_modified(m, p, lb, ub)) {
  }
  p.close();
  return apply_rrlo1(g, p);
}

std::vector<int> reinsert_removed(const ReductionOutcome &outcome,
                                  std::span<const int> reduced_ordering_labels) {
  if (static_cast<int>(reduced_ordering_labels.size()) != outcome.reduced.n_free)
    throw std::invalid_argument("reduced ordering size mismatch");
  std::vector<int> full;
  full.reserve(reduced_ordering_labels.size() + outcome.fixed_positions.size());
  for (int label : reduced_ordering_labels)
    full.push_back(outcome.free_labels[outcome.reduced.free_index(label)]);
  // fixed_positions is ascending by position; each insert lands at its final
  // index because all earlier positions are already occupied.
  for (auto [label, pos] : outcome.fixed_positions)
    full.insert(full.begin() + (pos - 1), label);
  return full;
}

}  // namespace ocm
