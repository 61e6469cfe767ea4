#include "ocm/heuristic.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <queue>

namespace ocm {

namespace {

std::vector<int> sort_by_key(const BipartiteInstance &g,
                             const std::vector<std::pair<long long, long long>> &key) {
  // key is a rational sum/den; compare by cross-multiplication.
  std::vector<int> order(g.n_free);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    long long lhs = key[a].first * key[b].second;
    long long rhs = key[b].first * key[a].second;
    if (lhs != rhs) return lhs < rhs;
    return a < b;
  });
  std::vector<int> labels;
  labels.reserve(order.size());
  for (int v : order) labels.push_back(g.free_label(v));
  return labels;
}

}  // namespace

std::vector<int> median_order(const BipartiteInstance &g) {
  std::vector<std::pair<long long, long long>> key(g.n_free, {0, 1});
  for (int v = 0; v < g.n_free; ++v) {
    const auto &nbrs = g.adj_free[v];
    if (!nbrs.empty()) key[v] = {nbrs[(nbrs.size() - 1) / 2], 1};
  }
  return sort_by_key(g, key);
}

std::vector<int> barycenter_order(const BipartiteInstance &g) {
  std::vector<std::pair<long long, long long>> key(g.n_free, {0, 1});
  for (int v = 0; v < g.n_free; ++v) {
    const auto &nbrs = g.adj_free[v];
    if (!nbrs.empty()) {
      long long sum = std::accumulate(nbrs.begin(), nbrs.end(), 0LL);
      key[v] = {sum, static_cast<long long>(nbrs.size())};
    }
  }
  return sort_by_key(g, key);
}

OrderState make_state(const CrossingMatrix &m, std::vector<int> ordering_indices) {
  OrderState state;
  state.order = std::move(ordering_indices);
  state.pos.assign(m.n, -1);
  for (int i = 0; i < static_cast<int>(state.order.size()); ++i)
    state.pos[state.order[i]] = i;
  state.crossings = crossings_from_matrix(m, state.order);
  return state;
}

namespace {

bool locked_together(const SiftConstraints &c, int a, int b) {
  return (c.locked.first == a && c.locked.second == b) ||
         (c.locked.first == b && c.locked.second == a);
}

}  // namespace

void sift_vertex(OrderState &state, const CrossingMatrix &m, int v,
                 const SiftConstraints &constraints) {
  const int n = static_cast<int>(state.order.size());
  const int i = state.pos[v];
  long long best_delta = 0;
  int best_pos = i;

  long long cum = 0;
  for (int j = i - 1; j >= 0; --j) {
    int u = state.order[j];
    if (locked_together(constraints, v, u)) break;
    if (constraints.committed && constraints.committed->before(u, v)) break;
    cum += m.diff(v, u);  // pair flips from (u,v) to (v,u)
    if (cum <= best_delta) {
      best_delta = cum;
      best_pos = j;
    }
  }
  cum = 0;
  for (int j = i + 1; j < n; ++j) {
    int u = state.order[j];
    if (locked_together(constraints, v, u)) break;
    if (constraints.committed && constraints.committed->before(v, u)) break;
    cum += m.diff(u, v);
    if (cum < best_delta) {  // strict: leftmost among equals
      best_delta = cum;
      best_pos = j;
    }
  }

  if (best_pos == i) return;
  if (best_pos < i)
    std::rotate(state.order.begin() + best_pos, state.order.begin() + i,
                state.order.begin() + i + 1);
  else
    std::rotate(state.order.begin() + i, state.order.begin() + i + 1,
                state.order.begin() + best_pos + 1);
  for (int j = std::min(best_pos, i); j <= std::max(best_pos, i); ++j)
    state.pos[state.order[j]] = j;
  state.crossings += best_delta;
}

bool sift_all(OrderState &state, const CrossingMatrix &m, std::mt19937_64 &rng,
              const SiftConstraints &constraints) {
  std::vector<int> seq(state.order.size());
  std::iota(seq.begin(), seq.end(), 0);
  bool improved = false;
  bool pass_improved = true;
  while (pass_improved) {
    pass_improved = false;
    std::shuffle(seq.begin(), seq.end(), rng);
    for (int v : seq) {
      long long before = state.crossings;
      sift_vertex(state, m, v, constraints);
      if (state.crossings < before) pass_improved = true;
    }
    improved |= pass_improved;
  }
  return improved;
}

namespace {

// Cost change of swapping the vertices at positions i < j.
long long swap_delta(const OrderState &state, const CrossingMatrix &m, int i,
                     int j) {
  int v = state.order[i], u = state.order[j];
  long long delta = m.diff(u, v);
  for (int k = i + 1; k < j; ++k) {
    int w = state.order[k];
    delta += m.diff(u, w) + m.diff(w, v);
  }
  return delta;
}

bool swap_respects_committed(const OrderState &state, const PartialOrder *p,
                             int i, int j) {
  if (!p) return true;
  int v = state.order[i], u = state.order[j];
  if (p->before(v, u)) return false;
  for (int k = i + 1; k < j; ++k) {
    int w = state.order[k];
    if (p->before(v, w) || p->before(w, u)) return false;
  }
  return true;
}

std::vector<int> labels_of(const BipartiteInstance &g,
                           std::span<const int> indices) {
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (int v : indices) labels.push_back(g.free_label(v));
  return labels;
}

std::vector<int> indices_of(const BipartiteInstance &g,
                            std::span<const int> labels) {
  std::vector<int> indices;
  indices.reserve(labels.size());
  for (int label : labels) indices.push_back(g.free_index(label));
  return indices;
}

struct ExtensionSampler {
  std::vector<std::vector<int>> succ;
  std::vector<int> base_indeg;
  bool trivial = true;

  ExtensionSampler(int n, const PartialOrder *p) : base_indeg(n, 0) {
    succ.resize(n);
    if (!p) return;
    for (int v = 0; v < n; ++v) {
      succ[v] = p->successors(v);
      for (int s : succ[v]) ++base_indeg[s];
      if (!succ[v].empty()) trivial = false;
    }
  }

  // Uniform choice among available vertices at every step.
  std::vector<int> random_extension(std::mt19937_64 &rng) const {
    const int n = static_cast<int>(base_indeg.size());
    std::vector<int> out(n);
    std::iota(out.begin(), out.end(), 0);
    if (trivial) {
      std::shuffle(out.begin(), out.end(), rng);
      return out;
    }
    std::vector<int> indeg = base_indeg;
    std::vector<int> avail;
    for (int v = 0; v < n; ++v)
      if (indeg[v] == 0) avail.push_back(v);
    out.clear();
    while (!avail.empty()) {
      std::size_t k = rng() % avail.size();
      int v = avail[k];
      avail[k] = avail.back();
      avail.pop_back();
      out.push_back(v);
      for (int s : succ[v])
        if (--indeg[s] == 0) avail.push_back(s);
    }
    assert(static_cast<int>(out.size()) == n);
    return out;
  }

  // Greedy extension following the given preference ranks.
  std::vector<int> extension_by_rank(std::span<const int> rank) const {
    const int n = static_cast<int>(base_indeg.size());
    std::vector<int> out;
    out.reserve(n);
    std::vector<int> indeg = base_indeg;
    using Entry = std::pair<int, int>;  // (rank, vertex)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (int v = 0; v < n; ++v)
      if (indeg[v] == 0) heap.push({rank[v], v});
    while (!heap.empty()) {
      int v = heap.top().second;
      heap.pop();
      out.push_back(v);
      for (int s : succ[v])
        if (--indeg[s] == 0) heap.push({rank[s], s});
    }
    assert(static_cast<int>(out.size()) == n);
    return out;
  }
};

}  // namespace

void force_swap_phase(OrderState &best, const CrossingMatrix &m,
                      const HeuristicParams &params, std::mt19937_64 &rng,
                      const PartialOrder *committed, const Budget &budget) {
  const int n = static_cast<int>(best.order.size());
  std::vector<int> seq(n);
  std::iota(seq.begin(), seq.end(), 0);
  for (int d = 1; d <= params.swap_max_distance; d += params.swap_step) {
    std::shuffle(seq.begin(), seq.end(), rng);
    for (int v : seq) {
      if (budget.stop && budget.stop->load(std::memory_order_relaxed)) return;
      if (budget.deadline && std::chrono::steady_clock::now() >= *budget.deadline)
        return;
      int i = best.pos[v];
      int j = i + d;
      if (j >= n) continue;
      if (!swap_respects_committed(best, committed, i, j)) continue;

      OrderState cand = best;
      cand.crossings += swap_delta(cand, m, i, j);
      std::swap(cand.order[i], cand.order[j]);
      cand.pos[cand.order[i]] = i;
      cand.pos[cand.order[j]] = j;
      // The swapped pair keeps its new relative order during sifting.
      SiftConstraints constraints;
      constraints.committed = committed;
      constraints.locked = {cand.order[i], cand.order[j]};
      sift_all(cand, m, rng, constraints);
      if (cand.crossings < best.crossings) best = std::move(cand);
    }
  }
}

Solution local_search(const BipartiteInstance &g, const CrossingMatrix &m,
                      const HeuristicParams &params,
                      const PartialOrder *committed, const Budget &budget) {
  if (!budget.bounded() && g.n_free > 0)
    throw std::invalid_argument("local_search requires a positive budget");
  std::mt19937_64 rng(params.seed);
  ExtensionSampler sampler(g.n_free, committed);
  SiftConstraints constraints;
  constraints.committed = committed;

  std::vector<int> seed_indices = indices_of(g, median_order(g));
  if (!sampler.trivial) {
    std::vector<int> rank(g.n_free);
    for (int i = 0; i < g.n_free; ++i) rank[seed_indices[i]] = i;
    seed_indices = sampler.extension_by_rank(rank);
  }
  OrderState best = make_state(m, std::move(seed_indices));
  sift_all(best, m, rng, constraints);

  long long restarts = 0;
  int stall = 0;
  while (g.n_free > 1 && !budget.expired(restarts)) {
    ++restarts;
    OrderState state = make_state(m, sampler.random_extension(rng));
    sift_all(state, m, rng, constraints);
    if (state.crossings < best.crossings) {
      best = std::move(state);
      stall = 0;
    } else if (++stall >= params.restart_stall_limit) {
      force_swap_phase(best, m, params, rng, committed, budget);
      stall = 0;
    }
  }

  Solution sol;
  sol.ordering = labels_of(g, best.order);
  sol.crossings = best.crossings;
  return sol;
}

namespace {

// Swap improving adjacent pairs until a full pass is clean or the slice of
// the budget runs out. Pair deltas come straight from the adjacency lists.
void adjacent_swap_climb(const BipartiteInstance &g, std::vector<int> &order,
                         const Budget &slice) {
  bool improved = true;
  long long passes = 0;
  while (improved && !slice.expired(passes)) {
    improved = false;
    ++passes;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      if ((i & 1023) == 0 && slice.expired(passes)) return;
      int u = order[i], v = order[i + 1];
      if (crossing_number_pair(g, v, u) < crossing_number_pair(g, u, v)) {
        std::swap(order[i], order[i + 1]);
        improved = true;
      }
    }
  }
}

}  // namespace

Solution large_graph_heuristic(const BipartiteInstance &g,
                               const HeuristicParams &params,
                               const Budget &budget) {
  std::mt19937_64 rng(params.seed);
  CrossingCounter counter;

  std::vector<int> med = indices_of(g, median_order(g));
  std::vector<int> bar = indices_of(g, barycenter_order(g));

  const bool zero_budget = budget.expired(0);
  if (!zero_budget) {
    Budget slice;
    slice.stop = budget.stop;
    if (budget.deadline) {
      auto now = std::chrono::steady_clock::now();
      auto span = *budget.deadline - now;
      slice.deadline = now + std::chrono::duration_cast<
                                 std::chrono::steady_clock::duration>(
                                 span * params.large_initial_phase_fraction);
    }
    if (budget.max_iterations)
      slice.max_iterations = std::max<long long>(
          1, static_cast<long long>(static_cast<double>(*budget.max_iterations) *
                                    params.large_initial_phase_fraction));
    adjacent_swap_climb(g, med, slice);
    if (budget.deadline) {
      auto now = std::chrono::steady_clock::now();
      auto span = *budget.deadline - now;
      slice.deadline = now + std::chrono::duration_cast<
                                 std::chrono::steady_clock::duration>(
                                 span * params.large_initial_phase_fraction);
    }
    adjacent_swap_climb(g, bar, slice);
  }

  long long med_cost = counter.count(g, labels_of(g, med));
  long long bar_cost = counter.count(g, labels_of(g, bar));
  std::vector<int> order = med_cost <= bar_cost ? std::move(med) : std::move(bar);
  long long crossings = std::min(med_cost, bar_cost);

  if (!zero_budget) {
    std::vector<int> pos(g.n_free);
    for (int i = 0; i < g.n_free; ++i) pos[order[i]] = i;
    std::vector<int> seq(g.n_free);
    std::iota(seq.begin(), seq.end(), 0);

    long long passes = 0;
    while (!budget.expired(passes)) {
      ++passes;
      bool improved = false;
      std::shuffle(seq.begin(), seq.end(), rng);
      for (int v : seq) {
        if (budget.expired(passes)) break;
        const int n = g.n_free;
        const int i = pos[v];
        long long best_delta = 0;
        int best_pos = i;
        long long cum = 0;
        for (int j = i - 1;
             j >= 0 && i - j <= params.large_sift_distance_cap; --j) {
          int u = order[j];
          cum += crossing_number_pair(g, v, u) - crossing_number_pair(g, u, v);
          if (cum > params.large_sift_crossing_cap) break;
          if (cum <= best_delta) {
            best_delta = cum;
            best_pos = j;
          }
        }
        cum = 0;
        for (int j = i + 1;
             j < n && j - i <= params.large_sift_distance_cap; ++j) {
          int u = order[j];
          cum += crossing_number_pair(g, u, v) - crossing_number_pair(g, v, u);
          if (cum > params.large_sift_crossing_cap) break;
          if (cum < best_delta) {
            best_delta = cum;
            best_pos = j;
          }
        }
        if (best_pos == i) continue;
        if (best_pos < i)
          std::rotate(order.begin() + best_pos, order.begin() + i,
                      order.begin() + i + 1);
        else
          std::rotate(order.begin() + i, order.begin() + i + 1,
                      order.begin() + best_pos + 1);
        for (int j = std::min(best_pos, i); j <= std::max(best_pos, i); ++j)
          pos[order[j]] = j;
        crossings += best_delta;
        improved = true;
      }
      if (!improved) break;
    }
  }

  Solution sol;
  sol.ordering = labels_of(g, order);
  sol.crossings = crossings;
  return sol;
}

}  // namespace ocm
