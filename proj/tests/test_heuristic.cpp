#include <random>

#include "doctest.h"
#include "ocm/heuristic.hpp"
#include "test_support.hpp"

using namespace ocm;

namespace {

std::vector<int> indices_of(const BipartiteInstance &g,
                            const std::vector<int> &labels) {
  std::vector<int> out;
  for (int label : labels) out.push_back(g.free_index(label));
  return out;
}

}  // namespace

TEST_CASE("median_order sorts by lower medians with label ties") {
  BipartiteInstance g1 = support::e1();
  std::vector<int> order1 = median_order(g1);
  CHECK(order1 == std::vector<int>{6, 4, 5});
  CHECK(support::oracle_count(g1, order1) == 1);

  BipartiteInstance g2 = support::e2();
  std::vector<int> order2 = median_order(g2);
  CHECK(order2 == std::vector<int>{10, 11, 12});
  CHECK(support::oracle_count(g2, order2) == 12);

  BipartiteInstance chain = support::make_instance(3, 3, {{2, 4}, {3, 5}, {1, 6}});
  CHECK(median_order(chain) == std::vector<int>{6, 4, 5});
  CHECK(support::oracle_count(chain, median_order(chain)) == 0);
}

TEST_CASE("barycenter_order sorts by exact neighborhood means") {
  BipartiteInstance g1 = support::e1();
  std::vector<int> order1 = barycenter_order(g1);
  CHECK(order1 == std::vector<int>{6, 5, 4});
  CHECK(support::oracle_count(g1, order1) == 0);

  BipartiteInstance g2 = support::e2();
  std::vector<int> order2 = barycenter_order(g2);
  CHECK(order2 == std::vector<int>{12, 11, 10});
  CHECK(support::oracle_count(g2, order2) == 11);

  BipartiteInstance twins =
      support::make_instance(2, 2, {{1, 3}, {2, 3}, {1, 4}, {2, 4}});
  CHECK(barycenter_order(twins) == std::vector<int>{3, 4});
}

TEST_CASE("median_order stays within 3x of the optimum") {
  std::mt19937_64 rng(59);
  for (int round = 0; round < 80; ++round) {
    BipartiteInstance g = support::random_instance(rng, 6, 6, 0.5);
    bool has_isolated = false;
    for (const auto &nbrs : g.adj_free) has_isolated |= nbrs.empty();
    if (has_isolated) continue;
    long long opt = support::brute_force_optimum(g);
    CHECK(support::oracle_count(g, median_order(g)) <= 3 * opt);
  }
}

TEST_CASE("sift_vertex moves one vertex to its best position") {
  BipartiteInstance g = support::e1();
  CrossingMatrix m = build_crossing_matrix(g);

  OrderState state = make_state(m, indices_of(g, {4, 5, 6}));
  CHECK(state.crossings == 5);
  sift_vertex(state, m, g.free_index(6));
  CHECK(state.order == indices_of(g, {6, 4, 5}));
  CHECK(state.crossings == 1);

  sift_vertex(state, m, g.free_index(5));
  CHECK(state.order == indices_of(g, {6, 5, 4}));
  CHECK(state.crossings == 0);

  // Already optimal: leftmost-best is the current slot.
  sift_vertex(state, m, g.free_index(5));
  CHECK(state.order == indices_of(g, {6, 5, 4}));
}

TEST_CASE("sifting never increases the crossing count") {
  std::mt19937_64 rng(61);
  for (int round = 0; round < 60; ++round) {
    BipartiteInstance g = support::random_instance(rng, 7, 7, 0.5);
    if (g.n_free == 0) continue;
    CrossingMatrix m = build_crossing_matrix(g);
    std::vector<int> perm(g.n_free);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    OrderState state = make_state(m, perm);
    long long prev = state.crossings;
    for (int v = 0; v < g.n_free; ++v) {
      sift_vertex(state, m, v);
      CHECK(state.crossings <= prev);
      prev = state.crossings;
      CHECK(state.crossings ==
            crossings_from_matrix(m, state.order));
    }
  }
}

TEST_CASE("sift_all converges to strong local minima on the small examples") {
  std::mt19937_64 rng(67);
  BipartiteInstance g1 = support::e1();
  CrossingMatrix m1 = build_crossing_matrix(g1);
  OrderState s1 = make_state(m1, indices_of(g1, {4, 5, 6}));
  sift_all(s1, m1, rng);
  CHECK(s1.crossings == 0);

  BipartiteInstance g2 = support::e2();
  CrossingMatrix m2 = build_crossing_matrix(g2);
  OrderState s2 = make_state(m2, indices_of(g2, {10, 11, 12}));
  sift_all(s2, m2, rng);
  CHECK(s2.crossings == 10);

  // Already optimal: no improvement reported.
  OrderState s3 = make_state(m1, indices_of(g1, {6, 5, 4}));
  CHECK(!sift_all(s3, m1, rng));
  CHECK(s3.crossings == 0);
}

TEST_CASE("force swapping keeps the incumbent unless it improves") {
  std::mt19937_64 rng(71);
  BipartiteInstance g = support::e1();
  CrossingMatrix m = build_crossing_matrix(g);
  OrderState best = make_state(m, indices_of(g, {6, 5, 4}));
  HeuristicParams params;
  force_swap_phase(best, m, params, rng, nullptr, Budget::iterations(100));
  CHECK(best.crossings == 0);
  CHECK(best.order == indices_of(g, {6, 5, 4}));
}

TEST_CASE("constrained sifting respects the locked pair") {
  std::mt19937_64 rng(73);
  for (int round = 0; round < 40; ++round) {
    BipartiteInstance g = support::random_instance(rng, 6, 6, 0.5);
    if (g.n_free < 2) continue;
    CrossingMatrix m = build_crossing_matrix(g);
    std::vector<int> perm(g.n_free);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    OrderState state = make_state(m, perm);
    SiftConstraints constraints;
    constraints.locked = {perm[0], perm[1]};
    for (int v = 0; v < g.n_free; ++v) {
      sift_vertex(state, m, v, constraints);
      CHECK(state.pos[constraints.locked.first] <
            state.pos[constraints.locked.second]);
    }
  }
}

TEST_CASE("local_search finds the small optima") {
  BipartiteInstance g1 = support::e1();
  CrossingMatrix m1 = build_crossing_matrix(g1);
  HeuristicParams params;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    params.seed = seed;
    Solution sol = local_search(g1, m1, params, nullptr, Budget::iterations(50));
    CHECK(sol.crossings == 0);
  }

  BipartiteInstance g2 = support::e2();
  CrossingMatrix m2 = build_crossing_matrix(g2);
  params.seed = 5;
  Solution sol2 = local_search(g2, m2, params, nullptr, Budget::iterations(200));
  CHECK(sol2.crossings == 10);
  CHECK(sol2.ordering == std::vector<int>{11, 12, 10});
}

TEST_CASE("local_search handles the zero-edge instance") {
  BipartiteInstance g = support::make_instance(2, 3, {});
  CrossingMatrix m = build_crossing_matrix(g);
  HeuristicParams params;
  Solution sol = local_search(g, m, params, nullptr, Budget::iterations(5));
  CHECK(sol.crossings == 0);
  CHECK(sol.ordering.size() == 3);
}

TEST_CASE("local_search requires a bounded budget") {
  BipartiteInstance g = support::e1();
  CrossingMatrix m = build_crossing_matrix(g);
  HeuristicParams params;
  CHECK_THROWS_AS(local_search(g, m, params, nullptr, Budget{}),
                  std::invalid_argument);
}

TEST_CASE("local_search respects committed pairs") {
  std::mt19937_64 rng(79);
  for (int round = 0; round < 30; ++round) {
    BipartiteInstance g = support::random_instance(rng, 6, 6, 0.5);
    if (g.n_free < 3) continue;
    PartialOrder committed(g.n_free);
    committed.commit(0, 1);
    committed.commit(1, 2);
    committed.close();
    CrossingMatrix m = build_crossing_matrix(g);
    HeuristicParams params;
    params.seed = rng();
    Solution sol = local_search(g, m, params, &committed, Budget::iterations(30));
    auto pos = [&](int index) {
      int label = g.free_label(index);
      return std::find(sol.ordering.begin(), sol.ordering.end(), label) -
             sol.ordering.begin();
    };
    CHECK(pos(0) < pos(1));
    CHECK(pos(1) < pos(2));
  }
}

TEST_CASE("local_search is deterministic under an iteration quota") {
  BipartiteInstance g = support::e2();
  CrossingMatrix m = build_crossing_matrix(g);
  HeuristicParams params;
  params.seed = 99;
  Solution a = local_search(g, m, params, nullptr, Budget::iterations(77));
  Solution b = local_search(g, m, params, nullptr, Budget::iterations(77));
  CHECK(a.ordering == b.ordering);
  CHECK(a.crossings == b.crossings);
}

TEST_CASE("large_graph_heuristic never loses to its seeds") {
  HeuristicParams params;

  BipartiteInstance g1 = support::e1();
  Solution sol = large_graph_heuristic(g1, params, Budget::iterations(20));
  CHECK(sol.crossings == 0);

  // Zero budget degenerates to the better seed.
  Solution degenerate = large_graph_heuristic(g1, params, Budget::iterations(0));
  long long med = support::oracle_count(g1, median_order(g1));
  long long bar = support::oracle_count(g1, barycenter_order(g1));
  CHECK(degenerate.crossings == std::min(med, bar));

  std::mt19937_64 rng(83);
  for (int round = 0; round < 20; ++round) {
    BipartiteInstance g = support::random_instance(rng, 8, 8, 0.4);
    Solution s = large_graph_heuristic(g, params, Budget::iterations(10));
    long long seed_best =
        std::min(support::oracle_count(g, median_order(g)),
                 support::oracle_count(g, barycenter_order(g)));
    CHECK(*s.crossings <= seed_best);
    CHECK(*s.crossings == support::oracle_count(g, s.ordering));
  }
}
