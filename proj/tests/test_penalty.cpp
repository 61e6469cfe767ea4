#include <random>

#include "doctest.h"
#include "ocm/penalty.hpp"
#include "test_support.hpp"

using namespace ocm;

namespace {

// (from label, to label, weight) triples for readable comparisons.
std::vector<std::tuple<int, int, long long>> arc_triples(
    const BipartiteInstance &g, const PenaltyGraph &pg) {
  std::vector<std::tuple<int, int, long long>> out;
  for (const PenaltyArc &arc : pg.arcs)
    out.emplace_back(g.free_label(arc.from), g.free_label(arc.to), arc.weight);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> label_block(const BipartiteInstance &g, const SubInstance &sub) {
  return sub.free_labels;
}

// Translate an ordering given in original labels into the sub's own labels.
std::vector<int> to_sub_labels(const SubInstance &sub,
                               const std::vector<int> &original_labels) {
  std::vector<int> out;
  for (int label : original_labels) {
    auto it = std::find(sub.free_labels.begin(), sub.free_labels.end(), label);
    REQUIRE(it != sub.free_labels.end());
    out.push_back(sub.graph.free_label(
        static_cast<int>(it - sub.free_labels.begin())));
  }
  return out;
}

}  // namespace

TEST_CASE("build_penalty_graph reproduces the hand-checked graphs") {
  BipartiteInstance g2 = support::e2();
  PenaltyGraph pg2 = build_penalty_graph(build_crossing_matrix(g2));
  CHECK(arc_triples(g2, pg2) ==
        std::vector<std::tuple<int, int, long long>>{
            {10, 11, 1}, {11, 12, 1}, {12, 10, 3}});

  BipartiteInstance g1 = support::e1();
  PenaltyGraph pg1 = build_penalty_graph(build_crossing_matrix(g1));
  CHECK(arc_triples(g1, pg1) ==
        std::vector<std::tuple<int, int, long long>>{
            {5, 4, 1}, {6, 4, 3}, {6, 5, 1}});
}

TEST_CASE("twins produce no penalty arc") {
  BipartiteInstance g =
      support::make_instance(2, 2, {{1, 3}, {2, 3}, {1, 4}, {2, 4}});
  PenaltyGraph pg = build_penalty_graph(build_crossing_matrix(g));
  CHECK(pg.arcs.empty());
}

TEST_CASE("penalty graph invariants hold on random instances") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 50; ++round) {
    BipartiteInstance g = support::random_instance(rng, 6, 6, 0.5);
    CrossingMatrix m = build_crossing_matrix(g);
    PenaltyGraph pg = build_penalty_graph(m);
    std::vector<std::vector<char>> seen(g.n_free, std::vector<char>(g.n_free, 0));
    for (const PenaltyArc &arc : pg.arcs) {
      CHECK(arc.weight > 0);
      CHECK(arc.weight == m.cross(arc.to, arc.from) - m.cross(arc.from, arc.to));
      CHECK(!seen[arc.from][arc.to]);
      CHECK(!seen[arc.to][arc.from]);
      seen[arc.from][arc.to] = 1;
    }
    for (int u = 0; u < g.n_free; ++u)
      for (int v = 0; v < g.n_free; ++v)
        if (m.cross(u, v) < m.cross(v, u)) CHECK(seen[u][v]);
  }
}

TEST_CASE("scc_decomposition returns condensation topological order") {
  BipartiteInstance g2 = support::e2();
  PenaltyGraph pg2 = build_penalty_graph(build_crossing_matrix(g2));
  auto comps2 = scc_decomposition(pg2);
  REQUIRE(comps2.size() == 1);
  CHECK(comps2[0] == std::vector<int>{0, 1, 2});

  BipartiteInstance g1 = support::e1();
  PenaltyGraph pg1 = build_penalty_graph(build_crossing_matrix(g1));
  auto comps1 = scc_decomposition(pg1);
  REQUIRE(comps1.size() == 3);
  // Arcs 6->5->4, so the free indices come out as 2, 1, 0.
  CHECK(comps1[0] == std::vector<int>{2});
  CHECK(comps1[1] == std::vector<int>{1});
  CHECK(comps1[2] == std::vector<int>{0});

  PenaltyGraph chain = support::make_pg(3, {{0, 1, 1}, {1, 2, 1}});
  auto comps = scc_decomposition(chain);
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::vector<int>{0});
  CHECK(comps[1] == std::vector<int>{1});
  CHECK(comps[2] == std::vector<int>{2});
}

TEST_CASE("scc_decomposition output has no back arcs on random digraphs") {
  std::mt19937_64 rng(29);
  for (int round = 0; round < 100; ++round) {
    PenaltyGraph pg = support::random_pg(rng, 8, 0.4, 5);
    auto comps = scc_decomposition(pg);
    std::vector<int> comp_of(pg.n, -1);
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (int v : comps[i]) comp_of[v] = static_cast<int>(i);
    for (int v = 0; v < pg.n; ++v) CHECK(comp_of[v] >= 0);
    for (const PenaltyArc &arc : pg.arcs)
      CHECK(comp_of[arc.from] <= comp_of[arc.to]);
  }
}

TEST_CASE("split_by_scc solves the acyclic case by recombination") {
  BipartiteInstance g1 = support::e1();
  SplitPlan plan = split_by_scc(g1, build_crossing_matrix(g1));
  REQUIRE(plan.subs.size() == 3);
  std::vector<Solution> subs;
  for (const SubInstance &sub : plan.subs) {
    Solution s;
    s.ordering = {sub.graph.free_label(0)};  // singletons
    subs.push_back(s);
  }
  Solution merged = merge_solutions(g1, plan, subs);
  CHECK(merged.ordering == std::vector<int>{6, 5, 4});
  CHECK(merged.crossings == 0);
}

TEST_CASE("split_by_scc keeps a single strongly connected block together") {
  BipartiteInstance g2 = support::e2();
  SplitPlan plan = split_by_scc(g2, build_crossing_matrix(g2));
  REQUIRE(plan.subs.size() == 1);
  CHECK(label_block(g2, plan.subs[0]) == std::vector<int>{10, 11, 12});
  CHECK(plan.isolated_labels.empty());
}

TEST_CASE("isolated free vertices land in the isolated list") {
  BipartiteInstance g = support::make_instance(2, 3, {{1, 3}, {2, 4}});
  SplitPlan plan = split_by_scc(g, build_crossing_matrix(g));
  CHECK(plan.isolated_labels == std::vector<int>{5});
}

TEST_CASE("split_by_intervals separates non-overlapping neighborhood blocks") {
  BipartiteInstance g3 = support::e3();
  SplitPlan plan = split_by_intervals(g3);
  REQUIRE(plan.subs.size() == 2);
  CHECK(label_block(g3, plan.subs[0]) == std::vector<int>{5, 7, 9});
  CHECK(label_block(g3, plan.subs[1]) == std::vector<int>{6, 8, 10});

  BipartiteInstance g2 = support::e2();
  SplitPlan plan2 = split_by_intervals(g2);
  REQUIRE(plan2.subs.size() == 1);
  CHECK(label_block(g2, plan2.subs[0]) == std::vector<int>{10, 11, 12});

  BipartiteInstance deg0 = support::make_instance(2, 3, {});
  SplitPlan plan0 = split_by_intervals(deg0);
  CHECK(plan0.subs.empty());
  CHECK(plan0.isolated_labels == std::vector<int>{3, 4, 5});
}

TEST_CASE("split_by_intervals never separates overlapping intervals") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 100; ++round) {
    BipartiteInstance g = support::random_instance(rng, 8, 8, 0.3);
    SplitPlan plan = split_by_intervals(g);
    // Block index per free label; -1 for isolated.
    std::vector<int> block(g.n_fixed + g.n_free + 1, -1);
    for (std::size_t i = 0; i < plan.subs.size(); ++i)
      for (int label : plan.subs[i].free_labels) block[label] = static_cast<int>(i);
    for (int u = 0; u < g.n_free; ++u) {
      if (g.adj_free[u].empty()) continue;
      for (int v = u + 1; v < g.n_free; ++v) {
        if (g.adj_free[v].empty()) continue;
        int lo_u = g.adj_free[u].front(), hi_u = g.adj_free[u].back();
        int lo_v = g.adj_free[v].front(), hi_v = g.adj_free[v].back();
        bool overlap = std::max(lo_u, lo_v) <= std::min(hi_u, hi_v);
        if (overlap) CHECK(block[g.free_label(u)] == block[g.free_label(v)]);
      }
    }
  }
}

TEST_CASE("merge_solutions concatenates block solutions") {
  BipartiteInstance g3 = support::e3();
  SplitPlan plan = split_by_intervals(g3);
  std::vector<Solution> subs(2);
  subs[0].ordering = to_sub_labels(plan.subs[0], {5, 7, 9});
  subs[1].ordering = to_sub_labels(plan.subs[1], {6, 8, 10});
  Solution merged = merge_solutions(g3, plan, subs);
  CHECK(merged.ordering == std::vector<int>{5, 7, 9, 6, 8, 10});
  CHECK(merged.crossings == 6);
}

TEST_CASE("single-block plans are passthrough") {
  BipartiteInstance g2 = support::e2();
  SplitPlan plan = split_by_intervals(g2);
  std::vector<Solution> subs(1);
  subs[0].ordering = to_sub_labels(plan.subs[0], {11, 12, 10});
  Solution merged = merge_solutions(g2, plan, subs);
  CHECK(merged.ordering == std::vector<int>{11, 12, 10});
  CHECK(merged.crossings == 10);
}

namespace {

// Brute-force each block of a plan, merge, and return the total.
long long solve_via_plan(const BipartiteInstance &g, const SplitPlan &plan) {
  std::vector<Solution> subs;
  for (const SubInstance &sub : plan.subs) {
    std::vector<int> best;
    support::brute_force_optimum(sub.graph, &best);
    if (best.empty())
      for (int v = 0; v < sub.graph.n_free; ++v)
        best.push_back(sub.graph.free_label(v));
    Solution s;
    s.ordering = best;  // sub labels; merge maps them back
    subs.push_back(s);
  }
  return *merge_solutions(g, plan, subs).crossings;
}

}  // namespace

TEST_CASE("both splitting strategies preserve the optimum") {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 60; ++round) {
    BipartiteInstance g = support::random_instance(rng, 7, 7, round % 2 ? 0.25 : 0.5);
    long long opt = support::brute_force_optimum(g);
    CHECK(solve_via_plan(g, split_by_scc(g, build_crossing_matrix(g))) == opt);
    CHECK(solve_via_plan(g, split_by_intervals(g)) == opt);
  }
}

TEST_CASE("interval splitting composed with SCC splitting preserves the optimum") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 40; ++round) {
    BipartiteInstance g = support::random_instance(rng, 7, 7, 0.3);
    long long opt = support::brute_force_optimum(g);
    SplitPlan outer = split_by_intervals(g);
    std::vector<Solution> outer_subs;
    for (const SubInstance &block : outer.subs) {
      SplitPlan inner = split_by_scc(block.graph, build_crossing_matrix(block.graph));
      std::vector<Solution> inner_subs;
      for (const SubInstance &comp : inner.subs) {
        std::vector<int> best;
        support::brute_force_optimum(comp.graph, &best);
        if (best.empty())
          for (int v = 0; v < comp.graph.n_free; ++v)
            best.push_back(comp.graph.free_label(v));
        Solution s;
        s.ordering = best;
        inner_subs.push_back(s);
      }
      // The inner merge yields block labels, which is what the outer merge
      // expects for this block.
      outer_subs.push_back(merge_solutions(block.graph, inner, inner_subs));
    }
    CHECK(*merge_solutions(g, outer, outer_subs).crossings == opt);
  }
}
