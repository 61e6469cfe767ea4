#include <sstream>

#include "doctest.h"
#include "ocm/instance.hpp"
#include "test_support.hpp"

using namespace ocm;

TEST_CASE("parse_instance reads the basic format") {
  std::istringstream in("p ocm 3 3 5\n2 6\n1 6\n2 5\n2 4\n3 4\n");
  ParsedInstance parsed = parse_instance(in);
  const BipartiteInstance &g = parsed.graph;
  CHECK(g.n_fixed == 3);
  CHECK(g.n_free == 3);
  CHECK(g.num_edges() == 5);
  CHECK(g.adj_free[g.free_index(4)] == std::vector<int>{2, 3});
  CHECK(g.adj_free[g.free_index(5)] == std::vector<int>{2});
  CHECK(g.adj_free[g.free_index(6)] == std::vector<int>{1, 2});
  CHECK(!parsed.numbering.has_value());
}

TEST_CASE("parse_instance skips comments and accepts empty edge sets") {
  std::istringstream in("c hi\np ocm 1 1 0\n");
  ParsedInstance parsed = parse_instance(in);
  CHECK(parsed.graph.n_fixed == 1);
  CHECK(parsed.graph.n_free == 1);
  CHECK(parsed.graph.num_edges() == 0);
}

TEST_CASE("parse_instance rejects malformed input with line numbers") {
  SUBCASE("edge-count mismatch") {
    std::istringstream in("p ocm 3 3 5\n2 6\n");
    CHECK_THROWS_AS(parse_instance(in), parse_error);
  }
  SUBCASE("malformed header") {
    std::istringstream in("p wrong 3 3 5\n");
    CHECK_THROWS_AS(parse_instance(in), parse_error);
  }
  SUBCASE("out-of-range endpoint") {
    std::istringstream in("p ocm 3 3 1\n5 6\n");
    CHECK_THROWS_AS(parse_instance(in), parse_error);
  }
  SUBCASE("duplicate edge") {
    std::istringstream in("p ocm 3 3 2\n2 6\n2 6\n");
    CHECK_THROWS_AS(parse_instance(in), parse_error);
  }
  SUBCASE("extra trailing edge") {
    std::istringstream in("p ocm 3 3 1\n2 6\n2 5\n");
    CHECK_THROWS_AS(parse_instance(in), parse_error);
  }
}

TEST_CASE("parse_instance auto-detects the numbered header variant") {
  // Extra header token plus one vertex per line before the edges.
  std::ostringstream text;
  text << "p ocm 9 3 9 3\n";
  for (int v : {11, 3, 7, 12, 6, 2, 1, 5, 10, 9, 8, 4}) text << v << "\n";
  text << "1 12\n2 12\n3 10\n4 10\n5 11\n6 12\n7 12\n8 12\n9 10\n";
  std::istringstream in(text.str());
  ParsedInstance parsed = parse_instance(in);
  CHECK(parsed.graph.n_free == 3);
  REQUIRE(parsed.numbering.has_value());
  CHECK(parsed.claimed_width == 3);
  CHECK(parsed.numbering->position[11 - 1] == 1);
  CHECK(parsed.numbering->position[4 - 1] == 12);
}

TEST_CASE("write_solution emits one label per line") {
  Solution sol;
  sol.ordering = {6, 5, 4};
  CHECK(write_solution(sol) == "6\n5\n4\n");
  sol.ordering = {11, 12, 10};
  CHECK(write_solution(sol) == "11\n12\n10\n");
  sol.ordering.clear();
  CHECK(write_solution(sol).empty());
}

TEST_CASE("instance round trip preserves the edge multiset") {
  BipartiteInstance g = support::e1();
  std::istringstream in(write_instance(g));
  ParsedInstance back = parse_instance(in);
  CHECK(back.graph.adj_free == g.adj_free);
  CHECK(back.graph.adj_fixed == g.adj_fixed);
}

TEST_CASE("verify_solution counts crossings exactly") {
  BipartiteInstance g = support::e1();
  Solution sol;
  sol.ordering = {4, 5, 6};
  CHECK(verify_solution(g, sol) == 5);
  sol.ordering = {6, 5, 4};
  CHECK(verify_solution(g, sol) == 0);

  BipartiteInstance g2 = support::e2();
  sol.ordering = {11, 12, 10};
  CHECK(verify_solution(g2, sol) == 10);

  sol.ordering = {4, 4, 6};
  CHECK_THROWS_AS(verify_solution(g, sol), std::invalid_argument);
}

TEST_CASE("verify_solution is invariant under edge-line order") {
  std::istringstream a("p ocm 3 3 5\n2 6\n1 6\n2 5\n2 4\n3 4\n");
  std::istringstream b("p ocm 3 3 5\n3 4\n2 4\n2 5\n1 6\n2 6\n");
  Solution sol;
  sol.ordering = {4, 5, 6};
  CHECK(verify_solution(parse_instance(a).graph, sol) ==
        verify_solution(parse_instance(b).graph, sol));
}

TEST_CASE("verify_solution equals the naive pair oracle on random inputs") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    BipartiteInstance g = support::random_instance(rng, 5, 6, 0.4);
    std::vector<int> order = support::free_labels(g);
    std::shuffle(order.begin(), order.end(), rng);
    Solution sol;
    sol.ordering = order;
    CHECK(verify_solution(g, sol) == support::oracle_count(g, order));
  }
}

namespace {
// Independent width computation: literal sweep over every cut.
long long width_by_sweep(const BipartiteInstance &g, const Numbering &num) {
  int n = g.n_fixed + g.n_free;
  long long best = 0;
  for (int cut = 1; cut < n; ++cut) {
    long long count = 0;
    for (int v = 0; v < g.n_free; ++v)
      for (int a : g.adj_free[v]) {
        int pu = num.position[a - 1];
        int pv = num.position[g.free_label(v) - 1];
        if (std::min(pu, pv) <= cut && cut < std::max(pu, pv)) ++count;
      }
    best = std::max(best, count);
  }
  return best;
}

Numbering numbering_from_order(const std::vector<int> &order) {
  Numbering num;
  num.position.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    num.position[order[i] - 1] = static_cast<int>(i) + 1;
  return num;
}
}  // namespace

TEST_CASE("numbering_width matches a direct sweep") {
  BipartiteInstance g2 = support::e2();
  Numbering num = numbering_from_order({11, 3, 7, 12, 6, 2, 1, 5, 10, 9, 8, 4});
  CHECK(numbering_width(g2, num) == width_by_sweep(g2, num));
  CHECK(numbering_width(g2, num) == 6);

  BipartiteInstance g1 = support::e1();
  Numbering id = numbering_from_order({1, 2, 3, 4, 5, 6});
  CHECK(numbering_width(g1, id) == width_by_sweep(g1, id));
  CHECK(numbering_width(g1, id) == 5);

  BipartiteInstance single = support::make_instance(1, 1, {{1, 2}});
  Numbering sn = numbering_from_order({1, 2});
  CHECK(numbering_width(single, sn) == 1);
  Numbering sn2 = numbering_from_order({2, 1});
  CHECK(numbering_width(single, sn2) == 1);
}
