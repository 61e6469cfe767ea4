#ifndef OCM_CROSSINGS_HPP
#define OCM_CROSSINGS_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "ocm/instance.hpp"

namespace ocm {

class instance_too_large : public std::runtime_error {
 public:
  explicit instance_too_large(int n_free, int threshold)
      : std::runtime_error("instance with " + std::to_string(n_free) +
                           " free vertices exceeds crossing-matrix threshold " +
                           std::to_string(threshold)) {}
};

struct CrossingsBudget {
  int large_threshold = 10000;  // above this, no dense matrix is materialized
};

// Dense pairwise crossing numbers over the free set, plus the antisymmetric
// delta matrix c - c^T that the sifting scans read directly.
struct CrossingMatrix {
  int n = 0;
  std::vector<long long> c;
  std::vector<long long> delta;

  long long cross(int u, int v) const { return c[static_cast<std::size_t>(u) * n + v]; }
  long long diff(int u, int v) const { return delta[static_cast<std::size_t>(u) * n + v]; }
};

// c_uv: pairs (a,b) with a in N(v), b in N(u) and a before b in the fixed
// order. Works off the sorted adjacency, iterating the smaller neighborhood
// and binary-searching the larger.
long long crossing_number_pair(const BipartiteInstance &g, int u_index, int v_index);

CrossingMatrix build_crossing_matrix(const BipartiteInstance &g,
                                     const CrossingsBudget &budget = {});

// O(m^2) edge-pair enumeration; the reference oracle for the fast path.
long long count_crossings_naive(const BipartiteInstance &g,
                                std::span<const int> ordering_labels);

// Reusable segment-tree workspace for crossing counts. One owner at a time;
// not safe for concurrent use.
class CrossingCounter {
 public:
  long long count(const BipartiteInstance &g, std::span<const int> ordering_labels);

 private:
  void reserve(int n);
  std::vector<long long> tree_;
  std::vector<int> pos_;  // label-indexed scratch
  int base_ = 0;
};

long long count_crossings_fast(const BipartiteInstance &g,
                               std::span<const int> ordering_labels);

// Sum of min(c_uv, c_vu) over unordered pairs; unavoidable crossings.
long long trivial_lower_bound(const CrossingMatrix &m);

// Total crossings of an ordering given as free indices, via the matrix.
long long crossings_from_matrix(const CrossingMatrix &m,
                                std::span<const int> ordering_indices);

}  // namespace ocm

#endif
