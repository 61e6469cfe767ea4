#ifndef OCM_HEURISTIC_HPP
#define OCM_HEURISTIC_HPP

#include <atomic>
#include <chrono>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "ocm/crossings.hpp"
#include "ocm/instance.hpp"
#include "ocm/reductions.hpp"

namespace ocm {

struct HeuristicParams {
  int restart_stall_limit = 592;   // restarts without improvement before force swapping
  int swap_step = 9;               // force-swap distance increment
  int swap_max_distance = 90;
  double large_initial_phase_fraction = 0.10;
  long long large_sift_crossing_cap = 20000;
  long long large_sift_distance_cap = 2000;
  std::uint64_t seed = 1;
};

// Wall-clock deadline and/or iteration quota. Tests use quotas so runs are
// reproducible; the CLI uses deadlines. An iteration is one restart+sift
// cycle (or one sifting pass in the large-graph mode).
struct Budget {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::optional<long long> max_iterations;
  const std::atomic<bool> *stop = nullptr;

  bool expired(long long iterations_done) const {
    if (stop && stop->load(std::memory_order_relaxed)) return true;
    if (max_iterations && iterations_done >= *max_iterations) return true;
    if (deadline && std::chrono::steady_clock::now() >= *deadline) return true;
    return false;
  }
  bool bounded() const { return deadline || max_iterations; }

  static Budget iterations(long long n) {
    Budget b;
    b.max_iterations = n;
    return b;
  }
  static Budget seconds(double s) {
    Budget b;
    b.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(s));
    return b;
  }
};

// Lower median of the sorted fixed neighborhood; degree-0 vertices key 0;
// ties broken by ascending label.
std::vector<int> median_order(const BipartiteInstance &g);

// Exact-rational neighborhood average, same tie-breaks.
std::vector<int> barycenter_order(const BipartiteInstance &g);

struct OrderState {
  std::vector<int> order;  // free indices
  std::vector<int> pos;    // inverse of order
  long long crossings = 0;
};

OrderState make_state(const CrossingMatrix &m, std::vector<int> ordering_indices);

// Both vertices of `locked` keep their relative order; (-1,-1) means none.
struct SiftConstraints {
  const PartialOrder *committed = nullptr;
  std::pair<int, int> locked = {-1, -1};
};

// Moves v to the best insertion position found by a delta-matrix scan;
// leftmost among equals. Never increases the crossing count.
void sift_vertex(OrderState &state, const CrossingMatrix &m, int v,
                 const SiftConstraints &constraints = {});

// Full passes over freshly shuffled vertex sequences until one pass brings
// no improvement. Returns whether the count dropped.
bool sift_all(OrderState &state, const CrossingMatrix &m, std::mt19937_64 &rng,
              const SiftConstraints &constraints = {});

// Swap perturbation with the tuned distance schedule (1, 1+step, ... up to
// the max); each swap is followed by sifting constrained to keep the swapped
// pair's new order, and kept only if it beats the incumbent.
void force_swap_phase(OrderState &best, const CrossingMatrix &m,
                      const HeuristicParams &params, std::mt19937_64 &rng,
                      const PartialOrder *committed, const Budget &budget);

// Median seed + sifting, then random-restart local search with force
// swapping on stalls. Restarts draw random linear extensions of `committed`;
// the result never violates a committed pair.
Solution local_search(const BipartiteInstance &g, const CrossingMatrix &m,
                      const HeuristicParams &params,
                      const PartialOrder *committed, const Budget &budget);

// Matrix-free path: adjacent-swap hill climbing from the median and
// barycenter seeds, then capped sifting on the better of the two.
Solution large_graph_heuristic(const BipartiteInstance &g,
                               const HeuristicParams &params,
                               const Budget &budget);

}  // namespace ocm

#endif
