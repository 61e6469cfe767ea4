#ifndef OCM_REDUCTIONS_HPP
#define OCM_REDUCTIONS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ocm/crossings.hpp"
#include "ocm/instance.hpp"
#include "ocm/penalty.hpp"

namespace ocm {

class order_inconsistency : public std::logic_error {
 public:
  explicit order_inconsistency(const std::string &what) : std::logic_error(what) {}
};

// Strict partial order over free vertices with machine-word-packed rows.
// Row a, bit b set means "a before b". Rules add direct pairs; close()
// replaces the rows with the full transitive reachability.
class PartialOrder {
 public:
  PartialOrder() = default;
  explicit PartialOrder(int n);

  int size() const { return n_; }
  bool before(int a, int b) const {
    return (rows_[static_cast<std::size_t>(a) * words_ + (b >> 6)] >>
            (b & 63)) & 1;
  }
  bool comparable(int a, int b) const { return before(a, b) || before(b, a); }

  // Throws order_inconsistency if b is already before a.
  void commit(int a, int b);

  // Reverse-topological reachability propagation. Throws on a cycle.
  void close();

  // All pairs (a,b) with a before b.
  std::vector<std::pair<int, int>> pairs() const;

  // Successors of a as indices, ascending.
  std::vector<int> successors(int a) const;

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> rows_;
};

// RR1: commit a before b when c_ab = 0 and c_ba > 0; mutually-zero pairs get
// the ascending-label direction. Returns whether anything changed.
bool apply_rr1(const CrossingMatrix &m, PartialOrder &p);

// RR2: twins (equal fixed neighborhoods) are chained ascending by label.
bool apply_rr2(const BipartiteInstance &g, PartialOrder &p);

// Modified RRlarge: commit a before b when c_ba + lower_bound - c_ab >
// upper_bound (strict). Requires lower_bound <= upper_bound.
bool apply_rrlarge_modified(const CrossingMatrix &m, PartialOrder &p,
                            long long lower_bound, long long upper_bound);

struct ReductionOutcome {
  BipartiteInstance reduced;
  std::vector<int> free_labels;  // reduced free index -> original label
  PartialOrder order;            // closed, over reduced indices
  std::vector<std::pair<int, int>> committed_pairs;  // reduced labels, a before b
  std::vector<std::pair<int, int>> fixed_positions;  // original label -> 1-based pos
};

// RRLO1: remove every free vertex comparable to all others; its final
// position is one plus the number of predecessors. `p` must be closed.
ReductionOutcome apply_rrlo1(const BipartiteInstance &g, const PartialOrder &p);

// RR1 and RR2 once, RRlarge to a fixed point, transitive closure, RRLO1.
ReductionOutcome reduce_pipeline(const BipartiteInstance &g,
                                 const CrossingMatrix &m,
                                 const Solution &upper_bound_solution);

// Inserts the removed vertices back into a solved reduced ordering (given in
// reduced labels); returns the full ordering in original labels.
std::vector<int> reinsert_removed(const ReductionOutcome &outcome,
                                  std::span<const int> reduced_ordering_labels);

}  // namespace ocm

#endif
