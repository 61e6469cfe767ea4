#ifndef OCM_INSTANCE_HPP
#define OCM_INSTANCE_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocm {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string &message, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Two-layer instance. Fixed vertices carry labels 1..n_fixed and their label
// order is the fixed order; free vertices carry labels n_fixed+1..n_fixed+n_free.
struct BipartiteInstance {
  int n_fixed = 0;
  int n_free = 0;
  std::vector<std::vector<int>> adj_free;   // free index -> fixed labels, ascending
  std::vector<std::vector<int>> adj_fixed;  // fixed index -> free labels, ascending

  int free_label(int index) const { return n_fixed + 1 + index; }
  int free_index(int label) const { return label - n_fixed - 1; }
  std::size_t num_edges() const;
};

struct Solution {
  std::vector<int> ordering;  // free labels, left to right
  std::optional<long long> crossings;
};

// Injective vertex -> rank map over all n_fixed + n_free vertices.
struct Numbering {
  std::vector<int> position;  // indexed by label-1, values are a permutation of 1..n
};

struct ParsedInstance {
  BipartiteInstance graph;
  std::optional<Numbering> numbering;       // parameterized-track input only
  std::optional<long long> claimed_width;   // ditto; taken as-is, never trusted
};

/**
 * Reads a PACE-style OCM instance.
 *
 * Lines starting with 'c' are comments. The first non-comment line is
 * `p ocm <n_fixed> <n_free> <m>`, followed by exactly m edge lines `<a> <b>`
 * with a in the fixed range and b in the free range. The parameterized-track
 * variant carries one extra header token (the claimed cutwidth) and
 * n_fixed+n_free vertex lines giving a numbering before the edges; it is
 * auto-detected by the header token count.
 *
 * Throws parse_error with the offending line number.
 */
ParsedInstance parse_instance(std::istream &in);

std::string write_instance(const BipartiteInstance &g);

// One free label per line, trailing newline.
std::string write_solution(const Solution &sol);

// Reads a solution file (one label per line, 'c' comments ignored).
std::vector<int> parse_solution(std::istream &in);

// Exact crossing count of `sol` on `g`. Throws std::invalid_argument if the
// ordering is not a permutation of the free labels.
long long verify_solution(const BipartiteInstance &g, const Solution &sol);

// Width of the given numbering: max over cuts i of the number of edges
// {u,v} with pos(u) <= i < pos(v).
long long numbering_width(const BipartiteInstance &g, const Numbering &num);

}  // namespace ocm

#endif
