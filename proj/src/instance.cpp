#include "ocm/instance.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "ocm/crossings.hpp"

namespace ocm {

std::size_t BipartiteInstance::num_edges() const {
  std::size_t m = 0;
  for (const auto &nbrs : adj_free) m += nbrs.size();
  return m;
}

namespace {

std::vector<long long> tokenize(const std::string &line) {
  std::istringstream ss(line);
  std::vector<long long> out;
  long long x;
  while (ss >> x) out.push_back(x);
  if (!ss.eof()) return {};  // trailing garbage
  return out;
}

struct LineReader {
  std::istream &in;
  int line_no = 0;

  // Returns the next non-comment, non-blank line, or nullopt at EOF.
  std::optional<std::string> next() {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == 'c') continue;
      return line;
    }
    return std::nullopt;
  }
};

}  // namespace

ParsedInstance parse_instance(std::istream &in) {
  LineReader reader{in};

  auto header = reader.next();
  if (!header) throw parse_error("missing problem header", reader.line_no);

  std::istringstream hs(*header);
  std::string p, descriptor;
  if (!(hs >> p >> descriptor) || p != "p" || descriptor != "ocm")
    throw parse_error("malformed header, expected 'p ocm ...'", reader.line_no);

  std::vector<long long> nums;
  long long x;
  while (hs >> x) nums.push_back(x);
  if (!hs.eof() || (nums.size() != 3 && nums.size() != 4))
    throw parse_error("malformed header, expected 3 or 4 numeric fields",
                      reader.line_no);
  if (nums[0] < 0 || nums[1] < 0 || nums[2] < 0)
    throw parse_error("negative count in header", reader.line_no);

  ParsedInstance result;
  BipartiteInstance &g = result.graph;
  g.n_fixed = static_cast<int>(nums[0]);
  g.n_free = static_cast<int>(nums[1]);
  const long long m = nums[2];
  g.adj_free.resize(g.n_free);
  g.adj_fixed.resize(g.n_fixed);

  const bool parameterized = nums.size() == 4;
  if (parameterized) {
    result.claimed_width = nums[3];
    const int n_total = g.n_fixed + g.n_free;
    Numbering num;
    num.position.assign(n_total, 0);
    for (int rank = 1; rank <= n_total; ++rank) {
      auto line = reader.next();
      if (!line)
        throw parse_error("unexpected end of input in numbering block",
                          reader.line_no);
      auto tokens = tokenize(*line);
      if (tokens.size() != 1)
        throw parse_error("expected a single vertex label", reader.line_no);
      long long v = tokens[0];
      if (v < 1 || v > n_total)
        throw parse_error("numbering vertex out of range", reader.line_no);
      if (num.position[v - 1] != 0)
        throw parse_error("vertex repeated in numbering", reader.line_no);
      num.position[v - 1] = rank;
    }
    result.numbering = std::move(num);
  }

  for (long long i = 0; i < m; ++i) {
    auto line = reader.next();
    if (!line)
      throw parse_error("edge-count mismatch: expected " + std::to_string(m) +
                            " edges, got " + std::to_string(i),
                        reader.line_no);
    auto tokens = tokenize(*line);
    if (tokens.size() != 2)
      throw parse_error("malformed edge line", reader.line_no);
    long long a = tokens[0], b = tokens[1];
    if (a < 1 || a > g.n_fixed)
      throw parse_error("fixed endpoint " + std::to_string(a) + " out of range",
                        reader.line_no);
    if (b <= g.n_fixed || b > g.n_fixed + g.n_free)
      throw parse_error("free endpoint " + std::to_string(b) + " out of range",
                        reader.line_no);
    g.adj_free[g.free_index(static_cast<int>(b))].push_back(static_cast<int>(a));
    g.adj_fixed[a - 1].push_back(static_cast<int>(b));
  }
  if (reader.next())
    throw parse_error("edge-count mismatch: extra data after " +
                          std::to_string(m) + " edges",
                      reader.line_no);

  for (auto &nbrs : g.adj_free) {
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
      throw parse_error("duplicate edge", reader.line_no);
  }
  for (auto &nbrs : g.adj_fixed) std::sort(nbrs.begin(), nbrs.end());
  return result;
}

std::string write_instance(const BipartiteInstance &g) {
  std::ostringstream out;
  out << "p ocm " << g.n_fixed << ' ' << g.n_free << ' ' << g.num_edges()
      << '\n';
  for (int a = 1; a <= g.n_fixed; ++a)
    for (int b : g.adj_fixed[a - 1]) out << a << ' ' << b << '\n';
  return out.str();
}

std::string write_solution(const Solution &sol) {
  std::ostringstream out;
  for (int label : sol.ordering) out << label << '\n';
  return out.str();
}

std::vector<int> parse_solution(std::istream &in) {
  LineReader reader{in};
  std::vector<int> ordering;
  while (auto line = reader.next()) {
    auto tokens = tokenize(*line);
    if (tokens.size() != 1)
      throw parse_error("expected a single vertex label", reader.line_no);
    ordering.push_back(static_cast<int>(tokens[0]));
  }
  return ordering;
}

long long verify_solution(const BipartiteInstance &g, const Solution &sol) {
  return count_crossings_fast(g, sol.ordering);
}

long long numbering_width(const BipartiteInstance &g, const Numbering &num) {
  const int n_total = g.n_fixed + g.n_free;
  if (static_cast<int>(num.position.size()) != n_total)
    throw std::invalid_argument("numbering does not cover all vertices");
  std::vector<char> seen(n_total + 1, 0);
  for (int pos : num.position) {
    if (pos < 1 || pos > n_total || seen[pos])
      throw std::invalid_argument("numbering positions are not a permutation");
    seen[pos] = 1;
  }

  // Difference array over the n_total-1 cuts.
  std::vector<long long> cut(n_total + 1, 0);
  for (int b = 0; b < g.n_free; ++b) {
    int pos_b = num.position[g.free_label(b) - 1];
    for (int a : g.adj_free[b]) {
      int pos_a = num.position[a - 1];
      int lo = std::min(pos_a, pos_b), hi = std::max(pos_a, pos_b);
      cut[lo] += 1;
      cut[hi] -= 1;
    }
  }
  long long width = 0, running = 0;
  for (int i = 1; i < n_total; ++i) {
    running += cut[i];
    width = std::max(width, running);
  }
  return width;
}

}  // namespace ocm
