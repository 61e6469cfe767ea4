// Command-line frontend: exact / heuristic / parameterized solving, solution
// verification, reduction inspection, and CSV benchmarking.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ocm/solver.hpp"

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true, std::memory_order_relaxed); }

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string mode;
  std::string input;      // empty or "-" means stdin
  std::string output;     // empty means stdout
  std::string solution;   // verify mode
  std::string stats;      // CSV sink
  std::string bench_solver = "heuristic";
  double time_budget = 0;       // seconds; 0 = per-mode default
  long long iterations = 0;     // 0 = unset; overrides the deadline
  std::uint64_t seed = 1;
  int large_threshold = 0;      // 0 = library default
  int stall_limit = 0;
  int swap_step = 0;
  int swap_max_distance = 0;
};

// One comment row pins the schema version so old benchmark files stay
// comparable with new ones.
constexpr const char *kStatsVersion = "# ocm-stats v1";
constexpr const char *kStatsHeader =
    "instance,n_fixed,n_free,edges,components,largest_component,"
    "free_after_reduction,crossings,fas_weight,lower_bound,upper_bound,"
    "time_total_s";

void ensure_stats_header(const std::string &path) {
  bool need_header;
  {
    std::ifstream probe(path);
    need_header = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
  }
  if (!need_header) return;
  std::ofstream out(path, std::ios::app);
  if (!out) throw io_error("cannot write stats file: " + path);
  out << kStatsVersion << '\n' << kStatsHeader << '\n';
}

void append_stats(const std::string &path, const std::string &name,
                  const ocm::SolveStats &s) {
  ensure_stats_header(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw io_error("cannot write stats file: " + path);
  std::string safe = name;
  std::replace(safe.begin(), safe.end(), ',', '_');
  out << safe << ',' << s.n_fixed << ',' << s.n_free << ',' << s.edges << ','
      << s.components << ',' << s.largest_component << ','
      << s.free_after_reduction << ',' << s.crossings << ',' << s.fas_weight
      << ',' << s.lower_bound << ',' << s.upper_bound << ','
      << s.time_total_s << '\n';
}

ocm::ParsedInstance load_instance(const std::string &path) {
  if (path.empty() || path == "-") return ocm::parse_instance(std::cin);
  std::ifstream in(path);
  if (!in) throw io_error("cannot open input file: " + path);
  return ocm::parse_instance(in);
}

void emit(const std::string &path, const std::string &text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw io_error("cannot open output file: " + path);
  out << text;
  if (!out) throw io_error("write failed: " + path);
}

ocm::Budget make_budget(const RunConfig &cfg, double default_seconds) {
  ocm::Budget budget;
  if (cfg.iterations > 0) {
    budget.max_iterations = cfg.iterations;
  } else {
    double seconds = cfg.time_budget > 0 ? cfg.time_budget : default_seconds;
    budget = ocm::Budget::seconds(seconds);
  }
  budget.stop = &g_stop;
  return budget;
}

ocm::HeuristicParams make_params(const RunConfig &cfg) {
  ocm::HeuristicParams params;
  params.seed = cfg.seed;
  if (cfg.stall_limit > 0) params.restart_stall_limit = cfg.stall_limit;
  if (cfg.swap_step > 0) params.swap_step = cfg.swap_step;
  if (cfg.swap_max_distance > 0) params.swap_max_distance = cfg.swap_max_distance;
  return params;
}

ocm::CrossingsBudget make_crossings(const RunConfig &cfg) {
  ocm::CrossingsBudget budget;
  if (cfg.large_threshold > 0) budget.large_threshold = cfg.large_threshold;
  return budget;
}

ocm::Solution solve_one(const std::string &solver, const ocm::BipartiteInstance &g,
                        const RunConfig &cfg, ocm::SolveStats &stats) {
  if (solver == "heuristic") {
    ocm::HeuristicOptions options;
    options.budget = make_budget(cfg, 300.0);
    options.params = make_params(cfg);
    options.crossings = make_crossings(cfg);
    return ocm::heuristic_solve(g, options, &stats);
  }
  ocm::ExactOptions options;
  options.budget = make_budget(cfg, 1800.0);
  options.heuristic = make_params(cfg);
  options.crossings = make_crossings(cfg);
  if (solver == "parameterized") return ocm::parameterized_solve(g, options, &stats);
  return ocm::exact_solve(g, options, &stats);
}

int run_solver(const RunConfig &cfg, const std::string &solver) {
  ocm::ParsedInstance parsed = load_instance(cfg.input);
  ocm::SolveStats stats;
  ocm::Solution sol = solve_one(solver, parsed.graph, cfg, stats);
  emit(cfg.output, ocm::write_solution(sol));
  if (!cfg.stats.empty()) {
    std::string name = cfg.input.empty() || cfg.input == "-" ? "stdin" : cfg.input;
    append_stats(cfg.stats, name, stats);
  }
  return 0;
}

int run_verify(const RunConfig &cfg) {
  ocm::ParsedInstance parsed = load_instance(cfg.input);
  std::vector<int> ordering;
  if (cfg.solution.empty() || cfg.solution == "-") {
    ordering = ocm::parse_solution(std::cin);
  } else {
    std::ifstream in(cfg.solution);
    if (!in) throw io_error("cannot open solution file: " + cfg.solution);
    ordering = ocm::parse_solution(in);
  }
  ocm::Solution sol;
  sol.ordering = std::move(ordering);
  long long crossings = ocm::verify_solution(parsed.graph, sol);
  emit(cfg.output, std::to_string(crossings) + "\n");
  return 0;
}

int run_reduce(const RunConfig &cfg) {
  ocm::ParsedInstance parsed = load_instance(cfg.input);
  ocm::ReductionReport report = ocm::reduce_report(parsed.graph, make_crossings(cfg));
  std::ostringstream out;
  double pct = report.free_before == 0
                   ? 100.0
                   : 100.0 * report.free_removed / report.free_before;
  out << "removed " << report.free_removed << " of " << report.free_before
      << " free vertices (" << pct << "%)\n"
      << "remaining " << (report.free_before - report.free_removed) << '\n'
      << "components " << report.components << '\n'
      << "committed pairs " << report.committed_pairs << '\n';
  emit(cfg.output, out.str());
  return 0;
}

int run_bench(const RunConfig &cfg) {
  namespace fs = std::filesystem;
  if (cfg.stats.empty()) throw io_error("bench mode needs --stats");
  if (!fs::is_directory(cfg.input))
    throw io_error("bench input is not a directory: " + cfg.input);
  ensure_stats_header(cfg.stats);

  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(cfg.input))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  for (const fs::path &file : files) {
    if (g_stop.load(std::memory_order_relaxed)) break;
    try {
      std::ifstream in(file);
      if (!in) throw io_error("cannot open input file: " + file.string());
      ocm::ParsedInstance parsed = ocm::parse_instance(in);
      ocm::SolveStats stats;
      solve_one(cfg.bench_solver, parsed.graph, cfg, stats);
      append_stats(cfg.stats, file.filename().string(), stats);
    } catch (const ocm::parse_error &e) {
      std::cerr << file.string() << ": parse error: " << e.what() << '\n';
    } catch (const ocm::incomplete_error &e) {
      std::cerr << file.string() << ": incomplete: " << e.what() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  CLI::App app{"one-sided crossing minimization solver"};
  RunConfig cfg;
  app.add_option("--mode", cfg.mode, "exact | heuristic | parameterized | verify | reduce | bench")
      ->required()
      ->check(CLI::IsMember({"exact", "heuristic", "parameterized", "verify",
                             "reduce", "bench"}));
  app.add_option("--input,-i", cfg.input, "input file, '-' or omitted for stdin");
  app.add_option("--output,-o", cfg.output, "output file (default stdout)");
  app.add_option("--solution", cfg.solution, "solution file to verify");
  app.add_option("--stats", cfg.stats, "CSV stats sink (appended)");
  app.add_option("--bench-solver", cfg.bench_solver, "solver used by bench mode")
      ->check(CLI::IsMember({"exact", "heuristic", "parameterized"}));
  app.add_option("--time-budget", cfg.time_budget,
                 "wall-clock budget in seconds (default 300 heuristic, 1800 exact)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--iterations", cfg.iterations,
                 "iteration quota replacing the deadline (reproducible runs)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--large-threshold", cfg.large_threshold,
                 "max free vertices for which the crossing matrix is built");
  app.add_option("--stall-limit", cfg.stall_limit, "restarts without improvement before force swapping");
  app.add_option("--swap-step", cfg.swap_step, "force-swap distance increment");
  app.add_option("--swap-max-distance", cfg.swap_max_distance, "force-swap distance cap");
  CLI11_PARSE(app, argc, argv);

  try {
    if (cfg.mode == "verify") return run_verify(cfg);
    if (cfg.mode == "reduce") return run_reduce(cfg);
    if (cfg.mode == "bench") return run_bench(cfg);
    return run_solver(cfg, cfg.mode);
  } catch (const ocm::parse_error &e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument &e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ocm::incomplete_error &e) {
    std::cerr << "incomplete: " << e.what() << '\n';
    return 3;
  } catch (const io_error &e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const std::ios_base::failure &e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  }
}
