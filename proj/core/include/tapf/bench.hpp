#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tapf/gridmap.hpp"
#include "tapf/search.hpp"

namespace tapf {

/// Seeded source for case generation: std::mt19937_64 (its output sequence is
/// fixed by the C++ standard) with bounded draws by rejection sampling, so the
/// same seed yields the same cases on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Fisher-Yates shuffle driven by below().
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

enum class Scenario { Group, Common };

[[nodiscard]] std::string_view to_string(Scenario s);

inline constexpr int kGroupSize = 5;

struct BenchCase {
  std::string id;
  std::string map_name;
  Scenario scenario = Scenario::Group;
  int num_agents = 0;
  int target_set_size = 0;
  double shared_ratio = 0.0;
  std::uint64_t seed = 0;
  std::shared_ptr<const TAPFInstance> instance;
};

/// Thrown when the map has too few free cells for the requested case.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Agents in consecutive groups of five (the last group takes the remainder),
/// each group sharing its own target set of the group's size. Starts and
/// targets are distinct cells drawn without replacement.
[[nodiscard]] BenchCase gen_group(std::shared_ptr<const GridMap> map, std::string map_name,
                                  int num_agents, std::uint64_t seed);

/// Every agent gets `target_set_size` targets: round(ratio * size) from one
/// pool shared by all agents (at most size - 1) and the rest unique to it.
[[nodiscard]] BenchCase gen_common(std::shared_ptr<const GridMap> map, std::string map_name,
                                   int num_agents, int target_set_size, double shared_ratio,
                                   std::uint64_t seed);

/// File stem of the case, e.g. empty-32-32_group_n10_s3.
[[nodiscard]] std::string case_id(std::string_view map_name, Scenario scenario, int num_agents,
                                  int target_set_size, double shared_ratio, std::uint64_t seed);

struct BenchRecord {
  std::string case_id;
  std::string solver;
  bool solved = false;
  double runtime_ms = 0;
  std::optional<std::int64_t> flowtime;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t nodes_generated = 0;
  std::optional<std::uint64_t> num_roots;
  std::uint64_t ta_calls = 0;
  double ta_ms = 0;
  double low_level_ms = 0;
  double conflict_ms = 0;
  double other_ms = 0;
  /// solved, infeasible, timeout, or error: <message>. Not part of the CSV.
  std::string outcome;
};

using SolverFn = std::function<SolveResult(const TAPFInstance&, const SolverOptions&)>;

/// "itacbs" or "cbsta"; throws std::invalid_argument otherwise.
[[nodiscard]] SolverFn solver_by_name(std::string_view name);

struct NamedSolver {
  std::string name;
  SolverFn solve;
};

struct RunOptions {
  std::chrono::duration<double> timeout{30.0};
  int jobs = 1;
  /// Optional per-run observer; called from the worker thread that runs the
  /// case, and the observer must stay alive until run() returns.
  std::function<const SearchObserver*(std::size_t case_index, std::string_view solver)> observe;
};

/// One record per (case, solver), in case order then solver order. A solver
/// that throws is recorded as unsolved and the run continues.
[[nodiscard]] std::vector<BenchRecord> run(const std::vector<BenchCase>& cases,
                                           const std::vector<NamedSolver>& solvers,
                                           const RunOptions& options);

/// Same, with solvers looked up by name.
[[nodiscard]] std::vector<BenchRecord> run(const std::vector<BenchCase>& cases,
                                           const std::vector<std::string>& solvers,
                                           const RunOptions& options);

/// Record for one finished solve. Timeouts report the cap as runtime and the
/// timer parts are scaled to fit inside it.
[[nodiscard]] BenchRecord make_record(const std::string& case_id, const std::string& solver,
                                      const SolveResult& result,
                                      std::chrono::duration<double> timeout);

inline constexpr std::string_view kCsvHeader =
    "caseId,solver,solved,runtime,flowtime,ctNodesExpanded,ctNodesGenerated,numRoots,taCalls,"
    "taTime,lowLevelTime,conflictDetectTime,otherTime";

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace tapf
