#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tapf/assignment.hpp"
#include "tapf/constraints.hpp"
#include "tapf/lowlevel.hpp"

namespace tapf {

enum class ConflictKind { Vertex, Edge };

/// First agent is always the smaller index. Vertex conflicts: both agents at
/// `at` at `time`. Edge conflicts: `first` moves at -> to and `second` moves
/// to -> at between time-1 and time.
struct Conflict {
  ConflictKind kind = ConflictKind::Vertex;
  int first = 0;
  int second = 0;
  int time = 0;
  Vertex at{};
  Vertex to{};

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

/// Earliest conflict in the plan; among conflicts at the same timestep the
/// lexicographically smallest agent pair. Agents rest at their last vertex.
[[nodiscard]] std::optional<Conflict> first_conflict(std::span<const Path* const> plan);

/// Number of agent pairs that conflict at least once.
[[nodiscard]] int count_conflicting_pairs(std::span<const Path* const> plan);

/// The constraint that resolves `conflict` for one of its two agents.
[[nodiscard]] Constraint constraint_for(const Conflict& conflict, int agent);

using Duration = std::chrono::nanoseconds;

struct SolveStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t nodes_generated = 0;
  std::uint64_t num_roots = 0;
  std::uint64_t ta_calls = 0;
  std::uint64_t low_level_searches = 0;
  Duration runtime{0};
  Duration ta_time{0};
  Duration low_level_time{0};
  Duration conflict_time{0};

  [[nodiscard]] Duration other_time() const {
    const Duration rest = runtime - ta_time - low_level_time - conflict_time;
    return rest < Duration{0} ? Duration{0} : rest;
  }
};

enum class SolveStatus { Solved, Infeasible, Timeout };

[[nodiscard]] std::string_view to_string(SolveStatus status);

struct Solution {
  std::vector<Path> plan;
  Assignment assignment;
  std::int64_t flowtime = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Solution> solution;
  SolveStats stats;
};

/// A constraint-tree node as seen by an observer.
struct NodeEvent {
  std::uint64_t id = 0;
  /// Id of the node it was branched from; 0 for roots.
  std::uint64_t parent = 0;
  Cost cost;
  const ConstraintSet* omega = nullptr;
  std::vector<int> target_of;
  bool root = false;
};

/// Optional hooks for tests and diagnostics. Node ids start at 1.
struct SearchObserver {
  std::function<void(const NodeEvent&)> on_generated;
  std::function<void(const NodeEvent&)> on_expanded;
};

struct SolverOptions {
  std::chrono::duration<double> timeout{30.0};
  const SearchObserver* observer = nullptr;
};

namespace detail {

/// Adds the lifetime of the scope to an accumulator.
class ScopedTimer {
 public:
  explicit ScopedTimer(Duration& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~ScopedTimer() { sink_ += std::chrono::steady_clock::now() - start_; }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  Duration& sink_;
  std::chrono::steady_clock::time_point start_;
};

/// OPEN ordering shared by both solvers: cost, then fewer conflicting pairs,
/// then insertion order.
struct OpenKey {
  Cost cost;
  int conflicts = 0;
  std::uint64_t seq = 0;

  friend auto operator<=>(const OpenKey&, const OpenKey&) = default;
};

Solution make_solution(std::span<const Path* const> plan, const std::vector<int>& target_of);

}  // namespace detail

}  // namespace tapf
