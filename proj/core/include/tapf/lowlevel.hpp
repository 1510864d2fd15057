#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tapf/constraints.hpp"
#include "tapf/cost.hpp"
#include "tapf/gridmap.hpp"

namespace tapf {

/// Vertex sequence v_0..v_T. The agent rests at v_T for every t >= T.
struct Path {
  std::vector<Vertex> vertices;

  [[nodiscard]] int cost() const { return static_cast<int>(vertices.size()) - 1; }
  [[nodiscard]] Vertex at(int t) const {
    return t < static_cast<int>(vertices.size()) ? vertices[t] : vertices.back();
  }
  [[nodiscard]] Vertex goal() const { return vertices.back(); }

  friend bool operator==(const Path&, const Path&) = default;
};

/// True if following `path` (and resting at its goal) breaks constraint `c`.
/// The constraint's agent field is not consulted.
[[nodiscard]] bool violates(const Path& path, const Constraint& c);

inline constexpr int kUnreachable = -1;

/// Breadth-first distances from every cell to `goal`; kUnreachable for cells
/// with no path and for blocked cells.
[[nodiscard]] std::vector<int> distances_to(const GridMap& map, Vertex goal);

/// Lazily computed per-goal distance tables, shared read-mostly between
/// threads.
class HeuristicCache {
 public:
  explicit HeuristicCache(const GridMap& map) : map_(&map) {}

  [[nodiscard]] std::span<const int> distances_to(Vertex goal) const;

 private:
  const GridMap* map_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<int, std::unique_ptr<const std::vector<int>>> tables_;
};

/// Space-time A* for one agent. Returns a minimum-cost path from start to goal
/// that respects every constraint on `agent` in `omega`, ending at a time after
/// which no vertex constraint forbids resting at the goal. Absent when no such
/// path exists.
///
/// `goal_distances` must be the table distances_to(map, goal).
[[nodiscard]] std::optional<Path> shortest_path(const GridMap& map, int agent, Vertex start,
                                                Vertex goal, const ConstraintSet& omega,
                                                std::span<const int> goal_distances);

/// Convenience overload that computes the goal distance table itself.
[[nodiscard]] std::optional<Path> shortest_path(const GridMap& map, int agent, Vertex start,
                                                Vertex goal, const ConstraintSet& omega);

/// N x M constrained shortest-path costs plus the path behind each finite
/// entry. Rows are copy-on-write.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(int rows, int cols);

  [[nodiscard]] int rows() const { return costs_.rows(); }
  [[nodiscard]] int cols() const { return costs_.cols(); }

  [[nodiscard]] Cost at(int i, int j) const { return costs_(i, j); }
  [[nodiscard]] const CostTable& costs() const { return costs_; }

  /// Stored path for a finite entry, nullptr for infinite entries.
  [[nodiscard]] const Path* path(int i, int j) const;

  /// Shared handle to the stored path, empty for infinite entries.
  [[nodiscard]] const std::shared_ptr<const Path>& shared_path(int i, int j) const {
    return (*paths_[i])[j];
  }

  void set_row(int i, std::vector<Cost> costs, std::vector<std::shared_ptr<const Path>> paths);

 private:
  using PathRow = std::vector<std::shared_ptr<const Path>>;
  CostTable costs_;
  std::vector<std::shared_ptr<const PathRow>> paths_;
};

/// Low-level search bound to one instance, with a per-instance heuristic cache.
class LowLevelPlanner {
 public:
  explicit LowLevelPlanner(const TAPFInstance& instance)
      : instance_(&instance), heuristic_(instance.map()) {}

  [[nodiscard]] const TAPFInstance& instance() const { return *instance_; }

  [[nodiscard]] std::optional<Path> shortest_path(int agent, Vertex goal,
                                                  const ConstraintSet& omega) const;

  /// Every eligible (i, j) entry is the constrained shortest-path cost; all
  /// other entries are infinite.
  [[nodiscard]] CostMatrix build_cost_matrix(const ConstraintSet& omega) const;

  /// Recomputes row `agent` under `omega`; other rows are shared with `matrix`.
  /// `omega` must extend the matrix's constraint set by constraints on `agent`
  /// only. Stored paths that do not break any constraint on `agent` are
  /// kept, since adding constraints never lowers a cost.
  [[nodiscard]] CostMatrix update_cost_row(const CostMatrix& matrix, int agent,
                                           const ConstraintSet& omega) const;

  /// Number of A* invocations so far (thread-unsafe counter, for stats).
  [[nodiscard]] std::size_t searches() const { return searches_; }

 private:
  std::vector<Cost> row_costs(int agent, const ConstraintSet& omega,
                              std::vector<std::shared_ptr<const Path>>& paths,
                              const CostMatrix* previous) const;

  const TAPFInstance* instance_;
  HeuristicCache heuristic_;
  mutable std::size_t searches_ = 0;
};

}  // namespace tapf
