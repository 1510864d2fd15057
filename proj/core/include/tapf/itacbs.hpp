#pragma once

#include <optional>
#include <vector>

#include "tapf/assignment.hpp"
#include "tapf/lowlevel.hpp"
#include "tapf/search.hpp"

namespace tapf {

/// Constraint-tree node carrying its own cost matrix and optimal assignment.
/// The plan is read from the matrix's stored paths.
struct CTNode {
  Cost cost;
  ConstraintSet omega;
  CostMatrix matrix;
  AssignmentState assignment;
  int conflicts = 0;

  [[nodiscard]] std::vector<const Path*> plan() const;
};

/// Single constraint tree; the assignment is re-optimised at every node.
class ItaCbs {
 public:
  explicit ItaCbs(const TAPFInstance& instance) : planner_(instance) {}

  /// Absent when the unconstrained cost matrix has no complete assignment.
  [[nodiscard]] std::optional<CTNode> make_root();

  /// One child per agent of the conflict; children without a complete
  /// assignment are dropped.
  [[nodiscard]] std::vector<CTNode> branch(const CTNode& node, const Conflict& conflict);

  [[nodiscard]] SolveResult solve(const SolverOptions& options = {});

  [[nodiscard]] const SolveStats& stats() const { return stats_; }

 private:
  int count_conflicts(const CTNode& node);

  LowLevelPlanner planner_;
  SolveStats stats_;
};

[[nodiscard]] SolveResult solve_itacbs(const TAPFInstance& instance,
                                       const SolverOptions& options = {});

}  // namespace tapf
