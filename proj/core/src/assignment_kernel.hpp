#pragma once

#include "tapf/assignment.hpp"

namespace tapf::detail {

/// Shortest-augmenting-path primitives shared by hungarian, dynamic_update and
/// the K-best enumerator.
struct AssignmentKernel {
  static AssignmentState unmatched(const CostTable& costs);

  /// Dijkstra over reduced costs from the unmatched agent `row` to the first
  /// unmatched target, then dual update and augmentation. Every other agent
  /// reachable through the search must already be matched. False when no
  /// augmenting path exists (the state is then unusable).
  static bool augment(AssignmentState& s, int row);

  /// For rows < cols: an unmatched target `col` with negative potential breaks
  /// the free-target condition. Searches from the implicit pool of slack rows
  /// for the cheapest way to re-cover `col` and releases a different target.
  static void rebalance_free_target(AssignmentState& s, int col);

  /// Shift potentials so unmatched targets sit at 0.
  static void normalize(AssignmentState& s);

  /// Fix (row, col): every other entry of the row and column becomes infinite.
  /// Only unmatched edges are removed, so the certificate is preserved.
  static void fix_pair(AssignmentState& s, int row, int col);

  static void replace_row(AssignmentState& s, int row, std::vector<Cost> values);

  /// Unmatch `row`, leaving its target free.
  static void release(AssignmentState& s, int row);

  static void recompute_total(AssignmentState& s);

  static void refine(AssignmentState& s);
};

}  // namespace tapf::detail
