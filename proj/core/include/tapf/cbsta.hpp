#pragma once

#include <memory>
#include <vector>

#include "tapf/assignment.hpp"
#include "tapf/lowlevel.hpp"
#include "tapf/search.hpp"

namespace tapf {

/// Node of one constraint tree in the forest. The assignment is fixed per tree.
struct CbsTaNode {
  Cost cost;
  ConstraintSet omega;
  std::vector<std::shared_ptr<const Path>> paths;
  std::shared_ptr<const Assignment> assignment;
  bool root = false;
  int conflicts = 0;

  [[nodiscard]] std::vector<const Path*> plan() const;
};

/// CBS forest over target assignments. Roots come from a K-best enumerator
/// seeded with the unconstrained cost matrix; the next root is created only
/// when the latest one is expanded.
[[nodiscard]] SolveResult solve_cbsta(const TAPFInstance& instance,
                                      const SolverOptions& options = {});

}  // namespace tapf
