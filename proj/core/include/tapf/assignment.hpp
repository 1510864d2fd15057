#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tapf/cost.hpp"

namespace tapf {

namespace detail {
struct AssignmentKernel;
}

using Potential = std::int64_t;

/// Injective agent -> target matching with its total cost.
struct Assignment {
  std::vector<int> target_of;
  Cost total_cost;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Optimal matching for a cost table together with the dual potentials that
/// certify it (min-cost convention):
///
///   agent_potential(i) + target_potential(j) <= cost(i, j)   for finite entries
///   equality on matched entries
///   unmatched targets carry potential 0, and no target exceeds 0
///
/// Infinite entries are absent edges. States are values; every update returns
/// a new state and leaves the input untouched.
class AssignmentState {
 public:
  [[nodiscard]] const CostTable& costs() const { return costs_; }
  [[nodiscard]] int num_agents() const { return costs_.rows(); }
  [[nodiscard]] int num_targets() const { return costs_.cols(); }

  [[nodiscard]] int target_of(int agent) const { return target_of_[agent]; }
  /// Agent matched to target j, or -1.
  [[nodiscard]] int agent_of(int target) const { return agent_of_[target]; }
  [[nodiscard]] Cost total_cost() const { return total_; }
  [[nodiscard]] Assignment assignment() const { return {target_of_, total_}; }

  [[nodiscard]] std::span<const Potential> agent_potentials() const { return agent_pot_; }
  [[nodiscard]] std::span<const Potential> target_potentials() const { return target_pot_; }

  /// Checks completeness, injectivity, dual feasibility, tightness and the
  /// free-target condition. Used by tests and debug assertions.
  [[nodiscard]] bool certificate_holds() const;

 private:
  friend struct detail::AssignmentKernel;

  CostTable costs_;
  std::vector<int> target_of_;
  std::vector<int> agent_of_;
  std::vector<Potential> agent_pot_;
  std::vector<Potential> target_pot_;
  Cost total_ = Cost::infinity();
};

/// Minimum-cost complete matching of all agents (rows) into distinct targets
/// (columns) over finite entries; rows <= cols is required. Among optimal
/// matchings the lexicographically smallest target vector is returned.
/// Absent when no complete matching exists. O(N^2 M) plus the tie-break pass.
[[nodiscard]] std::optional<AssignmentState> hungarian(const CostTable& costs);

/// Replaces row `agent` with `new_row` and re-optimises from `state` with a
/// single shortest augmenting path from the unmatched agent, plus at most one
/// rebalancing pass for the released target. O(M^2). Ties are broken
/// deterministically but not lexicographically. Absent when the updated table
/// has no complete matching.
[[nodiscard]] std::optional<AssignmentState> dynamic_update(AssignmentState state, int agent,
                                                            std::vector<Cost> new_row);

/// Rewrites an optimal state into the lexicographically smallest optimal
/// matching; potentials are unchanged.
void lexicographic_refine(AssignmentState& state);

/// Enumerates complete matchings in nondecreasing total cost, ties in
/// lexicographic order of the target vector.
///
/// Murty partitioning: each frontier node fixes some (agent, target) pairs and
/// forbids others, and stores its best completion. Children of an emitted node
/// are solved from its state by one dynamic_update each.
class KBestEnumerator {
 public:
  explicit KBestEnumerator(CostTable base);

  /// Next-best distinct matching; absent once every matching was emitted.
  [[nodiscard]] std::optional<Assignment> next();

  [[nodiscard]] std::size_t emitted() const { return emitted_; }

 private:
  struct Partition {
    AssignmentState state;
    std::vector<bool> fixed;
  };
  struct Later {
    bool operator()(const Partition& a, const Partition& b) const;
  };

  void push(Partition p);
  void split(const Partition& p);

  CostTable base_;
  std::vector<Partition> frontier_;
  std::optional<Partition> pending_split_;
  bool started_ = false;
  std::size_t emitted_ = 0;
};

}  // namespace tapf
