#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tapf/constraints.hpp"
#include "tapf/gridmap.hpp"
#include "tapf/search.hpp"

namespace tapf {

enum class Rule { Shape, Start, Target, Move, Injective, VertexConflict, EdgeConflict, Flowtime };

/// One broken goal condition. Agent indices are zero-based (-1 when not
/// applicable); the message numbers agents from 1.
struct Violation {
  Rule rule;
  int first = -1;
  int second = -1;
  int time = -1;
  std::string message;
};

/// Checks a solution against the problem definition alone: paths start at the
/// starts, end at distinct eligible assigned targets, move along edges, are
/// conflict-free with agents resting at their targets, and the flowtime field
/// equals the sum of arrival times. Empty when the solution is valid.
[[nodiscard]] std::vector<Violation> validate(const TAPFInstance& instance,
                                              const Solution& solution);

/// Thrown when an instance is too large for the exhaustive oracle.
class OracleGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kOracleMaxCells = 30;
inline constexpr int kOracleMaxAgents = 3;

/// Minimum flowtime by uniform-cost search over the joint state space
/// (positions, arrived agents, time), with targets chosen implicitly by where
/// each agent stops. Constraints in `omega` bind their agents, including while
/// resting. Absent when no solution finishes within `horizon` timesteps; the
/// default horizon is |V| + N * (largest BFS distance) + latest constraint time.
/// Throws OracleGuardError beyond 30 passable cells or 3 agents.
[[nodiscard]] std::optional<std::int64_t> brute_force_optimal(
    const TAPFInstance& instance, std::optional<int> horizon = std::nullopt,
    const ConstraintSet& omega = {});

}  // namespace tapf
