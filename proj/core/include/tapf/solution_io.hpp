#pragma once

#include <iosfwd>
#include <string_view>

#include "tapf/gridmap.hpp"
#include "tapf/search.hpp"

namespace tapf {

/// Writes a plan file: solver, status, flowtime, the deterministic counters,
/// each agent's assigned target and its vertex-time schedule. Timings are left
/// out so equal runs produce equal bytes. The solution must be present when
/// the status is Solved.
void write_solution(std::ostream& out, const TAPFInstance& instance, std::string_view solver,
                    const SolveResult& result);

/// Reads the assignment and schedules of a plan file back into a Solution.
/// Targets that are not in the instance map to index -1. Throws ParseError.
[[nodiscard]] Solution read_solution(std::istream& in, const TAPFInstance& instance);

}  // namespace tapf
