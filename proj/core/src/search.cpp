#include "tapf/search.hpp"

#include <algorithm>

namespace tapf {

namespace {

int horizon(std::span<const Path* const> plan) {
  int h = 0;
  for (const Path* p : plan) h = std::max(h, p->cost());
  return h;
}

std::optional<Conflict> conflict_at(const Path& a, const Path& b, int i, int j, int t) {
  const Vertex ai = a.at(t);
  const Vertex bj = b.at(t);
  if (ai == bj) return Conflict{ConflictKind::Vertex, i, j, t, ai, {}};
  if (t > 0) {
    const Vertex ap = a.at(t - 1);
    const Vertex bp = b.at(t - 1);
    if (ap == bj && bp == ai) return Conflict{ConflictKind::Edge, i, j, t, ap, ai};
  }
  return std::nullopt;
}

}  // namespace

std::optional<Conflict> first_conflict(std::span<const Path* const> plan) {
  const int n = static_cast<int>(plan.size());
  const int h = horizon(plan);
  for (int t = 0; t <= h; ++t) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (auto c = conflict_at(*plan[i], *plan[j], i, j, t)) return c;
      }
    }
  }
  return std::nullopt;
}

int count_conflicting_pairs(std::span<const Path* const> plan) {
  const int n = static_cast<int>(plan.size());
  int count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int h = std::max(plan[i]->cost(), plan[j]->cost());
      for (int t = 0; t <= h; ++t) {
        if (conflict_at(*plan[i], *plan[j], i, j, t)) {
          ++count;
          break;
        }
      }
    }
  }
  return count;
}

Constraint constraint_for(const Conflict& conflict, int agent) {
  if (conflict.kind == ConflictKind::Vertex) {
    return Constraint::vertex(agent, conflict.at, conflict.time);
  }
  if (agent == conflict.first) return Constraint::edge(agent, conflict.at, conflict.to, conflict.time);
  return Constraint::edge(agent, conflict.to, conflict.at, conflict.time);
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Timeout: return "timeout";
  }
  return "unknown";
}

namespace detail {

Solution make_solution(std::span<const Path* const> plan, const std::vector<int>& target_of) {
  Solution s;
  Cost total{0};
  for (const Path* p : plan) {
    s.plan.push_back(*p);
    s.flowtime += p->cost();
    total += Cost(p->cost());
  }
  s.assignment = {target_of, total};
  return s;
}

}  // namespace detail

}  // namespace tapf
