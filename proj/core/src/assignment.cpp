#include "tapf/assignment.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

#include "assignment_kernel.hpp"

namespace tapf {

namespace {
constexpr Potential kFar = std::numeric_limits<Potential>::max();
}

bool AssignmentState::certificate_holds() const {
  const int n = num_agents();
  const int m = num_targets();
  if (static_cast<int>(target_of_.size()) != n || static_cast<int>(agent_of_.size()) != m) {
    return false;
  }
  Cost total{0};
  for (int i = 0; i < n; ++i) {
    const int j = target_of_[i];
    if (j < 0 || j >= m || agent_of_[j] != i) return false;
    const Cost c = costs_(i, j);
    if (c.is_infinite()) return false;
    if (c.value() != agent_pot_[i] + target_pot_[j]) return false;
    total += c;
  }
  for (int j = 0; j < m; ++j) {
    const int i = agent_of_[j];
    if (i >= 0 && target_of_[i] != j) return false;
    if (n < m && target_pot_[j] > 0) return false;
    if (i < 0 && target_pot_[j] != 0) return false;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const Cost c = costs_(i, j);
      if (c.is_finite() && agent_pot_[i] + target_pot_[j] > c.value()) return false;
    }
  }
  return total == total_;
}

namespace detail {

AssignmentState AssignmentKernel::unmatched(const CostTable& costs) {
  AssignmentState s;
  s.costs_ = costs;
  s.target_of_.assign(costs.rows(), -1);
  s.agent_of_.assign(costs.cols(), -1);
  s.agent_pot_.assign(costs.rows(), 0);
  s.target_pot_.assign(costs.cols(), 0);
  return s;
}

bool AssignmentKernel::augment(AssignmentState& s, int row) {
  const int m = s.num_targets();
  auto& u = s.agent_pot_;
  auto& v = s.target_pot_;

  Potential lowest = kFar;
  for (int j = 0; j < m; ++j) {
    const Cost c = s.costs_(row, j);
    if (c.is_finite()) lowest = std::min(lowest, c.value() - v[j]);
  }
  if (lowest == kFar) return false;
  u[row] = lowest;

  std::vector<Potential> dist(m, kFar);
  std::vector<int> via(m, -1);
  std::vector<char> done(m, 0);
  std::vector<int> settled;

  int cur = row;
  Potential base = 0;
  int sink = -1;
  while (true) {
    const auto costs = s.costs_.row(cur);
    for (int j = 0; j < m; ++j) {
      if (done[j] || costs[j].is_infinite()) continue;
      const Potential d = base + costs[j].value() - u[cur] - v[j];
      if (d < dist[j]) {
        dist[j] = d;
        via[j] = cur;
      }
    }
    int next = -1;
    for (int j = 0; j < m; ++j) {
      if (!done[j] && dist[j] != kFar && (next < 0 || dist[j] < dist[next])) next = j;
    }
    if (next < 0) return false;
    done[next] = 1;
    if (s.agent_of_[next] < 0) {
      sink = next;
      break;
    }
    settled.push_back(next);
    cur = s.agent_of_[next];
    base = dist[next];
  }

  const Potential total = dist[sink];
  for (const int j : settled) {
    const Potential delta = total - dist[j];
    v[j] -= delta;
    u[s.agent_of_[j]] += delta;
  }
  u[row] += total;

  for (int j = sink;;) {
    const int r = via[j];
    const int previous = s.target_of_[r];
    s.target_of_[r] = j;
    s.agent_of_[j] = r;
    if (r == row) break;
    j = previous;
  }
  return true;
}

void AssignmentKernel::rebalance_free_target(AssignmentState& s, int col) {
  const int m = s.num_targets();
  auto& u = s.agent_pot_;
  auto& v = s.target_pot_;

  // The slack rows (one per surplus target, all at potential 0) reach target j
  // at reduced cost -v[j]. Search from them until `col` is settled.
  std::vector<Potential> dist(m);
  std::vector<int> via(m, -1);
  std::vector<char> done(m, 0);
  std::vector<int> settled;
  for (int j = 0; j < m; ++j) dist[j] = -v[j];

  while (true) {
    int next = -1;
    for (int j = 0; j < m; ++j) {
      if (!done[j] && dist[j] != kFar && (next < 0 || dist[j] < dist[next])) next = j;
    }
    done[next] = 1;
    if (next == col) break;
    settled.push_back(next);
    const int r = s.agent_of_[next];
    if (r < 0) continue;  // held by another slack row; nothing new reachable
    const auto costs = s.costs_.row(r);
    for (int j = 0; j < m; ++j) {
      if (done[j] || costs[j].is_infinite()) continue;
      const Potential d = dist[next] + costs[j].value() - u[r] - v[j];
      if (d < dist[j]) {
        dist[j] = d;
        via[j] = r;
      }
    }
  }

  const Potential total = dist[col];
  for (const int j : settled) {
    const Potential delta = total - dist[j];
    v[j] -= delta;
    if (s.agent_of_[j] >= 0) u[s.agent_of_[j]] += delta;
  }

  int j = col;
  for (int r = via[j]; r >= 0; r = via[j]) {
    const int previous = s.target_of_[r];
    s.target_of_[r] = j;
    s.agent_of_[j] = r;
    j = previous;
  }
  s.agent_of_[j] = -1;
  normalize(s);
}

void AssignmentKernel::normalize(AssignmentState& s) {
  if (s.num_agents() >= s.num_targets()) return;
  int free = -1;
  for (int j = 0; j < s.num_targets() && free < 0; ++j) {
    if (s.agent_of_[j] < 0) free = j;
  }
  const Potential shift = s.target_pot_[free];
  if (shift == 0) return;
  for (auto& p : s.target_pot_) p -= shift;
  for (auto& p : s.agent_pot_) p += shift;
}

void AssignmentKernel::fix_pair(AssignmentState& s, int row, int col) {
  const int m = s.num_targets();
  std::vector<Cost> r(m, Cost::infinity());
  r[col] = s.costs_(row, col);
  s.costs_.set_row(row, std::move(r));
  for (int i = 0; i < s.num_agents(); ++i) {
    if (i != row) s.costs_.set(i, col, Cost::infinity());
  }
}

void AssignmentKernel::replace_row(AssignmentState& s, int row, std::vector<Cost> values) {
  s.costs_.set_row(row, std::move(values));
}

void AssignmentKernel::release(AssignmentState& s, int row) {
  const int j = s.target_of_[row];
  if (j >= 0) s.agent_of_[j] = -1;
  s.target_of_[row] = -1;
}

void AssignmentKernel::recompute_total(AssignmentState& s) {
  Cost total{0};
  for (int i = 0; i < s.num_agents(); ++i) total += s.costs_(i, s.target_of_[i]);
  s.total_ = total;
}

void AssignmentKernel::refine(AssignmentState& s) {
  const int n = s.num_agents();
  const int m = s.num_targets();
  const auto& u = s.agent_pot_;
  const auto& v = s.target_pot_;
  auto tight = [&](int i, int j) {
    const Cost c = s.costs_(i, j);
    return c.is_finite() && c.value() == u[i] + v[j];
  };
  // Unmatched targets belong to implicit slack rows, tight wherever v == 0.
  auto slack_tight = [&](int j) { return n < m && v[j] == 0; };

  std::vector<char> locked(m, 0);
  std::vector<int> parent(m);
  std::vector<char> seen(m);
  std::deque<int> queue;

  // Alternating cycle through (i, from) and (i, to) in the tight graph that
  // avoids locked targets; records parents and returns whether `to` was hit.
  auto find_cycle = [&](int from, int to) {
    std::ranges::fill(seen, 0);
    queue.clear();
    queue.push_back(from);
    seen[from] = 1;
    parent[from] = -1;
    bool slack_expanded = false;
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop_front();
      const int owner = s.agent_of_[c];
      if (owner < 0) {
        if (slack_expanded) continue;
        slack_expanded = true;
      }
      for (int c2 = 0; c2 < m; ++c2) {
        if (seen[c2] || locked[c2]) continue;
        if (owner >= 0 ? !tight(owner, c2) : !slack_tight(c2)) continue;
        seen[c2] = 1;
        parent[c2] = c;
        if (c2 == to) return true;
        queue.push_back(c2);
      }
    }
    return false;
  };

  for (int i = 0; i < n; ++i) {
    const int current = s.target_of_[i];
    for (int j = 0; j < current; ++j) {
      if (locked[j] || !tight(i, j)) continue;
      if (!find_cycle(j, current)) continue;
      std::vector<int> chain;
      for (int c = current; c >= 0; c = parent[c]) chain.push_back(c);
      std::ranges::reverse(chain);  // j ... current
      std::vector<int> owners(chain.size());
      for (std::size_t t = 0; t < chain.size(); ++t) owners[t] = s.agent_of_[chain[t]];
      for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
        const int o = owners[t];
        s.agent_of_[chain[t + 1]] = o;
        if (o >= 0) s.target_of_[o] = chain[t + 1];
      }
      s.agent_of_[j] = i;
      s.target_of_[i] = j;
      break;
    }
    locked[s.target_of_[i]] = 1;
  }
}

}  // namespace detail

using detail::AssignmentKernel;

std::optional<AssignmentState> hungarian(const CostTable& costs) {
  if (costs.rows() > costs.cols()) {
    throw std::invalid_argument("hungarian: more agents than targets");
  }
  AssignmentState s = AssignmentKernel::unmatched(costs);
  for (int i = 0; i < costs.rows(); ++i) {
    if (!AssignmentKernel::augment(s, i)) return std::nullopt;
  }
  AssignmentKernel::refine(s);
  AssignmentKernel::recompute_total(s);
  return s;
}

std::optional<AssignmentState> dynamic_update(AssignmentState s, int agent,
                                              std::vector<Cost> new_row) {
  AssignmentKernel::replace_row(s, agent, std::move(new_row));
  const int released = s.target_of(agent);
  AssignmentKernel::release(s, agent);
  if (!AssignmentKernel::augment(s, agent)) return std::nullopt;
  if (released >= 0 && s.agent_of(released) < 0 && s.target_potentials()[released] != 0) {
    AssignmentKernel::rebalance_free_target(s, released);
  }
  AssignmentKernel::recompute_total(s);
  return s;
}

void lexicographic_refine(AssignmentState& state) { AssignmentKernel::refine(state); }

}  // namespace tapf
