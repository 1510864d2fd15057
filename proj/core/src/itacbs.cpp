#include "tapf/itacbs.hpp"

#include <algorithm>
#include <cassert>
#include <memory>

namespace tapf {

std::vector<const Path*> CTNode::plan() const {
  std::vector<const Path*> out(assignment.num_agents());
  for (int i = 0; i < assignment.num_agents(); ++i) {
    out[i] = matrix.path(i, assignment.target_of(i));
  }
  return out;
}

int ItaCbs::count_conflicts(const CTNode& node) {
  detail::ScopedTimer timer(stats_.conflict_time);
  const auto plan = node.plan();
  return count_conflicting_pairs(plan);
}

std::optional<CTNode> ItaCbs::make_root() {
  CTNode root;
  {
    detail::ScopedTimer timer(stats_.low_level_time);
    root.matrix = planner_.build_cost_matrix(root.omega);
  }
  std::optional<AssignmentState> state;
  {
    detail::ScopedTimer timer(stats_.ta_time);
    ++stats_.ta_calls;
    state = hungarian(root.matrix.costs());
  }
  if (!state) return std::nullopt;
  root.assignment = std::move(*state);
  root.cost = root.assignment.total_cost();
  root.conflicts = count_conflicts(root);
  return root;
}

std::vector<CTNode> ItaCbs::branch(const CTNode& node, const Conflict& conflict) {
  std::vector<CTNode> children;
  for (const int k : {conflict.first, conflict.second}) {
    const Constraint c = constraint_for(conflict, k);
    assert(!node.omega.contains(c));
    CTNode child;
    child.omega = node.omega.with(c);
    {
      detail::ScopedTimer timer(stats_.low_level_time);
      child.matrix = planner_.update_cost_row(node.matrix, k, child.omega);
    }
    const auto row = child.matrix.costs().row(k);
    std::optional<AssignmentState> state;
    {
      detail::ScopedTimer timer(stats_.ta_time);
      ++stats_.ta_calls;
      state = dynamic_update(node.assignment, k, std::vector<Cost>(row.begin(), row.end()));
    }
    if (!state) continue;
    child.assignment = std::move(*state);
    child.cost = child.assignment.total_cost();
    child.conflicts = count_conflicts(child);
    children.push_back(std::move(child));
  }
  return children;
}

namespace {

struct OpenEntry {
  detail::OpenKey key;
  std::uint64_t id;
  std::uint64_t parent;
  std::unique_ptr<CTNode> node;
};

struct EntryLater {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const { return a.key > b.key; }
};

NodeEvent event_of(const CTNode& node, std::uint64_t id, std::uint64_t parent) {
  NodeEvent e;
  e.id = id;
  e.parent = parent;
  e.cost = node.cost;
  e.omega = &node.omega;
  e.target_of = node.assignment.assignment().target_of;
  e.root = parent == 0;
  return e;
}

}  // namespace

SolveResult ItaCbs::solve(const SolverOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const auto deadline =
      started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(options.timeout);
  const SearchObserver* observer = options.observer;
  SolveResult result;

  auto finish = [&](SolveStatus status) {
    stats_.runtime = std::chrono::steady_clock::now() - started;
    stats_.low_level_searches = planner_.searches();
    result.status = status;
    result.stats = stats_;
    return result;
  };

  std::vector<OpenEntry> open;
  std::uint64_t seq = 0;
  auto push = [&](CTNode node, std::uint64_t parent) {
    const std::uint64_t id = ++seq;
    ++stats_.nodes_generated;
    auto owned = std::make_unique<CTNode>(std::move(node));
    if (observer != nullptr && observer->on_generated) {
      observer->on_generated(event_of(*owned, id, parent));
    }
    open.push_back({{owned->cost, owned->conflicts, id}, id, parent, std::move(owned)});
    std::ranges::push_heap(open, EntryLater{});
  };

  if (auto root = make_root()) push(std::move(*root), 0);

  while (!open.empty()) {
    if (std::chrono::steady_clock::now() >= deadline) return finish(SolveStatus::Timeout);
    std::ranges::pop_heap(open, EntryLater{});
    OpenEntry top = std::move(open.back());
    open.pop_back();
    const CTNode& node = *top.node;
    ++stats_.nodes_expanded;
    if (observer != nullptr && observer->on_expanded) {
      observer->on_expanded(event_of(node, top.id, top.parent));
    }

    const auto plan = node.plan();
    std::optional<Conflict> conflict;
    {
      detail::ScopedTimer timer(stats_.conflict_time);
      conflict = first_conflict(plan);
    }
    if (!conflict) {
      result.solution = detail::make_solution(plan, node.assignment.assignment().target_of);
      return finish(SolveStatus::Solved);
    }
    for (CTNode& child : branch(node, *conflict)) push(std::move(child), top.id);
  }
  return finish(SolveStatus::Infeasible);
}

SolveResult solve_itacbs(const TAPFInstance& instance, const SolverOptions& options) {
  ItaCbs solver(instance);
  return solver.solve(options);
}

}  // namespace tapf
