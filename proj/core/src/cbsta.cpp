#include "tapf/cbsta.hpp"

#include <algorithm>
#include <cassert>

namespace tapf {

std::vector<const Path*> CbsTaNode::plan() const {
  std::vector<const Path*> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(p.get());
  return out;
}

namespace {

struct OpenEntry {
  detail::OpenKey key;
  std::uint64_t id;
  std::uint64_t parent;
  std::unique_ptr<CbsTaNode> node;
};

struct EntryLater {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const { return a.key > b.key; }
};

NodeEvent event_of(const CbsTaNode& node, std::uint64_t id, std::uint64_t parent) {
  NodeEvent e;
  e.id = id;
  e.parent = parent;
  e.cost = node.cost;
  e.omega = &node.omega;
  e.target_of = node.assignment->target_of;
  e.root = node.root;
  return e;
}

class CbsTa {
 public:
  CbsTa(const TAPFInstance& instance, const SolverOptions& options)
      : instance_(instance), planner_(instance), options_(options) {}

  SolveResult solve();

 private:
  void push(CbsTaNode node, std::uint64_t parent);
  bool push_next_root();
  int count_conflicts(const CbsTaNode& node);

  const TAPFInstance& instance_;
  LowLevelPlanner planner_;
  SolverOptions options_;
  SolveStats stats_;
  CostMatrix base_;
  std::unique_ptr<KBestEnumerator> roots_;
  std::vector<OpenEntry> open_;
  std::uint64_t seq_ = 0;
};

int CbsTa::count_conflicts(const CbsTaNode& node) {
  detail::ScopedTimer timer(stats_.conflict_time);
  const auto plan = node.plan();
  return count_conflicting_pairs(plan);
}

void CbsTa::push(CbsTaNode node, std::uint64_t parent) {
  const std::uint64_t id = ++seq_;
  ++stats_.nodes_generated;
  auto owned = std::make_unique<CbsTaNode>(std::move(node));
  const SearchObserver* observer = options_.observer;
  if (observer != nullptr && observer->on_generated) {
    observer->on_generated(event_of(*owned, id, parent));
  }
  open_.push_back({{owned->cost, owned->conflicts, id}, id, parent, std::move(owned)});
  std::ranges::push_heap(open_, EntryLater{});
}

bool CbsTa::push_next_root() {
  std::optional<Assignment> next;
  {
    detail::ScopedTimer timer(stats_.ta_time);
    ++stats_.ta_calls;
    next = roots_->next();
  }
  if (!next) return false;
  CbsTaNode root;
  root.root = true;
  root.cost = next->total_cost;
  for (int i = 0; i < instance_.num_agents(); ++i) {
    root.paths.push_back(base_.shared_path(i, next->target_of[i]));
  }
  root.assignment = std::make_shared<const Assignment>(std::move(*next));
  root.conflicts = count_conflicts(root);
  ++stats_.num_roots;
  push(std::move(root), 0);
  return true;
}

SolveResult CbsTa::solve() {
  const auto started = std::chrono::steady_clock::now();
  const auto deadline =
      started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(options_.timeout);
  SolveResult result;
  auto finish = [&](SolveStatus status) {
    stats_.runtime = std::chrono::steady_clock::now() - started;
    stats_.low_level_searches = planner_.searches();
    result.status = status;
    result.stats = stats_;
    return result;
  };

  {
    detail::ScopedTimer timer(stats_.low_level_time);
    base_ = planner_.build_cost_matrix(ConstraintSet{});
  }
  roots_ = std::make_unique<KBestEnumerator>(base_.costs());
  push_next_root();

  while (!open_.empty()) {
    if (std::chrono::steady_clock::now() >= deadline) return finish(SolveStatus::Timeout);
    std::ranges::pop_heap(open_, EntryLater{});
    OpenEntry top = std::move(open_.back());
    open_.pop_back();
    const CbsTaNode& node = *top.node;
    ++stats_.nodes_expanded;
    if (options_.observer != nullptr && options_.observer->on_expanded) {
      options_.observer->on_expanded(event_of(node, top.id, top.parent));
    }

    const auto plan = node.plan();
    std::optional<Conflict> conflict;
    {
      detail::ScopedTimer timer(stats_.conflict_time);
      conflict = first_conflict(plan);
    }
    if (!conflict) {
      result.solution = detail::make_solution(plan, node.assignment->target_of);
      return finish(SolveStatus::Solved);
    }
    if (node.root) push_next_root();

    for (const int k : {conflict->first, conflict->second}) {
      const Constraint c = constraint_for(*conflict, k);
      assert(!node.omega.contains(c));
      CbsTaNode child;
      child.omega = node.omega.with(c);
      std::optional<Path> path;
      {
        detail::ScopedTimer timer(stats_.low_level_time);
        path = planner_.shortest_path(k, instance_.target(node.assignment->target_of[k]),
                                      child.omega);
      }
      if (!path) continue;
      child.cost = node.cost + Cost(path->cost() - node.paths[k]->cost());
      child.paths = node.paths;
      child.paths[k] = std::make_shared<const Path>(std::move(*path));
      child.assignment = node.assignment;
      child.conflicts = count_conflicts(child);
      push(std::move(child), top.id);
    }
  }
  return finish(SolveStatus::Infeasible);
}

}  // namespace

SolveResult solve_cbsta(const TAPFInstance& instance, const SolverOptions& options) {
  CbsTa solver(instance, options);
  return solver.solve();
}

}  // namespace tapf
