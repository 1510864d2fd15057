#include "tapf/lowlevel.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <queue>
#include <tuple>

namespace tapf {

bool violates(const Path& path, const Constraint& c) {
  if (c.kind == ConstraintKind::Vertex) return path.at(c.time) == c.at;
  if (c.time < 1) return false;
  return path.at(c.time - 1) == c.from && path.at(c.time) == c.at;
}

std::vector<int> distances_to(const GridMap& map, Vertex goal) {
  std::vector<int> dist(map.num_cells(), kUnreachable);
  if (!map.passable(goal)) return dist;
  std::deque<Vertex> queue{goal};
  dist[map.index(goal)] = 0;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    const int d = dist[map.index(v)];
    map.for_each_neighbor(v, [&](Vertex u) {
      int& du = dist[map.index(u)];
      if (du == kUnreachable) {
        du = d + 1;
        queue.push_back(u);
      }
    });
  }
  return dist;
}

std::span<const int> HeuristicCache::distances_to(Vertex goal) const {
  const int key = map_->index(goal);
  {
    std::lock_guard lock(mutex_);
    if (auto it = tables_.find(key); it != tables_.end()) return *it->second;
  }
  auto table = std::make_unique<const std::vector<int>>(tapf::distances_to(*map_, goal));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = tables_.try_emplace(key, std::move(table));
  return *it->second;
}

namespace {

struct AgentConstraints {
  std::vector<std::pair<int, int>> vertex;          // (time, cell), sorted
  std::vector<std::tuple<int, int, int>> edge;      // (time, from, to), sorted
  int last_time = 0;
  int goal_last_time = -1;

  [[nodiscard]] bool blocks_vertex(int cell, int t) const {
    return !vertex.empty() && std::ranges::binary_search(vertex, std::pair{t, cell});
  }
  [[nodiscard]] bool blocks_edge(int from, int to, int t) const {
    return !edge.empty() && std::ranges::binary_search(edge, std::tuple{t, from, to});
  }
};

AgentConstraints collect(const GridMap& map, int agent, Vertex goal, const ConstraintSet& omega) {
  AgentConstraints out;
  omega.for_each([&](const Constraint& c) {
    if (c.agent != agent) return;
    out.last_time = std::max(out.last_time, c.time);
    if (c.kind == ConstraintKind::Vertex) {
      out.vertex.emplace_back(c.time, map.index(c.at));
      if (c.at == goal) out.goal_last_time = std::max(out.goal_last_time, c.time);
    } else {
      out.edge.emplace_back(c.time, map.index(c.from), map.index(c.at));
    }
  });
  std::ranges::sort(out.vertex);
  std::ranges::sort(out.edge);
  return out;
}

struct SearchNode {
  int cell;
  int time;
  int parent;
};

struct OpenEntry {
  int f;
  int g;
  int seq;
  int node;

  // Min-heap on f; larger g first on ties; then insertion order.
  bool operator<(const OpenEntry& o) const {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g < o.g;
    return seq > o.seq;
  }
};

}  // namespace

std::optional<Path> shortest_path(const GridMap& map, int agent, Vertex start, Vertex goal,
                                  const ConstraintSet& omega, std::span<const int> goal_distances) {
  if (!map.passable(start) || !map.passable(goal)) return std::nullopt;
  if (goal_distances[map.index(start)] == kUnreachable) return std::nullopt;

  const AgentConstraints cons = collect(map, agent, goal, omega);
  const int start_cell = map.index(start);
  const int goal_cell = map.index(goal);
  if (cons.blocks_vertex(start_cell, 0)) return std::nullopt;

  // Times past the last constraint are indistinguishable; they share one layer.
  const int free_layer = cons.last_time + 1;
  const int cells = map.num_cells();
  auto key = [&](int cell, int t) {
    return static_cast<std::size_t>(std::min(t, free_layer)) * cells + cell;
  };
  std::vector<int> best_time(static_cast<std::size_t>(free_layer + 1) * cells, INT_MAX);
  std::vector<std::uint8_t> closed(best_time.size(), 0);

  std::vector<SearchNode> nodes;
  std::priority_queue<OpenEntry> open;
  int seq = 0;
  nodes.push_back({start_cell, 0, -1});
  best_time[key(start_cell, 0)] = 0;
  open.push({goal_distances[start_cell], 0, seq++, 0});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const SearchNode cur = nodes[top.node];
    const auto k = key(cur.cell, cur.time);
    if (closed[k]) continue;
    closed[k] = 1;

    if (cur.cell == goal_cell && cur.time > cons.goal_last_time) {
      Path path;
      path.vertices.resize(cur.time + 1);
      for (int n = top.node; n >= 0; n = nodes[n].parent) {
        path.vertices[nodes[n].time] = map.vertex(nodes[n].cell);
      }
      return path;
    }

    const int next_time = cur.time + 1;
    map.for_each_neighbor(map.vertex(cur.cell), [&](Vertex v) {
      const int cell = map.index(v);
      if (cons.blocks_vertex(cell, next_time) || cons.blocks_edge(cur.cell, cell, next_time)) {
        return;
      }
      const auto nk = key(cell, next_time);
      if (closed[nk] || best_time[nk] <= next_time) return;
      best_time[nk] = next_time;
      nodes.push_back({cell, next_time, top.node});
      open.push({next_time + goal_distances[cell], next_time, seq++,
                 static_cast<int>(nodes.size()) - 1});
    });
  }
  return std::nullopt;
}

std::optional<Path> shortest_path(const GridMap& map, int agent, Vertex start, Vertex goal,
                                  const ConstraintSet& omega) {
  const auto dist = distances_to(map, goal);
  return shortest_path(map, agent, start, goal, omega, dist);
}

// ---------------------------------------------------------------------------

CostMatrix::CostMatrix(int rows, int cols) : costs_(rows, cols) {
  auto empty = std::make_shared<const PathRow>(cols);
  paths_.assign(rows, empty);
}

const Path* CostMatrix::path(int i, int j) const { return (*paths_[i])[j].get(); }

void CostMatrix::set_row(int i, std::vector<Cost> costs,
                         std::vector<std::shared_ptr<const Path>> paths) {
  costs_.set_row(i, std::move(costs));
  paths_[i] = std::make_shared<const PathRow>(std::move(paths));
}

std::optional<Path> LowLevelPlanner::shortest_path(int agent, Vertex goal,
                                                   const ConstraintSet& omega) const {
  ++searches_;
  return tapf::shortest_path(instance_->map(), agent, instance_->start(agent), goal, omega,
                             heuristic_.distances_to(goal));
}

std::vector<Cost> LowLevelPlanner::row_costs(int agent, const ConstraintSet& omega,
                                             std::vector<std::shared_ptr<const Path>>& paths,
                                             const CostMatrix* previous) const {
  const int m = instance_->num_targets();
  std::vector<Cost> costs(m, Cost::infinity());
  paths.assign(m, nullptr);

  std::vector<Constraint> mine;
  if (previous != nullptr) mine = omega.for_agent(agent);

  for (const int j : instance_->targets_of(agent)) {
    if (previous != nullptr) {
      if (previous->at(agent, j).is_infinite()) continue;
      const auto& old = previous->shared_path(agent, j);
      const bool still_valid =
          std::ranges::none_of(mine, [&](const Constraint& c) { return violates(*old, c); });
      if (still_valid) {
        costs[j] = previous->at(agent, j);
        paths[j] = old;
        continue;
      }
    }
    if (auto p = shortest_path(agent, instance_->target(j), omega)) {
      costs[j] = Cost(p->cost());
      paths[j] = std::make_shared<const Path>(std::move(*p));
    }
  }
  return costs;
}

CostMatrix LowLevelPlanner::build_cost_matrix(const ConstraintSet& omega) const {
  CostMatrix out(instance_->num_agents(), instance_->num_targets());
  for (int i = 0; i < instance_->num_agents(); ++i) {
    std::vector<std::shared_ptr<const Path>> paths;
    auto costs = row_costs(i, omega, paths, nullptr);
    out.set_row(i, std::move(costs), std::move(paths));
  }
  return out;
}

CostMatrix LowLevelPlanner::update_cost_row(const CostMatrix& matrix, int agent,
                                            const ConstraintSet& omega) const {
  CostMatrix out = matrix;
  std::vector<std::shared_ptr<const Path>> paths;
  auto costs = row_costs(agent, omega, paths, &matrix);
  out.set_row(agent, std::move(costs), std::move(paths));
  return out;
}

}  // namespace tapf
