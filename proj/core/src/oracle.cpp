#include <algorithm>
#include <queue>
#include <unordered_set>
#include <unordered_map>

#include "tapf/validate.hpp"

namespace tapf {

namespace {

// Exhaustive search written against the problem definition only; it shares no
// code with the solvers or their low-level search.
class JointSearch {
 public:
  JointSearch(const TAPFInstance& instance, const ConstraintSet& omega)
      : inst_(instance), n_(instance.num_agents()) {
    const GridMap& map = instance.map();
    for (const Vertex v : map.passable_cells()) {
      id_of_.emplace(map.index(v), static_cast<int>(cells_.size()));
      cells_.push_back(v);
    }
    for (const Vertex v : cells_) {
      std::vector<int> next;
      for (const Vertex u : map.neighbors(v)) next.push_back(id_of_.at(map.index(u)));
      moves_.push_back(std::move(next));
    }
    omega.for_each([&](const Constraint& c) {
      latest_ = std::max(latest_, c.time);
      if (c.kind == ConstraintKind::Vertex) {
        vertex_.insert(key(c.agent, id(c.at), -1, c.time));
      } else {
        edge_.insert(key(c.agent, id(c.from), id(c.at), c.time));
      }
    });
  }

  [[nodiscard]] int latest_constraint() const { return latest_; }

  /// Largest finite BFS distance from any target.
  [[nodiscard]] int farthest_from_targets() const {
    int farthest = 0;
    for (const Vertex g : inst_.targets()) {
      std::vector<int> dist(cells_.size(), -1);
      std::queue<int> queue;
      dist[id(g)] = 0;
      queue.push(id(g));
      while (!queue.empty()) {
        const int c = queue.front();
        queue.pop();
        farthest = std::max(farthest, dist[c]);
        for (const int d : moves_[c]) {
          if (dist[d] < 0) {
            dist[d] = dist[c] + 1;
            queue.push(d);
          }
        }
      }
    }
    return farthest;
  }

  std::optional<std::int64_t> run(int horizon) {
    State s0;
    for (int i = 0; i < n_; ++i) {
      s0.pos[i] = id(inst_.start(i));
      if (blocked_vertex(i, s0.pos[i], 0)) return std::nullopt;
    }
    using Entry = std::pair<std::int64_t, std::uint64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::unordered_map<std::uint64_t, std::pair<std::int64_t, State>> best;
    const auto k0 = encode(s0);
    best.emplace(k0, std::pair{0, s0});
    open.emplace(0, k0);

    while (!open.empty()) {
      const auto [g, k] = open.top();
      open.pop();
      const auto& [bg, s] = best.at(k);
      if (g != bg) continue;
      if (s.arrived == all()) return g;
      const State cur = s;
      expand(cur, g, horizon, [&](const State& next, std::int64_t ng) {
        const auto nk = encode(next);
        auto it = best.find(nk);
        if (it != best.end() && it->second.first <= ng) return;
        best.insert_or_assign(nk, std::pair{ng, next});
        open.emplace(ng, nk);
      });
    }
    return std::nullopt;
  }

 private:
  struct State {
    int pos[kOracleMaxAgents] = {0, 0, 0};
    unsigned arrived = 0;
    int time = 0;
  };

  [[nodiscard]] unsigned all() const { return (1U << n_) - 1; }

  int id(Vertex v) const {
    auto it = id_of_.find(inst_.map().index(v));
    return it == id_of_.end() ? -1 : it->second;
  }

  static std::uint64_t key(int agent, int a, int b, int t) {
    return (static_cast<std::uint64_t>(t) << 24) | (static_cast<std::uint64_t>(agent) << 16) |
           (static_cast<std::uint64_t>(a + 1) << 8) | static_cast<std::uint64_t>(b + 1);
  }

  bool blocked_vertex(int agent, int cell, int t) const {
    return vertex_.contains(key(agent, cell, -1, t));
  }

  // Agent may stay at `cell` from time t onward.
  bool may_rest(int agent, int cell, int t) const {
    for (int u = t; u <= latest_; ++u) {
      if (blocked_vertex(agent, cell, u)) return false;
    }
    return true;
  }

  bool eligible_at(int agent, int cell) const {
    for (const int j : inst_.targets_of(agent)) {
      if (id(inst_.target(j)) == cell) return true;
    }
    return false;
  }

  std::uint64_t encode(const State& s) const {
    // Time only matters while constraints remain ahead.
    std::uint64_t k = static_cast<std::uint64_t>(std::min(s.time, latest_ + 1));
    k = k * 8 + s.arrived;
    for (int i = 0; i < n_; ++i) k = k * 32 + static_cast<std::uint64_t>(s.pos[i]);
    return k;
  }

  template <class Emit>
  void expand(const State& s, std::int64_t g, int horizon, Emit&& emit) const {
    // Active agents may declare arrival now; the rest move one step.
    const unsigned active = all() & ~s.arrived;
    for (unsigned stop = active;; stop = (stop - 1) & active) {
      bool ok = true;
      for (int i = 0; i < n_ && ok; ++i) {
        if ((stop >> i & 1U) != 0) ok = eligible_at(i, s.pos[i]) && may_rest(i, s.pos[i], s.time);
      }
      if (ok) {
        const unsigned arrived = s.arrived | stop;
        if (arrived == all()) {
          State done = s;
          done.arrived = arrived;
          emit(done, g);
        } else if (s.time < horizon) {
          step(s, arrived, g, emit);
        }
      }
      if (stop == 0) break;
    }
  }

  template <class Emit>
  void step(const State& s, unsigned arrived, std::int64_t g, Emit& emit) const {
    const int t = s.time + 1;
    int movers = 0;
    for (int i = 0; i < n_; ++i) movers += (arrived >> i & 1U) == 0 ? 1 : 0;
    State next = s;
    next.arrived = arrived;
    next.time = t;
    place(s, next, 0, t, g + movers, emit);
  }

  template <class Emit>
  void place(const State& s, State& next, int i, int t, std::int64_t ng, Emit& emit) const {
    if (i == n_) {
      emit(next, ng);
      return;
    }
    if ((next.arrived >> i & 1U) != 0) {
      next.pos[i] = s.pos[i];
      if (collides(s, next, i)) return;
      place(s, next, i + 1, t, ng, emit);
      return;
    }
    for (const int c : moves_[s.pos[i]]) {
      if (blocked_vertex(i, c, t) || edge_.contains(key(i, s.pos[i], c, t))) continue;
      next.pos[i] = c;
      if (collides(s, next, i)) continue;
      place(s, next, i + 1, t, ng, emit);
    }
  }

  // Agent i against agents placed before it.
  static bool collides(const State& s, const State& next, int i) {
    for (int j = 0; j < i; ++j) {
      if (next.pos[j] == next.pos[i]) return true;
      if (next.pos[j] == s.pos[i] && next.pos[i] == s.pos[j] && s.pos[i] != s.pos[j]) return true;
    }
    return false;
  }

  const TAPFInstance& inst_;
  int n_;
  std::vector<Vertex> cells_;
  std::unordered_map<int, int> id_of_;
  std::vector<std::vector<int>> moves_;
  std::unordered_set<std::uint64_t> vertex_;
  std::unordered_set<std::uint64_t> edge_;
  int latest_ = -1;
};

}  // namespace

std::optional<std::int64_t> brute_force_optimal(const TAPFInstance& instance,
                                                std::optional<int> horizon,
                                                const ConstraintSet& omega) {
  if (instance.map().num_passable() > kOracleMaxCells || instance.num_agents() > kOracleMaxAgents) {
    throw OracleGuardError("oracle limited to 30 passable cells and 3 agents");
  }
  JointSearch search(instance, omega);
  if (!horizon) {
    horizon = instance.map().num_passable() + instance.num_agents() * search.farthest_from_targets() +
              std::max(0, search.latest_constraint());
  }
  return search.run(*horizon);
}

}  // namespace tapf
