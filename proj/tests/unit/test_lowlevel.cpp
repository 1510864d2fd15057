#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "tapf/lowlevel.hpp"

using namespace tapf;

namespace {

std::shared_ptr<const GridMap> open_map(int w, int h) {
  return std::make_shared<const GridMap>(w, h, std::vector<std::uint8_t>(w * h, 1));
}

ConstraintSet set_of(const std::vector<Constraint>& cs) {
  ConstraintSet s;
  for (const auto& c : cs) s = s.with(c);
  return s;
}

bool path_respects(const Path& p, int agent, const ConstraintSet& omega) {
  for (const auto& c : omega.for_agent(agent)) {
    if (violates(p, c)) return false;
  }
  return true;
}

bool path_moves_on_grid(const GridMap& map, const Path& p) {
  for (std::size_t t = 0; t + 1 < p.vertices.size(); ++t) {
    const auto n = map.neighbors(p.vertices[t]);
    if (std::ranges::find(n, p.vertices[t + 1]) == n.end()) return false;
  }
  return true;
}

const Vertex a{0, 0}, b{1, 0}, c{2, 0}, d{3, 0}, e{4, 0};

}  // namespace

TEST_CASE("unconstrained path on an open grid has Manhattan length") {
  const auto map = open_map(5, 5);
  const auto p = shortest_path(*map, 0, {0, 0}, {3, 2}, {});
  REQUIRE(p);
  CHECK(p->cost() == 5);
  CHECK(p->vertices.front() == Vertex{0, 0});
  CHECK(p->goal() == Vertex{3, 2});
  CHECK(path_moves_on_grid(*map, *p));
}

TEST_CASE("start equal to goal costs zero") {
  const auto map = open_map(3, 3);
  const auto p = shortest_path(*map, 0, {1, 1}, {1, 1}, {});
  REQUIRE(p);
  CHECK(p->cost() == 0);
}

TEST_CASE("vertex constraint on the only corridor cell forces a wait") {
  const auto map = open_map(5, 1);
  const auto p = shortest_path(*map, 0, a, d, set_of({Constraint::vertex(0, c, 2)}));
  REQUIRE(p);
  CHECK(p->cost() == 4);
  CHECK(p->at(2) != c);
}

TEST_CASE("edge constraint forbids only its direction and time") {
  const auto map = open_map(2, 1);
  const auto blocked = set_of({Constraint::edge(0, a, b, 1)});
  const auto p = shortest_path(*map, 0, a, b, blocked);
  REQUIRE(p);
  CHECK(p->cost() == 2);
  const auto other_direction = set_of({Constraint::edge(0, b, a, 1)});
  CHECK(shortest_path(*map, 0, a, b, other_direction)->cost() == 1);
  const auto other_agent = set_of({Constraint::edge(1, a, b, 1)});
  CHECK(shortest_path(*map, 0, a, b, other_agent)->cost() == 1);
}

TEST_CASE("a late vertex constraint at the goal delays arrival past it") {
  const auto map = open_map(5, 1);
  const auto p = shortest_path(*map, 0, a, c, set_of({Constraint::vertex(0, c, 6)}));
  REQUIRE(p);
  CHECK(p->cost() == 7);
  CHECK(p->at(6) != c);
}

TEST_CASE("goal unreachable or blocked start") {
  std::vector<std::uint8_t> cells{1, 0, 1};
  const GridMap split(3, 1, cells);
  CHECK_FALSE(shortest_path(split, 0, {0, 0}, {2, 0}, {}));
  const auto map = open_map(3, 1);
  CHECK_FALSE(shortest_path(*map, 0, a, c, set_of({Constraint::vertex(0, a, 0)})));
}

TEST_CASE("shortest_path matches layered reachability with goal rest") {
  Rng rng(21);
  for (int round = 0; round < 300; ++round) {
    const auto inst = testing::random_small_instance(rng);
    const GridMap& map = inst.map();
    const auto cells = map.passable_cells();
    std::vector<Constraint> cs;
    const int count = static_cast<int>(rng.below(6));
    for (int k = 0; k < count; ++k) {
      const int t = static_cast<int>(rng.below(7));
      const Vertex v = cells[rng.below(cells.size())];
      if (rng.below(2) == 0 || t == 0) {
        cs.push_back(Constraint::vertex(0, v, t));
      } else {
        auto n = map.neighbors(v);
        n.erase(n.begin());
        if (n.empty()) continue;
        cs.push_back(Constraint::edge(0, n[rng.below(n.size())], v, t));
      }
    }
    const ConstraintSet omega = set_of(cs);
    const Vertex start = inst.start(0);
    const Vertex goal = inst.target(static_cast<int>(rng.below(inst.num_targets())));
    const auto expected = testing::time_expanded_arrival(map, 0, start, goal, cs, 60);
    const auto got = shortest_path(map, 0, start, goal, omega);
    REQUIRE(expected.has_value() == got.has_value());
    if (!got) continue;
    CHECK(got->cost() == *expected);
    CHECK(got->vertices.front() == start);
    CHECK(got->goal() == goal);
    CHECK(path_moves_on_grid(map, *got));
    CHECK(path_respects(*got, 0, omega));
  }
}

TEST_CASE("corridor cost matrix and the row update after the root conflict") {
  const auto inst = testing::corridor_instance();
  const LowLevelPlanner planner(inst);
  const CostMatrix root = planner.build_cost_matrix({});
  CHECK(root.at(0, 0).is_infinite());
  CHECK(root.at(0, 1) == Cost(3));
  CHECK(root.at(0, 2) == Cost(4));
  CHECK(root.at(1, 0) == Cost(1));
  CHECK(root.at(1, 1).is_infinite());
  CHECK(root.at(1, 2) == Cost(3));
  CHECK(root.path(0, 0) == nullptr);
  REQUIRE(root.path(0, 1) != nullptr);
  CHECK(root.path(0, 1)->at(2) == c);

  const ConstraintSet omega = set_of({Constraint::vertex(0, c, 2)});
  const CostMatrix updated = planner.update_cost_row(root, 0, omega);
  CHECK(updated.at(0, 0).is_infinite());
  CHECK(updated.at(0, 1) == Cost(4));
  CHECK(updated.at(0, 2) == Cost(5));
  CHECK(updated.costs().shares_row(root.costs(), 1));
  CHECK(updated.path(1, 0) == root.path(1, 0));
  CHECK(root.at(0, 1) == Cost(3));
}

TEST_CASE("adding constraints never lowers a cost") {
  Rng rng(5);
  for (int round = 0; round < 100; ++round) {
    const auto inst = testing::random_small_instance(rng);
    const LowLevelPlanner planner(inst);
    const auto cells = inst.map().passable_cells();
    ConstraintSet omega;
    CostMatrix m = planner.build_cost_matrix(omega);
    for (int step = 0; step < 4; ++step) {
      const int agent = static_cast<int>(rng.below(inst.num_agents()));
      omega = omega.with(Constraint::vertex(agent, cells[rng.below(cells.size())],
                                            1 + static_cast<int>(rng.below(5))));
      const CostMatrix next = planner.update_cost_row(m, agent, omega);
      for (int i = 0; i < inst.num_agents(); ++i) {
        for (int j = 0; j < inst.num_targets(); ++j) CHECK(next.at(i, j) >= m.at(i, j));
      }
      m = next;
    }
  }
}

TEST_CASE("row update equals a full rebuild") {
  Rng rng(9);
  for (int round = 0; round < 100; ++round) {
    const auto inst = testing::random_small_instance(rng);
    const LowLevelPlanner planner(inst);
    const auto cells = inst.map().passable_cells();
    ConstraintSet omega;
    CostMatrix m = planner.build_cost_matrix(omega);
    for (int step = 0; step < 4; ++step) {
      const int agent = static_cast<int>(rng.below(inst.num_agents()));
      const Vertex v = cells[rng.below(cells.size())];
      const int t = 1 + static_cast<int>(rng.below(5));
      if (rng.below(2) == 0) {
        omega = omega.with(Constraint::vertex(agent, v, t));
      } else {
        auto n = inst.map().neighbors(v);
        n.erase(n.begin());
        if (n.empty()) continue;
        omega = omega.with(Constraint::edge(agent, n[rng.below(n.size())], v, t));
      }
      m = planner.update_cost_row(m, agent, omega);
      const CostMatrix full = planner.build_cost_matrix(omega);
      CHECK(m.costs() == full.costs());
      for (int i = 0; i < inst.num_agents(); ++i) {
        for (int j = 0; j < inst.num_targets(); ++j) {
          const Path* p = m.path(i, j);
          REQUIRE((p != nullptr) == m.at(i, j).is_finite());
          if (p == nullptr) continue;
          CHECK(p->cost() == m.at(i, j).value());
          CHECK(p->goal() == inst.target(j));
          CHECK(path_respects(*p, i, omega));
        }
      }
    }
  }
}

TEST_CASE("ineligible entries stay infinite") {
  Rng rng(13);
  for (int round = 0; round < 50; ++round) {
    const auto inst = testing::random_small_instance(rng);
    const CostMatrix m = LowLevelPlanner(inst).build_cost_matrix({});
    for (int i = 0; i < inst.num_agents(); ++i) {
      for (int j = 0; j < inst.num_targets(); ++j) {
        if (!inst.eligible(i, j)) CHECK(m.at(i, j).is_infinite());
      }
    }
  }
}
