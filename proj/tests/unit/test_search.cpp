#include <doctest.h>

#include <map>

#include "generators.hpp"
#include "tapf/cbsta.hpp"
#include "tapf/itacbs.hpp"
#include "tapf/validate.hpp"

using namespace tapf;

namespace {

const Vertex a{0, 0}, b{1, 0}, c{2, 0}, d{3, 0}, e{4, 0};

Path path_of(std::vector<Vertex> v) { return Path{std::move(v)}; }

std::optional<Conflict> conflict_in(const std::vector<Path>& paths) {
  std::vector<const Path*> plan;
  for (const auto& p : paths) plan.push_back(&p);
  return first_conflict(plan);
}

std::shared_ptr<const GridMap> open_map(int w, int h) {
  return std::make_shared<const GridMap>(w, h, std::vector<std::uint8_t>(w * h, 1));
}

/// Random instances the oracle can solve, so every solver run terminates.
std::vector<TAPFInstance> feasible_instances(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<TAPFInstance> out;
  while (static_cast<int>(out.size()) < count) {
    auto inst = testing::random_small_instance(rng);
    if (brute_force_optimal(inst)) out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace

TEST_CASE("first_conflict finds vertex conflicts including resting agents") {
  const auto conflict = conflict_in({path_of({a, b, c, d}), path_of({b, c})});
  REQUIRE(conflict);
  CHECK(conflict->kind == ConflictKind::Vertex);
  CHECK(conflict->first == 0);
  CHECK(conflict->second == 1);
  CHECK(conflict->time == 2);
  CHECK(conflict->at == c);
}

TEST_CASE("first_conflict finds swaps as edge conflicts") {
  const auto conflict = conflict_in({path_of({a, b, c, d}), path_of({e, d, c})});
  REQUIRE(conflict);
  CHECK(conflict->kind == ConflictKind::Vertex);
  CHECK(conflict->time == 2);

  const auto swap = conflict_in({path_of({b, c, d, e}), path_of({e, d, c, b})});
  REQUIRE(swap);
  CHECK(swap->kind == ConflictKind::Edge);
  CHECK(swap->time == 2);
  CHECK(swap->at == c);
  CHECK(swap->to == d);
}

TEST_CASE("first_conflict prefers the earliest time, then the smallest pair") {
  const Vertex f{0, 1}, g{1, 1}, h{2, 1};
  const auto conflict =
      conflict_in({path_of({g, g, g}), path_of({f, f, a}), path_of({h, g}), path_of({b, a})});
  REQUIRE(conflict);
  CHECK(conflict->time == 1);
  CHECK(conflict->first == 0);
  CHECK(conflict->second == 2);
  CHECK(conflict_in({path_of({a, b}), path_of({c, d})}) == std::nullopt);
}

TEST_CASE("count_conflicting_pairs counts pairs, not events") {
  std::vector<Path> paths{path_of({a, b, c}), path_of({b, c, b}), path_of({e})};
  std::vector<const Path*> plan;
  for (const auto& p : paths) plan.push_back(&p);
  CHECK(count_conflicting_pairs(plan) == 1);
}

TEST_CASE("constraint_for targets each agent's own move") {
  const Conflict edge{ConflictKind::Edge, 0, 1, 3, c, d};
  CHECK(constraint_for(edge, 0) == Constraint::edge(0, c, d, 3));
  CHECK(constraint_for(edge, 1) == Constraint::edge(1, d, c, 3));
  const Conflict vertex{ConflictKind::Vertex, 0, 1, 2, c, {}};
  CHECK(constraint_for(vertex, 1) == Constraint::vertex(1, c, 2));
}

TEST_CASE("corridor root and its children") {
  const auto inst = testing::corridor_instance();
  ItaCbs solver(inst);
  const auto root = solver.make_root();
  REQUIRE(root);
  CHECK(root->cost == Cost(4));
  const auto conflict = first_conflict(root->plan());
  REQUIRE(conflict);
  CHECK(conflict->kind == ConflictKind::Vertex);
  CHECK(conflict->at == c);
  CHECK(conflict->time == 2);

  const auto children = solver.branch(*root, *conflict);
  REQUIRE(children.size() == 2);
  CHECK(children[0].cost == Cost(5));
  CHECK(children[1].cost == Cost(6));
  CHECK(children[0].matrix.at(0, 1) == Cost(4));
  CHECK(children[0].matrix.at(0, 2) == Cost(5));
  CHECK(children[1].matrix.at(1, 0) == Cost(3));
  CHECK(children[1].matrix.at(1, 2) == Cost(3));
  for (const auto& child : children) CHECK(child.omega.size() == 1);
}

TEST_CASE("both solvers reach flowtime 6 on the corridor") {
  const auto inst = testing::corridor_instance();
  for (const auto& r : {solve_itacbs(inst), solve_cbsta(inst)}) {
    REQUIRE(r.status == SolveStatus::Solved);
    CHECK(r.solution->flowtime == 6);
    CHECK(validate(inst, *r.solution).empty());
  }
}

TEST_CASE("conflict-free optimal assignment needs one root and no branching") {
  const auto map = open_map(5, 3);
  const TAPFInstance inst(map, {{0, 0}, {0, 2}}, {{4, 0}, {4, 2}, {2, 1}},
                          {{true, false, true}, {false, true, true}});
  for (const auto& r : {solve_itacbs(inst), solve_cbsta(inst)}) {
    REQUIRE(r.status == SolveStatus::Solved);
    CHECK(r.stats.nodes_expanded == 1);
    CHECK(r.stats.nodes_generated == 1);
  }
  CHECK(solve_cbsta(inst).stats.num_roots == 1);
}

TEST_CASE("private targets make CBS-TA a single tree") {
  const auto map = open_map(4, 2);
  const TAPFInstance inst(map, {{0, 0}, {3, 0}}, {{2, 0}, {1, 0}}, {{true, false}, {false, true}});
  const auto r = solve_cbsta(inst);
  REQUIRE(r.status == SolveStatus::Solved);
  CHECK(r.stats.num_roots == 1);
}

TEST_CASE("head-on swap in a dead end is infeasible for the oracle") {
  const auto map = open_map(2, 1);
  const TAPFInstance inst(map, {{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}, {{true, false}, {false, true}});
  CHECK_FALSE(brute_force_optimal(inst));
}

TEST_CASE("a tiny timeout is reported as a timeout, not infeasibility") {
  const auto map = open_map(2, 1);
  const TAPFInstance inst(map, {{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}, {{true, false}, {false, true}});
  SolverOptions o;
  o.timeout = std::chrono::duration<double>(0.05);
  CHECK(solve_itacbs(inst, o).status == SolveStatus::Timeout);
  CHECK(solve_cbsta(inst, o).status == SolveStatus::Timeout);
}

TEST_CASE("no complete assignment at the root is infeasible") {
  const auto map = open_map(3, 1);
  const TAPFInstance inst(map, {{0, 0}, {2, 0}}, {{1, 0}, {2, 0}}, {{true, false}, {true, false}});
  CHECK(solve_itacbs(inst).status == SolveStatus::Infeasible);
  CHECK(solve_cbsta(inst).status == SolveStatus::Infeasible);
}

TEST_CASE("child nodes are re-optimised assignments and never cheaper than the parent") {
  int switched = 0;
  for (const auto& inst : feasible_instances(31, 60)) {
    ItaCbs solver(inst);
    auto root = solver.make_root();
    REQUIRE(root);
    std::vector<CTNode> frontier{std::move(*root)};
    for (int depth = 0; depth < 3 && !frontier.empty(); ++depth) {
      std::vector<CTNode> next;
      for (const CTNode& node : frontier) {
        const auto conflict = first_conflict(node.plan());
        if (!conflict) continue;
        for (auto& child : solver.branch(node, *conflict)) {
          CHECK(child.cost >= node.cost);
          CHECK(child.assignment.certificate_holds());
          const auto full = hungarian(child.matrix.costs());
          REQUIRE(full);
          CHECK(full->total_cost() == child.cost);
          if (child.assignment.assignment().target_of != node.assignment.assignment().target_of) {
            ++switched;
          }
          next.push_back(std::move(child));
        }
      }
      frontier = std::move(next);
    }
  }
  CHECK(switched > 0);
}

TEST_CASE("branching loses no solution of the parent") {
  for (const auto& inst : feasible_instances(47, 40)) {
    ItaCbs solver(inst);
    auto root = solver.make_root();
    REQUIRE(root);
    std::vector<CTNode> frontier{std::move(*root)};
    for (int depth = 0; depth < 2 && !frontier.empty(); ++depth) {
      std::vector<CTNode> next;
      for (const CTNode& node : frontier) {
        const auto conflict = first_conflict(node.plan());
        if (!conflict) continue;
        const auto parent_best = brute_force_optimal(inst, std::nullopt, node.omega);
        auto children = solver.branch(node, *conflict);
        std::optional<std::int64_t> child_best;
        for (const auto& child : children) {
          const auto v = brute_force_optimal(inst, std::nullopt, child.omega);
          if (v && (!child_best || *v < *child_best)) child_best = v;
        }
        CHECK(parent_best == child_best);
        for (auto& child : children) next.push_back(std::move(child));
      }
      frontier = std::move(next);
    }
  }
}

TEST_CASE("solvers agree with the oracle and produce valid plans") {
  for (const auto& inst : feasible_instances(53, 60)) {
    const auto best = brute_force_optimal(inst);
    const auto ita = solve_itacbs(inst);
    const auto cta = solve_cbsta(inst);
    REQUIRE(ita.status == SolveStatus::Solved);
    REQUIRE(cta.status == SolveStatus::Solved);
    CHECK(ita.solution->flowtime == *best);
    CHECK(cta.solution->flowtime == *best);
    CHECK(validate(inst, *ita.solution).empty());
    CHECK(validate(inst, *cta.solution).empty());
  }
}

TEST_CASE("CBS-TA roots are lazy, nondecreasing, and trees keep their assignment") {
  for (const auto& inst : feasible_instances(67, 60)) {
    std::map<std::uint64_t, std::vector<int>> assignment_of;
    std::map<std::uint64_t, std::uint64_t> root_of;
    std::vector<std::uint64_t> roots;
    std::vector<Cost> root_costs;
    std::map<std::uint64_t, bool> expanded;
    bool lazy = true;
    bool same_tree_assignment = true;
    SearchObserver observer;
    observer.on_generated = [&](const NodeEvent& ev) {
      assignment_of[ev.id] = ev.target_of;
      if (ev.root) {
        if (!roots.empty() && !expanded[roots.back()]) lazy = false;
        roots.push_back(ev.id);
        root_costs.push_back(ev.cost);
        root_of[ev.id] = ev.id;
      } else {
        root_of[ev.id] = root_of[ev.parent];
        if (ev.target_of != assignment_of[root_of[ev.id]]) same_tree_assignment = false;
      }
    };
    observer.on_expanded = [&](const NodeEvent& ev) { expanded[ev.id] = true; };
    SolverOptions o;
    o.observer = &observer;
    const auto r = solve_cbsta(inst, o);
    REQUIRE(r.status == SolveStatus::Solved);
    CHECK(lazy);
    CHECK(same_tree_assignment);
    CHECK(std::ranges::is_sorted(root_costs));
    CHECK(r.stats.num_roots == roots.size());
  }
}

TEST_CASE("timer parts never exceed the runtime") {
  for (const auto& inst : feasible_instances(71, 20)) {
    for (const auto& r : {solve_itacbs(inst), solve_cbsta(inst)}) {
      const auto& s = r.stats;
      CHECK(s.ta_time + s.low_level_time + s.conflict_time <= s.runtime);
      CHECK(s.ta_calls > 0);
      CHECK(s.nodes_expanded <= s.nodes_generated);
    }
  }
}
