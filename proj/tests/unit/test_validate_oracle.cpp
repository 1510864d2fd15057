#include <doctest.h>

#include "generators.hpp"
#include "tapf/itacbs.hpp"
#include "tapf/validate.hpp"

using namespace tapf;

namespace {

const Vertex a{0, 0}, b{1, 0}, c{2, 0}, d{3, 0}, e{4, 0};

Solution solution_of(std::vector<std::vector<Vertex>> paths, std::vector<int> target_of) {
  Solution s;
  for (auto& p : paths) {
    s.flowtime += static_cast<std::int64_t>(p.size()) - 1;
    s.plan.push_back(Path{std::move(p)});
  }
  s.assignment.target_of = std::move(target_of);
  s.assignment.total_cost = Cost(s.flowtime);
  return s;
}

std::shared_ptr<const GridMap> open_map(int w, int h) {
  return std::make_shared<const GridMap>(w, h, std::vector<std::uint8_t>(w * h, 1));
}

}  // namespace

TEST_CASE("corridor plans without conflicts are valid") {
  const auto inst = testing::corridor_instance();
  CHECK(validate(inst, solution_of({{a, b, c, d}, {b, c, d, e}}, {1, 2})).empty());
  CHECK(validate(inst, solution_of({{a, b, c, c, d}, {b, c, d, e}}, {1, 2})).empty());
}

TEST_CASE("a swap on (c, d) at timestep 3 is an edge conflict") {
  const auto inst = testing::corridor_instance();
  const auto v = validate(inst, solution_of({{a, b, c, d}, {b, c, d, c}}, {1, 0}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == Rule::EdgeConflict);
  CHECK(v[0].first == 0);
  CHECK(v[0].second == 1);
  CHECK(v[0].time == 3);
  CHECK(v[0].message == "edge conflict (1,2,3)");
}

TEST_CASE("two agents on one target") {
  const auto inst = testing::corridor_instance();
  const auto v = validate(inst, solution_of({{a, b, c, d, e}, {b, c, d, e}}, {2, 2}));
  REQUIRE_FALSE(v.empty());
  CHECK(std::ranges::any_of(v, [](const Violation& x) {
    return x.rule == Rule::Injective && x.message == "assignment not injective";
  }));
}

TEST_CASE("a parked agent still occupies its target") {
  const auto inst = testing::corridor_instance();
  const auto v = validate(inst, solution_of({{a, b, c, d}, {b, c}}, {1, 0}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == Rule::VertexConflict);
  CHECK(v[0].time == 2);
  CHECK(v[0].message == "vertex conflict (1,2,2)");
}

TEST_CASE("each goal condition has its own rule") {
  const auto inst = testing::corridor_instance();
  auto rules = [&](const Solution& s) {
    std::vector<Rule> out;
    for (const auto& v : validate(inst, s)) out.push_back(v.rule);
    return out;
  };
  CHECK(rules(solution_of({{b, c, d}, {a}}, {1, 0})) ==
        std::vector<Rule>{Rule::Start, Rule::Start, Rule::Target});
  CHECK(rules(solution_of({{a, b, c}, {b, c, d, e}}, {0, 2})) == std::vector<Rule>{Rule::Target});
  CHECK(rules(solution_of({{a, c, c, d}, {b, b, b, b, c}}, {1, 0})) ==
        std::vector<Rule>{Rule::Move});
  CHECK(rules(solution_of({{a, b, c, d}}, {1})) == std::vector<Rule>{Rule::Shape});
  auto wrong_total = solution_of({{a, b, c, d}, {b, c, d, e}}, {1, 2});
  wrong_total.flowtime = 5;
  CHECK(rules(wrong_total) == std::vector<Rule>{Rule::Flowtime});
}

TEST_CASE("oracle examples") {
  CHECK(brute_force_optimal(testing::corridor_instance()) == 6);
  const auto map = open_map(3, 3);
  const TAPFInstance single(map, {{1, 1}}, {{1, 1}}, {{true}});
  CHECK(brute_force_optimal(single) == 0);
  const auto line = open_map(2, 1);
  const TAPFInstance swap(line, {a, b}, {b, a}, {{true, false}, {false, true}});
  CHECK(brute_force_optimal(swap) == std::nullopt);
}

TEST_CASE("oracle respects constraints and the horizon") {
  const auto inst = testing::corridor_instance();
  CHECK(brute_force_optimal(inst, 2) == std::nullopt);
  CHECK(brute_force_optimal(inst, 4) == 6);
  const ConstraintSet late = ConstraintSet{}.with(Constraint::vertex(1, c, 5));
  const auto constrained = brute_force_optimal(inst, std::nullopt, late);
  REQUIRE(constrained);
  CHECK(*constrained >= 6);
  const ConstraintSet stuck = ConstraintSet{}.with(Constraint::vertex(0, a, 0));
  CHECK(brute_force_optimal(inst, std::nullopt, stuck) == std::nullopt);
}

TEST_CASE("oracle refuses instances past its guard") {
  const auto big = open_map(6, 6);
  const TAPFInstance wide(big, {{0, 0}}, {{5, 5}}, {{true}});
  CHECK_THROWS_AS((void)brute_force_optimal(wide), OracleGuardError);
  const auto small = open_map(4, 2);
  const TAPFInstance crowded(small, {{0, 0}, {1, 0}, {2, 0}, {3, 0}}, {{0, 1}, {1, 1}, {2, 1}, {3, 1}},
                             std::vector<std::vector<bool>>(4, std::vector<bool>(4, true)));
  CHECK_THROWS_AS((void)brute_force_optimal(crowded), OracleGuardError);
}

TEST_CASE("oracle is never above a valid solver plan") {
  Rng rng(17);
  for (int round = 0; round < 40; ++round) {
    const auto inst = testing::random_small_instance(rng);
    const auto best = brute_force_optimal(inst);
    if (!best) continue;
    const auto r = solve_itacbs(inst);
    REQUIRE(r.status == SolveStatus::Solved);
    CHECK(validate(inst, *r.solution).empty());
    CHECK(*best <= r.solution->flowtime);
  }
}
