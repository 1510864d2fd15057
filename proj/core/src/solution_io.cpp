#include "tapf/solution_io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <istream>
#include <ostream>

namespace tapf {

void write_solution(std::ostream& out, const TAPFInstance& instance, std::string_view solver,
                    const SolveResult& result) {
  YAML::Emitter em;
  em << YAML::BeginMap;
  em << YAML::Key << "solver" << YAML::Value << std::string(solver);
  em << YAML::Key << "status" << YAML::Value << std::string(to_string(result.status));
  if (result.solution) {
    em << YAML::Key << "flowtime" << YAML::Value << result.solution->flowtime;
  }
  const SolveStats& st = result.stats;
  em << YAML::Key << "statistics" << YAML::Value << YAML::BeginMap;
  em << YAML::Key << "nodesExpanded" << YAML::Value << st.nodes_expanded;
  em << YAML::Key << "nodesGenerated" << YAML::Value << st.nodes_generated;
  em << YAML::Key << "numRoots" << YAML::Value << st.num_roots;
  em << YAML::Key << "taCalls" << YAML::Value << st.ta_calls;
  em << YAML::Key << "lowLevelSearches" << YAML::Value << st.low_level_searches;
  em << YAML::EndMap;

  if (result.solution) {
    const Solution& s = *result.solution;
    em << YAML::Key << "assignment" << YAML::Value << YAML::BeginMap;
    for (int i = 0; i < instance.num_agents(); ++i) {
      const Vertex g = instance.target(s.assignment.target_of[i]);
      em << YAML::Key << instance.agent_name(i) << YAML::Value << YAML::Flow << YAML::BeginSeq
         << g.x << g.y << YAML::EndSeq;
    }
    em << YAML::EndMap;
    em << YAML::Key << "schedule" << YAML::Value << YAML::BeginMap;
    for (int i = 0; i < instance.num_agents(); ++i) {
      em << YAML::Key << instance.agent_name(i) << YAML::Value << YAML::BeginSeq;
      const auto& vs = s.plan[i].vertices;
      for (std::size_t t = 0; t < vs.size(); ++t) {
        em << YAML::Flow << YAML::BeginMap << YAML::Key << "x" << YAML::Value << vs[t].x
           << YAML::Key << "y" << YAML::Value << vs[t].y << YAML::Key << "t" << YAML::Value << t
           << YAML::EndMap;
      }
      em << YAML::EndSeq;
    }
    em << YAML::EndMap;
  }
  em << YAML::EndMap;
  out << em.c_str() << '\n';
}

namespace {

std::size_t line_of(const YAML::Node& n) { return static_cast<std::size_t>(n.Mark().line) + 1; }

int read_int(const YAML::Node& n, const char* what) {
  try {
    return n.as<int>();
  } catch (const YAML::Exception&) {
    throw ParseError(line_of(n), std::string(what) + " must be an integer");
  }
}

Solution read_plan(std::istream& in, const TAPFInstance& instance) {
  YAML::Node root;
  try {
    root = YAML::Load(in);
  } catch (const YAML::ParserException& e) {
    throw ParseError(static_cast<std::size_t>(e.mark.line) + 1, e.msg);
  }
  if (!root.IsMap()) throw ParseError(0, "plan file must be a mapping");
  const YAML::Node assignment = root["assignment"];
  const YAML::Node schedule = root["schedule"];
  if (!assignment || !assignment.IsMap() || !schedule || !schedule.IsMap()) {
    throw ParseError(0, "plan file needs 'assignment' and 'schedule' mappings");
  }

  Solution s;
  const int n = instance.num_agents();
  s.plan.resize(n);
  s.assignment.target_of.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    const std::string& name = instance.agent_name(i);
    const YAML::Node goal = assignment[name];
    if (!goal || !goal.IsSequence() || goal.size() != 2) {
      throw ParseError(line_of(assignment), "missing assignment for " + name);
    }
    const Vertex g{read_int(goal[0], "x"), read_int(goal[1], "y")};
    const auto& targets = instance.targets();
    if (auto it = std::ranges::find(targets, g); it != targets.end()) {
      s.assignment.target_of[i] = static_cast<int>(it - targets.begin());
    }
    const YAML::Node steps = schedule[name];
    if (!steps || !steps.IsSequence()) {
      throw ParseError(line_of(schedule), "missing schedule for " + name);
    }
    int expected = 0;
    for (const auto& step : steps) {
      if (!step.IsMap() || !step["x"] || !step["y"] || !step["t"]) {
        throw ParseError(line_of(step), "schedule entries need x, y and t");
      }
      if (read_int(step["t"], "t") != expected++) {
        throw ParseError(line_of(step), "schedule times must run 0, 1, 2, ...");
      }
      s.plan[i].vertices.push_back({read_int(step["x"], "x"), read_int(step["y"], "y")});
    }
    s.flowtime += s.plan[i].cost();
  }
  if (const YAML::Node f = root["flowtime"]) s.flowtime = read_int(f, "flowtime");
  Cost total{0};
  for (const Path& p : s.plan) total += Cost(p.cost());
  s.assignment.total_cost = total;
  return s;
}

}  // namespace

Solution read_solution(std::istream& in, const TAPFInstance& instance) {
  try {
    return read_plan(in, instance);
  } catch (const YAML::Exception& e) {
    throw ParseError(static_cast<std::size_t>(e.mark.line) + 1, e.msg);
  }
}

}  // namespace tapf
