#include "tapf/validate.hpp"

#include <cstdlib>
#include <sstream>
#include <map>
#include <set>

namespace tapf {

namespace {

Violation violation(Rule rule, int a, int b, int t, std::string message) {
  return {rule, a, b, t, std::move(message)};
}

template <class... Args>
std::string cat(const Args&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

bool adjacent_or_equal(Vertex a, Vertex b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) <= 1;
}

Vertex position(const Path& p, int t) {
  const int last = static_cast<int>(p.vertices.size()) - 1;
  return p.vertices[t < last ? t : last];
}

}  // namespace

std::vector<Violation> validate(const TAPFInstance& instance, const Solution& solution) {
  std::vector<Violation> out;
  const int n = instance.num_agents();
  const auto& plan = solution.plan;
  const auto& assigned = solution.assignment.target_of;

  if (static_cast<int>(plan.size()) != n || static_cast<int>(assigned.size()) != n) {
    out.push_back(violation(Rule::Shape, -1, -1, -1,
                            cat("expected ", n, " paths and assignments, got ", plan.size(), " and ", assigned.size())));
    return out;
  }
  for (int i = 0; i < n; ++i) {
    if (plan[i].vertices.empty()) {
      out.push_back(violation(Rule::Shape, i, -1, -1, cat("agent ", i + 1, " has an empty path")));
    }
  }
  if (!out.empty()) return out;

  for (int i = 0; i < n; ++i) {
    const Path& p = plan[i];
    if (p.vertices.front() != instance.start(i)) {
      out.push_back(violation(Rule::Start, i, -1, 0, cat("agent ", i + 1, " does not start at its start")));
    }
    const int j = assigned[i];
    if (j < 0 || j >= instance.num_targets() || !instance.eligible(i, j)) {
      out.push_back(violation(Rule::Target, i, -1, -1,
                              cat("agent ", i + 1, " assigned to ineligible target ", j)));
    } else if (p.vertices.back() != instance.target(j)) {
      out.push_back(violation(Rule::Target, i, -1, p.cost(),
                              cat("agent ", i + 1, " does not end at its assigned target")));
    }
    for (std::size_t t = 0; t < p.vertices.size(); ++t) {
      const Vertex v = p.vertices[t];
      const bool bad_cell = !instance.map().passable(v);
      const bool bad_step = t > 0 && !adjacent_or_equal(p.vertices[t - 1], v);
      if (bad_cell || bad_step) {
        out.push_back(violation(Rule::Move, i, -1, static_cast<int>(t),
                                cat("invalid move (", i + 1, ",", t, ")")));
      }
    }
  }

  std::map<int, int> holder;
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = holder.emplace(assigned[i], i);
    if (!fresh) {
      out.push_back(violation(Rule::Injective, it->second, i, -1, "assignment not injective"));
    }
  }

  std::size_t longest = 0;
  for (const Path& p : plan) longest = std::max(longest, p.vertices.size());
  const int horizon = static_cast<int>(longest) - 1;
  std::set<std::pair<int, int>> reported;
  for (int t = 0; t <= horizon; ++t) {
    std::map<Vertex, int> occupant;
    for (int i = 0; i < n; ++i) {
      auto [it, fresh] = occupant.emplace(position(plan[i], t), i);
      if (!fresh && reported.emplace(it->second, i).second) {
        out.push_back(violation(Rule::VertexConflict, it->second, i, t,
                                cat("vertex conflict (", it->second + 1, ",", i + 1, ",", t, ")")));
      }
    }
    if (t == 0) continue;
    std::map<std::pair<Vertex, Vertex>, int> traversal;
    for (int i = 0; i < n; ++i) {
      const Vertex from = position(plan[i], t - 1);
      const Vertex to = position(plan[i], t);
      if (from == to) continue;
      if (auto it = traversal.find({to, from}); it != traversal.end()) {
        if (reported.emplace(it->second, i).second) {
          out.push_back(violation(Rule::EdgeConflict, it->second, i, t,
                                  cat("edge conflict (", it->second + 1, ",", i + 1, ",", t, ")")));
        }
      }
      traversal.emplace(std::pair{from, to}, i);
    }
  }

  std::int64_t flowtime = 0;
  for (const Path& p : plan) flowtime += static_cast<std::int64_t>(p.vertices.size()) - 1;
  if (flowtime != solution.flowtime) {
    out.push_back(violation(Rule::Flowtime, -1, -1, -1,
                            cat("flowtime ", solution.flowtime, " does not match path lengths ", flowtime)));
  }
  return out;
}

}  // namespace tapf
