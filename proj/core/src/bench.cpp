#include "tapf/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "tapf/cbsta.hpp"
#include "tapf/itacbs.hpp"

namespace tapf {

std::uint64_t Rng::below(std::uint64_t bound) {
  // Reject the low 2^64 mod bound values so every residue is equally likely.
  const std::uint64_t reject = (0 - bound) % bound;
  while (true) {
    const std::uint64_t x = engine_();
    if (x >= reject) return x % bound;
  }
}

std::string_view to_string(Scenario s) { return s == Scenario::Group ? "group" : "common"; }

std::string case_id(std::string_view map_name, Scenario scenario, int num_agents,
                    int target_set_size, double shared_ratio, std::uint64_t seed) {
  std::string id = std::string(map_name) + "_" + std::string(to_string(scenario)) + "_n" +
                   std::to_string(num_agents);
  if (scenario == Scenario::Common) {
    char ratio[8];
    std::snprintf(ratio, sizeof ratio, "%03d", static_cast<int>(std::lround(shared_ratio * 100)));
    id += "_k" + std::to_string(target_set_size) + "_r" + ratio;
  }
  return id + "_s" + std::to_string(seed);
}

namespace {

std::vector<Vertex> shuffled_cells(const GridMap& map, Rng& rng, std::size_t needed) {
  std::vector<Vertex> cells = map.passable_cells();
  if (cells.size() < needed) {
    throw GenerationError("map has " + std::to_string(cells.size()) + " free cells, case needs " +
                          std::to_string(needed));
  }
  rng.shuffle(cells);
  return cells;
}

}  // namespace

BenchCase gen_group(std::shared_ptr<const GridMap> map, std::string map_name, int num_agents,
                    std::uint64_t seed) {
  if (num_agents < 1) throw GenerationError("need at least one agent");
  Rng rng(seed);
  const auto cells = shuffled_cells(*map, rng, 2 * static_cast<std::size_t>(num_agents));
  std::vector<Vertex> starts(cells.begin(), cells.begin() + num_agents);
  std::vector<Vertex> targets(cells.begin() + num_agents, cells.begin() + 2 * num_agents);

  std::vector<std::vector<bool>> eligible(num_agents, std::vector<bool>(num_agents, false));
  for (int i = 0; i < num_agents; ++i) {
    const int first = i / kGroupSize * kGroupSize;
    const int last = std::min(first + kGroupSize, num_agents);
    for (int j = first; j < last; ++j) eligible[i][j] = true;
  }

  BenchCase c;
  c.id = case_id(map_name, Scenario::Group, num_agents, 0, 0.0, seed);
  c.map_name = std::move(map_name);
  c.scenario = Scenario::Group;
  c.num_agents = num_agents;
  c.target_set_size = std::min(kGroupSize, num_agents);
  c.seed = seed;
  c.instance = std::make_shared<const TAPFInstance>(std::move(map), std::move(starts),
                                                    std::move(targets), std::move(eligible));
  return c;
}

BenchCase gen_common(std::shared_ptr<const GridMap> map, std::string map_name, int num_agents,
                     int target_set_size, double shared_ratio, std::uint64_t seed) {
  if (num_agents < 1) throw GenerationError("need at least one agent");
  if (target_set_size < 1) throw GenerationError("target sets need at least one target");
  if (shared_ratio < 0.0 || shared_ratio > 1.0) {
    throw GenerationError("shared ratio must lie in [0, 1]");
  }
  const int shared = std::min(static_cast<int>(std::lround(shared_ratio * target_set_size)),
                              target_set_size - 1);
  const int unique = target_set_size - shared;
  const std::size_t num_targets = static_cast<std::size_t>(shared) +
                                  static_cast<std::size_t>(num_agents) * unique;
  Rng rng(seed);
  const auto cells = shuffled_cells(*map, rng, num_agents + num_targets);
  std::vector<Vertex> starts(cells.begin(), cells.begin() + num_agents);
  std::vector<Vertex> targets(cells.begin() + num_agents,
                              cells.begin() + num_agents + static_cast<std::ptrdiff_t>(num_targets));

  std::vector<std::vector<bool>> eligible(num_agents, std::vector<bool>(num_targets, false));
  for (int i = 0; i < num_agents; ++i) {
    for (int j = 0; j < shared; ++j) eligible[i][j] = true;
    for (int u = 0; u < unique; ++u) eligible[i][shared + i * unique + u] = true;
  }

  BenchCase c;
  c.id = case_id(map_name, Scenario::Common, num_agents, target_set_size, shared_ratio, seed);
  c.map_name = std::move(map_name);
  c.scenario = Scenario::Common;
  c.num_agents = num_agents;
  c.target_set_size = target_set_size;
  c.shared_ratio = shared_ratio;
  c.seed = seed;
  c.instance = std::make_shared<const TAPFInstance>(std::move(map), std::move(starts),
                                                    std::move(targets), std::move(eligible));
  return c;
}

SolverFn solver_by_name(std::string_view name) {
  if (name == "itacbs") {
    return [](const TAPFInstance& inst, const SolverOptions& o) { return solve_itacbs(inst, o); };
  }
  if (name == "cbsta") {
    return [](const TAPFInstance& inst, const SolverOptions& o) { return solve_cbsta(inst, o); };
  }
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

namespace {

double to_ms(Duration d) { return std::chrono::duration<double, std::milli>(d).count(); }

}  // namespace

BenchRecord make_record(const std::string& case_id, const std::string& solver,
                        const SolveResult& result, std::chrono::duration<double> timeout) {
  const SolveStats& st = result.stats;
  BenchRecord r;
  r.case_id = case_id;
  r.solver = solver;
  r.solved = result.status == SolveStatus::Solved;
  r.outcome = std::string(to_string(result.status));
  r.runtime_ms = to_ms(st.runtime);
  if (r.solved) r.flowtime = result.solution->flowtime;
  r.nodes_expanded = st.nodes_expanded;
  r.nodes_generated = st.nodes_generated;
  if (st.num_roots > 0) r.num_roots = st.num_roots;
  r.ta_calls = st.ta_calls;
  r.ta_ms = to_ms(st.ta_time);
  r.low_level_ms = to_ms(st.low_level_time);
  r.conflict_ms = to_ms(st.conflict_time);
  r.other_ms = to_ms(st.other_time());
  if (result.status == SolveStatus::Timeout) {
    r.runtime_ms = std::chrono::duration<double, std::milli>(timeout).count();
    const double parts = r.ta_ms + r.low_level_ms + r.conflict_ms;
    if (parts > r.runtime_ms) {
      const double scale = r.runtime_ms / parts;
      r.ta_ms *= scale;
      r.low_level_ms *= scale;
      r.conflict_ms *= scale;
    }
    r.other_ms = std::max(0.0, r.runtime_ms - r.ta_ms - r.low_level_ms - r.conflict_ms);
  }
  return r;
}

std::vector<BenchRecord> run(const std::vector<BenchCase>& cases,
                             const std::vector<std::string>& solvers, const RunOptions& options) {
  std::vector<NamedSolver> named;
  for (const auto& s : solvers) named.push_back({s, solver_by_name(s)});
  return run(cases, named, options);
}

std::vector<BenchRecord> run(const std::vector<BenchCase>& cases,
                             const std::vector<NamedSolver>& solvers, const RunOptions& options) {
  const std::size_t total = cases.size() * solvers.size();
  std::vector<BenchRecord> records(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t ci = k / solvers.size();
      const std::size_t si = k % solvers.size();
      const BenchCase& c = cases[ci];
      SolverOptions so;
      so.timeout = options.timeout;
      const NamedSolver& solver = solvers[si];
      if (options.observe) so.observer = options.observe(ci, solver.name);
      try {
        records[k] = make_record(c.id, solver.name, solver.solve(*c.instance, so), options.timeout);
      } catch (const std::exception& e) {
        BenchRecord r;
        r.case_id = c.id;
        r.solver = solver.name;
        r.outcome = std::string("error: ") + e.what();
        records[k] = std::move(r);
      }
    }
  };

  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(total)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  auto ms = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.case_id << ',' << r.solver << ',' << (r.solved ? "true" : "false") << ','
        << ms(r.runtime_ms) << ',';
    if (r.flowtime) out << *r.flowtime;
    out << ',' << r.nodes_expanded << ',' << r.nodes_generated << ',';
    if (r.num_roots) out << *r.num_roots;
    out << ',' << r.ta_calls << ',' << ms(r.ta_ms) << ',' << ms(r.low_level_ms) << ','
        << ms(r.conflict_ms) << ',' << ms(r.other_ms) << '\n';
  }
}

}  // namespace tapf
