#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tapf/bench.hpp"
#include "tapf/solution_io.hpp"
#include "tapf/validate.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::chrono::duration<double> seconds(double s) {
  if (!(s > 0)) throw UsageError("--timeout must be positive");
  return std::chrono::duration<double>(s);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  return out;
}

struct SolveArgs {
  std::string instance;
  std::string solver = "itacbs";
  double timeout = 30.0;
  std::string out;
};

int run_solve(const SolveArgs& a) {
  const tapf::TAPFInstance inst = tapf::load_instance(a.instance);
  const auto solve = tapf::solver_by_name(a.solver);
  tapf::SolverOptions options;
  options.timeout = seconds(a.timeout);
  const tapf::SolveResult result = solve(inst, options);

  if (a.out.empty()) {
    tapf::write_solution(std::cout, inst, a.solver, result);
  } else {
    auto out = open_output(a.out);
    tapf::write_solution(out, inst, a.solver, result);
  }
  switch (result.status) {
    case tapf::SolveStatus::Solved:
      std::cerr << "solved: flowtime " << result.solution->flowtime << '\n';
      return kExitSolved;
    case tapf::SolveStatus::Infeasible:
      std::cerr << "no solution exists\n";
      return kExitInfeasible;
    case tapf::SolveStatus::Timeout:
      std::cerr << "timed out\n";
      return kExitTimeout;
  }
  return kExitInfeasible;
}

struct GenArgs {
  std::string map;
  std::string scenario;
  int agents = 0;
  int target_set_size = 15;
  double shared_ratio = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  auto map = std::make_shared<const tapf::GridMap>(tapf::load_map(a.map));
  const std::string name = fs::path(a.map).stem().string();
  const tapf::BenchCase c =
      a.scenario == "group"
          ? tapf::gen_group(map, name, a.agents, a.seed)
          : tapf::gen_common(map, name, a.agents, a.target_set_size, a.shared_ratio, a.seed);
  fs::create_directories(a.out);
  const fs::path file = fs::path(a.out) / (c.id + ".yaml");
  const fs::path map_ref = fs::proximate(a.map, a.out);
  auto out = open_output(file);
  tapf::write_instance(out, *c.instance, map_ref.generic_string());
  std::cout << file.string() << '\n';
  return 0;
}

struct BenchArgs {
  std::string cases;
  std::string solvers = "itacbs,cbsta";
  double timeout = 30.0;
  int jobs = 1;
  std::string out;
};

int run_bench(const BenchArgs& a) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.cases)) {
    if (entry.is_regular_file() && entry.path().extension() == ".yaml") files.push_back(entry.path());
  }
  std::ranges::sort(files);

  std::vector<tapf::BenchCase> cases;
  for (const auto& f : files) {
    tapf::BenchCase c;
    c.id = f.stem().string();
    c.instance = std::make_shared<const tapf::TAPFInstance>(tapf::load_instance(f));
    cases.push_back(std::move(c));
  }

  std::vector<std::string> solvers;
  std::stringstream list(a.solvers);
  for (std::string s; std::getline(list, s, ',');) {
    if (!s.empty()) solvers.push_back(s);
  }
  for (const auto& s : solvers) (void)tapf::solver_by_name(s);
  if (solvers.empty()) throw UsageError("--solvers needs at least one solver");
  if (a.jobs < 1) throw UsageError("--jobs must be at least 1");

  tapf::RunOptions options;
  options.timeout = seconds(a.timeout);
  options.jobs = a.jobs;
  const auto records = tapf::run(cases, solvers, options);
  for (const auto& r : records) {
    if (r.outcome.starts_with("error")) std::cerr << r.case_id << ' ' << r.solver << ": " << r.outcome << '\n';
  }
  auto out = open_output(a.out);
  tapf::write_csv(out, records);
  std::cerr << records.size() << " records written to " << a.out << '\n';
  return 0;
}

struct VerifyArgs {
  std::string instance;
  std::string plan;
};

int run_verify(const VerifyArgs& a) {
  const tapf::TAPFInstance inst = tapf::load_instance(a.instance);
  std::ifstream in(a.plan);
  if (!in) throw UsageError("cannot open " + a.plan);
  const tapf::Solution s = tapf::read_solution(in, inst);
  const auto violations = tapf::validate(inst, s);
  for (const auto& v : violations) std::cout << v.message << '\n';
  if (violations.empty()) std::cout << "ok: flowtime " << s.flowtime << '\n';
  return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal target assignment and path finding"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance and write its plan");
  solve_cmd->add_option("--instance", solve.instance, "Instance file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--solver", solve.solver, "itacbs or cbsta")
      ->check(CLI::IsMember({"itacbs", "cbsta"}));
  solve_cmd->add_option("--timeout", solve.timeout, "Seconds")->capture_default_str();
  solve_cmd->add_option("--out", solve.out, "Plan file (default: stdout)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a benchmark instance");
  gen_cmd->add_option("--map", gen.map, "MovingAI map file")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--scenario", gen.scenario, "group or common")
      ->required()
      ->check(CLI::IsMember({"group", "common"}));
  gen_cmd->add_option("--agents", gen.agents, "Number of agents")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--target-set-size", gen.target_set_size, "Targets per agent (common)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--shared-ratio", gen.shared_ratio, "Shared fraction (common)")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run solvers over a directory of instances");
  bench_cmd->add_option("--cases", bench.cases, "Directory of instance files")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--solvers", bench.solvers, "Comma-separated solvers")->capture_default_str();
  bench_cmd->add_option("--timeout", bench.timeout, "Seconds per solve")->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Worker threads")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Results CSV")->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a plan against an instance");
  verify_cmd->add_option("--instance", verify.instance, "Instance file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--plan", verify.plan, "Plan file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve);
    if (gen_cmd->parsed()) return run_gen(gen);
    if (bench_cmd->parsed()) return run_bench(bench);
    if (verify_cmd->parsed()) return run_verify(verify);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const tapf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitData;
  } catch (const tapf::InstanceError& e) {
    std::cerr << "invalid instance: " << e.what() << '\n';
    return kExitData;
  } catch (const tapf::GenerationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
