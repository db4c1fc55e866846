#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "saferoute/error.hpp"
#include "saferoute/phase1.hpp"

namespace {

using namespace saferoute;
using namespace saferoute::cli;

std::vector<std::string> objective_names() {
  std::vector<std::string> out;
  for (Objective o : all_objectives()) out.emplace_back(objective_name(o));
  return out;
}

void add_run_flags(CLI::App& cmd, RunOptions& o, bool scenario_flags) {
  cmd.add_option("--instance", o.instance, "Case-study directory, instance file or Solomon file")
      ->required()
      ->check(CLI::ExistingPath);
  cmd.add_option("--objective", o.objective, "Objective to minimize")->check(CLI::IsMember(objective_names()));
  if (scenario_flags) {
    auto* one = cmd.add_option("--scenario", o.scenario, "Dispatch hour of a single scenario")
                    ->check(CLI::Range(0, kHoursPerDay - 1));
    auto* all = cmd.add_flag("--all-scenarios", "Run all 24 dispatch hours (default)");
    one->excludes(all);
  }
  cmd.add_option("--seed", o.seed, "RNG seed (overrides config and SAFEROUTE_SEED)");
  cmd.add_option("--config", o.config, "Solver configuration (JSON)")->check(CLI::ExistingFile);
  cmd.add_option("--out", o.out, "Write the result table as tab-separated text");
  cmd.add_option("--threads", o.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe time-dependent vehicle routing: queueing speeds, routing and scheduling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "saferoute 0.1.0");

  SpeedsOptions speeds;
  auto* c_speeds = app.add_subcommand("speeds", "Hourly speed profiles from flow counts (M/G/1 model)");
  c_speeds->add_option("--flows", speeds.flows, "CSV arc,direction,hour,flow")->required()->check(CLI::ExistingFile);
  c_speeds->add_option("--nominal", speeds.nominal, "CSV arc,direction,nominal_speed")
      ->required()
      ->check(CLI::ExistingFile);
  c_speeds->add_option("--quantile", speeds.quantile, "Congestion threshold quantile in [0.5, 1)")
      ->check(CLI::Validator(
          [](const std::string& s) -> std::string {
            try {
              const double q = std::stod(s);
              return q >= 0.5 && q < 1.0 ? "" : "quantile must lie in [0.5, 1)";
            } catch (...) {
              return "quantile must be a number";
            }
          },
          "[0.5,1)"));
  c_speeds->add_option("--beta", speeds.beta, "Coefficient of variation of service time")
      ->check(CLI::PositiveNumber);
  c_speeds->add_option("--out", speeds.out, "Output CSV (default: stdout)");

  RunOptions solve_opts;
  auto* c_solve = app.add_subcommand("solve", "Solve every scenario and report objective and gap columns");
  add_run_flags(*c_solve, solve_opts, true);
  c_solve->add_option("--solutions", solve_opts.solutions_dir, "Directory for per-scenario solution files");
  bool no_gaps = false;
  c_solve->add_flag("--no-gaps", no_gaps, "Skip the single-objective baseline solves");

  RunOptions verify_opts;
  auto* c_verify = app.add_subcommand("verify", "Compare the solver with the exhaustive oracle");
  add_run_flags(*c_verify, verify_opts, true);
  c_verify->add_option("--tolerance", verify_opts.tolerance, "Allowed optimality gap")
      ->check(CLI::NonNegativeNumber);

  GenerateOptions gen;
  auto* c_gen = app.add_subcommand("generate", "Generate a random instance with noisy step profiles");
  c_gen->add_option("--spec", gen.spec, "Generator spec (key = value lines)")->required()->check(CLI::ExistingFile);
  c_gen->add_option("--seed", gen.seed, "Override the spec seed");
  c_gen->add_option("--out", gen.out, "Output instance file (default: stdout)");

  ConvertOptions conv;
  auto* c_conv = app.add_subcommand("convert-solomon", "Convert a Solomon file to the instance format");
  c_conv->add_option("--input", conv.input, "Solomon text file")->required()->check(CLI::ExistingFile);
  c_conv->add_option("--crash", conv.crash, "Constant crash probability per traversal")
      ->check(CLI::Range(0.0, 1.0));
  c_conv->add_option("--dummies", conv.dummies, "Dummy depot vertices")->check(CLI::NonNegativeNumber);
  c_conv->add_option("--out", conv.out, "Output instance file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_speeds) return cmd_speeds(speeds, std::cout, std::cerr);
    if (*c_solve) {
      solve_opts.gaps = !no_gaps;
      return cmd_solve(solve_opts, std::cout, std::cerr);
    }
    if (*c_verify) return cmd_verify(verify_opts, std::cout, std::cerr);
    if (*c_gen) return cmd_generate(gen, std::cout, std::cerr);
    if (*c_conv) return cmd_convert_solomon(conv, std::cout, std::cerr);
  } catch (const OracleRefusal& e) {
    std::cerr << "oracle refused: " << e.what() << "\n";
    return kOracleRefusal;
  } catch (const BudgetExceeded& e) {
    std::cerr << "oracle refused: " << e.what() << "\n";
    return kOracleRefusal;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kUsage;
}
