// fevo: run and analyze game-environment scenarios from the command line.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fevo/error.hpp"
#include "fevo/runner.hpp"

namespace {

int exit_code(fevo::ErrorCategory c) {
  switch (c) {
    case fevo::ErrorCategory::Validation:
    case fevo::ErrorCategory::Domain:
    case fevo::ErrorCategory::Config: return 3;
    case fevo::ErrorCategory::IO: return 4;
    case fevo::ErrorCategory::Integration: return 5;
    case fevo::ErrorCategory::Analysis: return 6;
  }
  return 1;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("FEVO_OUT_DIR"); env && *env) return env;
  return "fevo-out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and analyze feedback-evolving PD/OPD population games"};
  app.require_subcommand(1);

  std::string target;
  std::string out_dir = default_out_dir();
  std::optional<std::string> method, rule;
  std::optional<double> t_end;
  std::optional<std::size_t> grid;
  std::string format = "csv";
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Integrate a scenario and write trajectories and reports");
  run->add_option("scenario", target, "Builtin name or scenario file")->required();
  run->add_option("--out", out_dir, "Output directory (default: $FEVO_OUT_DIR or ./fevo-out)");
  run->add_option("--method", method, "Integrator")->check(CLI::IsMember({"rk4", "rk45"}));
  run->add_option("--t-end", t_end, "Integration horizon");
  run->add_option("--grid", grid, "Phase-grid resolution (points per axis)");
  run->add_option("--rule", rule, "Pairwise comparison rule")->check(CLI::IsMember({"fitness", "entrywise"}));
  run->add_option("--format", format, "Trajectory format")->check(CLI::IsMember({"csv", "jsonl", "both"}));
  run->add_flag("-q,--quiet", quiet, "Do not echo the log");

  auto* list = app.add_subcommand("list-builtins", "List the builtin scenarios");

  auto* analyze = app.add_subcommand("analyze", "Fixed points and stability only, no integration");
  analyze->add_option("scenario", target, "Builtin name or scenario file")->required();
  analyze->add_option("--rule", rule, "Pairwise comparison rule")->check(CLI::IsMember({"fitness", "entrywise"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& n : fevo::builtin_names()) std::cout << n << "\n";
      return 0;
    }

    fevo::Scenario s = fevo::load_scenario(target);
    if (rule) s.rule = fevo::parse_comparison_rule(*rule);

    if (analyze->parsed()) {
      s.analyses.fixed_points = true;
      s.analyses.jacobians = true;
      std::cout << fevo::fixed_points_json(s, fevo::analyze(s));
      return 0;
    }

    if (method) s.integrator.method = fevo::parse_method(*method);
    if (t_end) s.integrator.t_end = *t_end;
    if (grid) s.analyses.phase_grid = *grid;
    fevo::validate_scenario(s);

    fevo::RunOptions opts;
    if (format == "jsonl") opts.formats = {fevo::ExportFormat::JSONL};
    else if (format == "both") opts.formats = {fevo::ExportFormat::CSV, fevo::ExportFormat::JSONL};
    if (!quiet) opts.on_log = [](const std::string& l) { std::cout << l << "\n"; };
    fevo::run(s, out_dir, opts);
    if (!quiet) std::cout << "wrote " << out_dir << "\n";
    return 0;
  } catch (const fevo::Error& e) {
    std::cerr << "fevo: " << fevo::to_string(e.category()) << " error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "fevo: " << e.what() << "\n";
    return 1;
  }
}
