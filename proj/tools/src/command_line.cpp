#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ctscuc/cli.hpp"
#include "ctscuc/result_file.hpp"
#include "ctscuc/solver.hpp"

namespace ctscuc::cli {

namespace {

// Raw flag values; converted into SolveOptions once parsing succeeds.
struct Flags {
  std::string cts = "off";
  int z_max = 1;
  std::string emergency = "regular";
  double gap = 0.01;
  std::string big_m = "per-line";
  double angle_bound = 0.6;
  std::optional<int> reference_bus;
  std::string reserve = "on";
};

void add_model_flags(CLI::App* app, Flags& f, RunConfig& cfg, bool with_cts) {
  if (with_cts) {
    app->add_option("--cts", f.cts, "Corrective transmission switching")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    app->add_option("--zmax", f.z_max, "Voluntary openings allowed per contingency")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--emergency-rating", f.emergency, "Post-contingency flow limit")
        ->check(CLI::IsMember({"regular", "infinite"}))
        ->capture_default_str();
  }
  app->add_option("--gap", f.gap, "Relative MIP gap")->check(CLI::Range(0.0, 0.999))->capture_default_str();
  app->add_option("--time-limit", cfg.time_limit, "Per-solve time limit in seconds (0 = none)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--big-m", f.big_m, "per-line or fixed:<MW>")->capture_default_str();
  app->add_option("--angle-bound", f.angle_bound, "Bus angle bound (rad)")->capture_default_str();
  app->add_option("--reference-bus", f.reference_bus, "Reference bus id (default: lowest id)");
  app->add_option("--reserve", f.reserve, "Spinning reserve requirement")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
}

SolveOptions to_options(const Flags& f) {
  SolveOptions o;
  o.cts_enabled = f.cts == "on";
  o.z_max = f.z_max;
  o.emergency_rating_mode = parse_emergency_rating_mode(f.emergency);
  o.mip_gap = f.gap;
  o.big_m = parse_big_m(f.big_m);
  o.angle_bound = f.angle_bound;
  o.reference_bus = f.reference_bus;
  o.reserve_enabled = f.reserve == "on";
  return o;
}

std::string environment_help() {
  std::ostringstream s;
  s << "Environment:\n"
    << "  " << kSolverEnvVar << "          MILP backend (default: highs)\n"
    << "  " << kSolverThreadsEnvVar << "  solver thread count\n"
    << "  " << kSolverLogEnvVar << "      non-empty: print backend log\n"
    << "Exit codes: 0 ok, 2 infeasible, 3 input error, 4 verification failed,\n"
    << "            5 time limit / unbounded / solver error, 1 unexpected";
  return s.str();
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Security-constrained unit commitment with corrective transmission switching",
               "ctscuc"};
  app.footer(environment_help());
  app.require_subcommand(1);

  RunConfig cfg;
  Flags flags;

  auto* solve = app.add_subcommand("solve", "Build, solve and verify one model");
  solve->add_option("--case", cfg.case_path, "Case file")->required();
  solve->add_option("--periods", cfg.periods, "Keep only the first N periods")->check(CLI::PositiveNumber);
  add_model_flags(solve, flags, cfg, true);
  solve->add_option("--out", cfg.output_path, "Result file to write");
  solve->add_option("--write-lp", cfg.lp_path, "Also write the model in LP format");

  auto* verify = app.add_subcommand("verify", "Re-check a stored result against its case");
  verify->add_option("--result", cfg.result_path, "Result file")->required();
  verify->add_option("--case", cfg.case_path, "Case file (default: the one recorded in the result)");
  verify->add_option("--out", cfg.output_path, "Verification report to write");

  auto* report = app.add_subcommand("report", "Tables from stored results");
  report->add_option("--result", cfg.result_path, "Result file")->required();
  report->add_option("--compare", cfg.compare_path,
                     "Second result: a Scenario II run for congestion cost, or the same scenario "
                     "with CTS toggled for overload statistics");
  report->add_option("--case", cfg.case_path, "Case file (default: the one recorded in the result)");
  report->add_option("--out", cfg.output_path, "Analyses to write as JSON");

  auto* sweep = app.add_subcommand("sweep-zmax", "Congestion cost against the switching budget");
  sweep->add_option("--case", cfg.case_path, "Case file")->required();
  sweep->add_option("--periods", cfg.periods, "Keep only the first N periods")->check(CLI::PositiveNumber);
  sweep->add_option("--zmax-values", cfg.zmax_values, "Budgets to try; 'all' = every switchable line")
      ->delimiter(',')
      ->required();
  add_model_flags(sweep, flags, cfg, false);
  sweep->add_option("--out", cfg.output_path, "Sweep result to write");
  sweep->add_option("--csv", cfg.csv_path, "Two-column CSV (z_max, congestion_cost)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_code::kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto* sub : app.get_subcommands())
      if (sub->parsed()) err << sub->help();
    return exit_code::kInputError;
  }

  if (solve->parsed()) cfg.command = Command::Solve;
  if (verify->parsed()) cfg.command = Command::Verify;
  if (report->parsed()) cfg.command = Command::Report;
  if (sweep->parsed()) cfg.command = Command::SweepZmax;

  try {
    cfg.options = to_options(flags);
  } catch (const ResultFileError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kInputError;
  }
  return run(cfg, out, err);
}

}  // namespace ctscuc::cli
