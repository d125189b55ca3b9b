#include "fjdyn/cli.hpp"

#include "fjdyn/analysis_report.hpp"
#include "fjdyn/errors.hpp"
#include "fjdyn/scenario_io.hpp"
#include "fjdyn/verify_suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <ostream>
#include <regex>
#include <stdexcept>

namespace fjdyn {

namespace {

struct GlobalFlags {
  std::optional<double> tol;
  std::optional<long> max_iter;
  std::optional<int> max_issues;
  std::string out_path;
  std::string report_path;
  bool record_full = false;
  bool inner_check = false;
};

// Failures that are the caller's fault, mapped to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scenario load_with_overrides(const std::string& path, const GlobalFlags& flags) {
  Scenario sc = load_scenario(path);
  if (flags.tol) sc.tolerances.step_tol = *flags.tol;
  if (flags.max_iter) sc.budgets.max_iter = *flags.max_iter;
  if (flags.max_issues) sc.budgets.max_issues = *flags.max_issues;
  return sc;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

void write_csv(const RunOutcome& outcome, int n, const std::string& path) {
  if (path.empty()) return;
  if (const auto* t = std::get_if<Trajectory>(&outcome)) write_trajectory(*t, n, path);
  if (const auto* r = std::get_if<IssueSequenceResult>(&outcome)) write_trajectory(*r, n, path);
  if (const auto* b = std::get_if<BcSequenceResult>(&outcome)) write_trajectory(b->result, n, path);
}

SeedRange parse_seeds(const std::string& text) {
  static const std::regex pattern(R"(^(\d+)\.\.(\d+)$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw UsageError("--seeds expects A..B, got " + text);
  SeedRange r{std::stoull(m[1].str()), std::stoull(m[2].str())};
  if (r.last < r.first) throw UsageError("--seeds range is empty: " + text);
  return r;
}

int run_verify(const std::vector<std::string>& suites_arg, const std::string& seeds_arg, int jobs,
               const GlobalFlags& flags, std::ostream& out) {
  std::vector<std::string> suites = suites_arg.empty() ? suite_names() : suites_arg;
  for (const auto& s : suites) {
    const auto& known = suite_names();
    if (std::find(known.begin(), known.end(), s) == known.end()) throw UsageError("unknown suite: " + s);
  }
  std::optional<SeedRange> seeds;
  if (!seeds_arg.empty()) seeds = parse_seeds(seeds_arg);

  std::vector<SuiteResult> results;
  bool ok = true;
  for (const auto& s : suites) {
    results.push_back(run_suite(s, seeds ? *seeds : default_seed_range(s), jobs));
    ok = ok && results.back().passed();
  }
  emit(suite_results_json(results), flags.report_path, out);
  return ok ? kExitOk : kExitDisagreement;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Friedkin-Johnsen opinion dynamics: analysis, simulation and verification"};
  app.name("fjdyn");
  app.fallthrough();
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--tol", flags.tol, "single-issue step tolerance (infinity norm)")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", flags.max_iter, "single-issue iteration budget")->check(CLI::PositiveNumber);
  app.add_option("--max-issues", flags.max_issues, "issue budget for sequences")->check(CLI::PositiveNumber);
  app.add_option("--out", flags.out_path, "trajectory CSV output path");
  app.add_option("--report", flags.report_path, "write the JSON report here instead of stdout");
  app.add_flag("--record-full", flags.record_full, "record every state instead of first and last");
  app.add_flag("--inner-check", flags.inner_check,
               "sequence modes: rerun each recorded issue's inner dynamics and compare with Ψ x");

  std::string scenario_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "run every condition check and the scenario's own mode");
  analyze_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  auto* simulate_cmd = app.add_subcommand("simulate", "single-issue dynamics");
  simulate_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  auto* sequence_cmd = app.add_subcommand("sequence", "path-dependent issue sequence");
  sequence_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  auto* bounded_cmd = app.add_subcommand("bounded", "issue sequence with bounded confidence");
  bounded_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();

  std::vector<std::string> suites;
  std::string seeds;
  int jobs = 1;
  auto* verify_cmd = app.add_subcommand("verify", "randomized predicate-versus-oracle suites");
  verify_cmd->add_option("--suites", suites, "comma-separated suite names")->delimiter(',');
  verify_cmd->add_option("--seeds", seeds, "inclusive seed range A..B applied to every suite");
  verify_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  try {
    if (verify_cmd->parsed()) return run_verify(suites, seeds, jobs, flags, out);

    Scenario sc;
    try {
      sc = load_with_overrides(scenario_path, flags);
    } catch (const Error& e) {
      // Unparseable, invalid or unreadable input.
      err << "error: " << scenario_path << ": " << e.what() << "\n";
      return kExitValidation;
    }
    if (analyze_cmd->parsed()) {
      const AnalysisReport rep = analyze(sc, flags.record_full);
      for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
      write_csv(rep.outcome, sc.network.size(), flags.out_path);
      emit(report_json(rep), flags.report_path, out);
      return kExitOk;
    }
    ScenarioMode mode = ScenarioMode::single;
    if (sequence_cmd->parsed()) mode = ScenarioMode::sequence;
    if (bounded_cmd->parsed()) {
      mode = ScenarioMode::bounded;
      if (!sc.confidence) throw ValidationError("confidence", "the bounded command needs a confidence block");
    }
    const RunOutcome outcome = run_mode(sc, mode, flags.record_full);
    std::vector<std::string> warnings;
    std::optional<InnerCheck> inner;
    if (mode != ScenarioMode::single) {
      const InfluenceLimit limit =
          limit_influence_matrix(sc.network, sc.tolerances.step_tol, sc.budgets.max_iter);
      warnings = scenario_warnings(sc, &limit);
      if (flags.inner_check) {
        const auto* r = std::get_if<IssueSequenceResult>(&outcome);
        const auto* b = std::get_if<BcSequenceResult>(&outcome);
        const auto& issues = r ? r->initial_opinions_per_issue : b->result.initial_opinions_per_issue;
        inner = inner_limit_check(sc.network, limit, issues, sc.simulation_options());
      }
    }
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    write_csv(outcome, sc.network.size(), flags.out_path);
    emit(run_json(sc, mode, outcome, warnings, inner), flags.report_path, out);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << scenario_path << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace fjdyn
