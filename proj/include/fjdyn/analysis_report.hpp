#pragma once

// Everything `analyze` computes for one scenario, and its JSON rendering.

#include "fjdyn/bounded_confidence.hpp"
#include "fjdyn/fj_single.hpp"
#include "fjdyn/graph_core.hpp"
#include "fjdyn/issue_dynamics.hpp"
#include "fjdyn/oracle_suite.hpp"
#include "fjdyn/scenario_io.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fjdyn {

/// Stands in for a verdict whose precondition failed.
struct NotApplicable {
  std::string reason;
};

struct SpectralSummary {
  SpectralReport report;  // eigenvalues of ΞW
  bool converges = false;
};

struct PsiSummary {
  InfluenceLimit limit;
  /// Predicted support equals the computed one; unset when the prediction needs
  /// Assumption 2 and it fails.
  std::optional<bool> support_match;
  std::optional<std::pair<Vertex, Vertex>> first_mismatch;
  VertexSet predicted_zero_columns;
};

struct UnreachedWitness {
  Vertex agent = 0;   // partially stubborn candidate root
  Vertex misses = 0;  // partially stubborn agent it cannot reach through V_p ∪ V_n
};

struct Theorem2Report {
  Theorem2Verdict verdict;
  std::vector<UnreachedWitness> unreached;  // filled when there is no root
};

struct IssueStat {
  int issue = 0;
  long k = 0;
  double spread = 0.0;
  double mean = 0.0;
};

using RunOutcome = std::variant<Trajectory, IssueSequenceResult, BcSequenceResult, NotApplicable>;

struct AnalysisReport {
  std::string name;
  ScenarioMode mode = ScenarioMode::single;
  int n = 0;
  std::optional<std::uint64_t> seed;
  Budgets budgets;
  Tolerances tolerances;
  std::optional<ConfidenceConfig> confidence;

  AgentPartition partition;
  SccDecomposition scc;
  AssumptionCheck assumption1;
  AssumptionCheck assumption2;
  std::variant<SpectralSummary, NotApplicable> spectral;
  std::variant<PsiSummary, NotApplicable> psi;
  std::variant<Theorem2Report, NotApplicable> theorem2;
  std::variant<Corollary1Verdict, NotApplicable> corollary1;
  std::variant<Assumption3Check, NotApplicable> assumption3;
  std::variant<Theorem3Verdict, NotApplicable> theorem3;
  RunOutcome outcome;
  std::vector<IssueStat> issue_summary;
  std::vector<std::string> warnings;
};

/// Runs the scenario in the given mode. Throws NonConvergent when a sequence mode
/// needs Ψ and the limit does not exist, PreconditionViolated when bounded mode has
/// no confidence block.
RunOutcome run_mode(const Scenario& scenario, ScenarioMode mode, bool record_full = false);

/// Every check plus the scenario's own run. Numerical failures become
/// NotApplicable entries instead of exceptions.
AnalysisReport analyze(const Scenario& scenario, bool record_full = false);

std::vector<IssueStat> summarize(const RunOutcome& outcome);

/// Deterministic, pretty-printed JSON; doubles keep full round-trip precision.
std::string report_json(const AnalysisReport& report);

/// Scenario header plus the run outcome, for the simulate/sequence/bounded commands.
std::string run_json(const Scenario& scenario, ScenarioMode mode, const RunOutcome& outcome,
                     const std::vector<std::string>& warnings = {},
                     const std::optional<InnerCheck>& inner = std::nullopt);

/// Non-fatal findings about a scenario: gain outside the feasibility window and
/// confidence gaps within 1e-9 of d, where the strict comparison is fragile.
std::vector<std::string> scenario_warnings(const Scenario& scenario, const InfluenceLimit* limit);

}  // namespace fjdyn
