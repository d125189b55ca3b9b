#pragma once

// Path-dependent issue sequences: each agent's initial opinion on issue s+1 is its
// best response to the cost
//   C_i(x) = ζ_i (x_i - x_i(s))^2 + (1 - ζ_i) Σ_j w_ij (x_i - x_j)^2,  ζ_i = 1 - ξ_i,
// which gives x(s+1) = Ψ x(s) with Ψ = (I - ΞW)^{-1}(I - Ξ).

#include "fjdyn/fj_single.hpp"
#include "fjdyn/graph_core.hpp"

#include <optional>
#include <vector>

namespace fjdyn {

struct CognitiveInertia {
  Vector zeta;

  static CognitiveInertia of(const InfluenceNetwork& net);
};

double evaluate_cost(const InfluenceNetwork& net, Vertex agent, const Vector& x,
                     const Vector& prev_initial);

/// Ψ x. Throws SingularSystem when Assumption 2 fails.
Vector issue_transition(const InfluenceNetwork& net, const Vector& x_init);
Vector issue_transition(const InfluenceLimit& limit, const Vector& x_init);

/// Support of Ψ implied by the restricted-path structure of G(W).
/// Throws SingularSystem when Assumption 2 fails.
BoolMatrix predicted_psi_support(const InfluenceNetwork& net);

struct Theorem2Verdict {
  bool consensus = false;
  std::optional<Vertex> root_agent;
};

/// Requires V_f empty and Assumption 2, else PreconditionViolated.
Theorem2Verdict check_theorem2(const InfluenceNetwork& net);

/// Some partially stubborn agent reaches every other one through V_p ∪ V_n.
/// No precondition; shared by the bounded-confidence consensus test.
std::optional<Vertex> partially_stubborn_root(const InfluenceNetwork& net);

struct Corollary1Verdict {
  bool clusters = false;
  std::vector<VertexSet> isccs;
};

/// Requires V_f empty and Assumption 2, else PreconditionViolated.
Corollary1Verdict check_corollary1(const InfluenceNetwork& net);

struct Cluster {
  VertexSet members;
  double value = 0.0;  // mean of the members' settled opinions
};

enum class OutcomeKind { consensus, clusters, budget_exhausted };

const char* to_string(OutcomeKind kind);

struct SequenceOutcome {
  OutcomeKind kind = OutcomeKind::budget_exhausted;
  double consensus_value = 0.0;
  std::vector<Cluster> clusters;
};

/// Groups agents whose values are within tol, transitively.
std::vector<Cluster> group_clusters(const Vector& x, double tol);

SequenceOutcome classify_settled(const Vector& x, double consensus_tol, double cluster_tol);

/// Why a sequence stopped. Opinion spread never grows under a row-stochastic map, so a
/// run that exhausts its budget with spread within consensus_tol still has a final
/// classification: the limit's spread is bounded by the same value.
enum class SequenceStop { settled, spread_within_consensus_tol, budget_exhausted };

const char* to_string(SequenceStop stop);

struct SequenceOptions {
  int max_issues = 10000;
  double consensus_tol = 1e-6;
  double cluster_tol = 1e-6;
  // Successive initial-opinion vectors closer than this count as settled.
  double settle_tol = 1e-12;
  bool record_full = false;
};

struct IssueSequenceResult {
  /// x(s, k_s) for every issue when recorded in full, else the first and last.
  std::vector<OpinionState> initial_opinions_per_issue;
  SequenceOutcome outcome;
  /// Transitions applied before the sequence settled (or the budget ran out).
  int issues_run = 0;
  /// True when the outcome is final (stop != budget_exhausted).
  bool settled = false;
  SequenceStop stop = SequenceStop::budget_exhausted;
  Vector final_opinions;
};

/// Shared tail of the sequence simulators: records the last state and classifies.
void finish_sequence(IssueSequenceResult& result, const Vector& x, int issues,
                     const SequenceOptions& options);

struct InnerCheck {
  int issues_checked = 0;
  /// max over checked issues of |x(s, ∞) - Ψ x(s, 0)|, infinity norm.
  double max_deviation = 0.0;
  long max_inner_iterations = 0;
  bool all_converged = true;
};

/// Runs each given issue's single-issue dynamics to tolerance and compares the
/// limit with Ψ applied to the issue's initial opinions.
InnerCheck inner_limit_check(const InfluenceNetwork& net, const InfluenceLimit& limit,
                             const std::vector<OpinionState>& issues, const SimulationOptions& options);

IssueSequenceResult simulate_issue_sequence(const InfluenceNetwork& net, const Vector& x00,
                                            const SequenceOptions& options = {});
IssueSequenceResult simulate_issue_sequence(const InfluenceLimit& limit, const Vector& x00,
                                            const SequenceOptions& options = {});

}  // namespace fjdyn
