#include "fjdyn/issue_dynamics.hpp"

#include "fjdyn/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fjdyn {

namespace {

void require_theorem2_preconditions(const InfluenceNetwork& net, const char* what) {
  if (!net.partition().v_f.empty()) {
    throw PreconditionViolated(std::string(what) + " requires no fully stubborn agents");
  }
  if (!check_assumption2(net).holds) {
    throw PreconditionViolated(std::string(what) +
                               " requires every independent component to hold a stubborn agent");
  }
}

}  // namespace

CognitiveInertia CognitiveInertia::of(const InfluenceNetwork& net) {
  return {Vector::Ones(net.size()) - net.susceptibility()};
}

double evaluate_cost(const InfluenceNetwork& net, Vertex agent, const Vector& x,
                     const Vector& prev_initial) {
  const double zeta = 1.0 - net.susceptibility()(agent);
  const double own = x(agent) - prev_initial(agent);
  double social = 0.0;
  for (int j = 0; j < net.size(); ++j) {
    const double gap = x(agent) - x(j);
    social += net.weights()(agent, j) * gap * gap;
  }
  return zeta * own * own + (1.0 - zeta) * social;
}

Vector issue_transition(const InfluenceNetwork& net, const Vector& x_init) {
  return issue_transition(closed_form_limit(net), x_init);
}

Vector issue_transition(const InfluenceLimit& limit, const Vector& x_init) {
  if (x_init.size() != limit.psi.cols()) {
    throw DimensionMismatch("initial opinions have length " + std::to_string(x_init.size()) +
                            ", Ψ has " + std::to_string(limit.psi.cols()) + " columns");
  }
  return limit.psi * x_init;
}

BoolMatrix predicted_psi_support(const InfluenceNetwork& net) {
  if (!check_assumption2(net).holds) {
    throw SingularSystem("Ψ has no closed form: an independent component has no stubborn agent");
  }
  const int n = net.size();
  const VertexSet susceptible = [&] {
    VertexSet s = net.partition().susceptible();
    std::sort(s.begin(), s.end());
    return s;
  }();

  BoolMatrix support = BoolMatrix::Constant(n, n, false);
  for (Vertex j : net.partition().stubborn()) {
    support(j, j) = true;
    for (Vertex i : restricted_reachable(net, j, susceptible)) {
      if (net.agent_class(i) != AgentClass::fully_stubborn) support(i, j) = true;
    }
  }
  return support;
}

std::optional<Vertex> partially_stubborn_root(const InfluenceNetwork& net) {
  const VertexSet& v_p = net.partition().v_p;
  VertexSet susceptible = net.partition().susceptible();
  std::sort(susceptible.begin(), susceptible.end());
  for (Vertex p : v_p) {
    VertexSet reached = restricted_reachable(net, p, susceptible);
    bool all = std::all_of(v_p.begin(), v_p.end(), [&](Vertex q) {
      return q == p || std::binary_search(reached.begin(), reached.end(), q);
    });
    if (all) return p;
  }
  return std::nullopt;
}

Theorem2Verdict check_theorem2(const InfluenceNetwork& net) {
  require_theorem2_preconditions(net, "the consensus test");
  Theorem2Verdict verdict;
  verdict.root_agent = partially_stubborn_root(net);
  verdict.consensus = verdict.root_agent.has_value();
  return verdict;
}

Corollary1Verdict check_corollary1(const InfluenceNetwork& net) {
  require_theorem2_preconditions(net, "the cluster test");
  SccDecomposition scc = scc_decompose(net);
  Corollary1Verdict verdict;
  for (int c : scc.independent_components()) verdict.isccs.push_back(scc.components[c]);
  std::sort(verdict.isccs.begin(), verdict.isccs.end());
  verdict.clusters = verdict.isccs.size() > 1;
  return verdict;
}

const char* to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::consensus: return "consensus";
    case OutcomeKind::clusters: return "clusters";
    case OutcomeKind::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

const char* to_string(SequenceStop stop) {
  switch (stop) {
    case SequenceStop::settled: return "settled";
    case SequenceStop::spread_within_consensus_tol: return "spread_within_consensus_tol";
    case SequenceStop::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

std::vector<Cluster> group_clusters(const Vector& x, double tol) {
  // On the real line the transitive closure of |a - b| <= tol splits at sorted gaps > tol.
  const int n = static_cast<int>(x.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x(a) < x(b); });

  std::vector<Cluster> clusters;
  for (int k = 0; k < n; ++k) {
    if (k == 0 || x(order[k]) - x(order[k - 1]) > tol) clusters.emplace_back();
    clusters.back().members.push_back(order[k]);
  }
  for (Cluster& c : clusters) {
    std::sort(c.members.begin(), c.members.end());
    double sum = 0.0;
    for (Vertex v : c.members) sum += x(v);
    c.value = sum / static_cast<double>(c.members.size());
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.members.front() < b.members.front(); });
  return clusters;
}

SequenceOutcome classify_settled(const Vector& x, double consensus_tol, double cluster_tol) {
  SequenceOutcome outcome;
  if (spread(x) <= consensus_tol) {
    outcome.kind = OutcomeKind::consensus;
    outcome.consensus_value = x.mean();
    Cluster all;
    all.members.resize(x.size());
    std::iota(all.members.begin(), all.members.end(), 0);
    all.value = outcome.consensus_value;
    outcome.clusters.push_back(std::move(all));
  } else {
    outcome.kind = OutcomeKind::clusters;
    outcome.clusters = group_clusters(x, cluster_tol);
  }
  return outcome;
}

InnerCheck inner_limit_check(const InfluenceNetwork& net, const InfluenceLimit& limit,
                             const std::vector<OpinionState>& issues, const SimulationOptions& options) {
  InnerCheck check;
  SimulationOptions quiet = options;
  quiet.record_full = false;
  for (const OpinionState& st : issues) {
    const Trajectory run = simulate_single_issue(net, st.x, quiet);
    ++check.issues_checked;
    check.max_inner_iterations = std::max(check.max_inner_iterations, run.iterations);
    if (!run.converged) {
      check.all_converged = false;
      continue;
    }
    const Vector predicted = limit.psi * st.x;
    check.max_deviation = std::max(check.max_deviation, inf_norm(Vector(*run.limit - predicted)));
  }
  return check;
}

void finish_sequence(IssueSequenceResult& result, const Vector& x, int issues,
                     const SequenceOptions& options) {
  if (result.stop == SequenceStop::budget_exhausted && spread(x) <= options.consensus_tol) {
    result.stop = SequenceStop::spread_within_consensus_tol;
  }
  result.issues_run = issues;
  if (!options.record_full && issues > 0) result.initial_opinions_per_issue.push_back({x, issues, 0});
  result.final_opinions = x;
  result.settled = result.stop != SequenceStop::budget_exhausted;
  if (result.settled) {
    result.outcome = classify_settled(x, options.consensus_tol, options.cluster_tol);
  } else {
    result.outcome = SequenceOutcome{};
  }
}

IssueSequenceResult simulate_issue_sequence(const InfluenceNetwork& net, const Vector& x00,
                                            const SequenceOptions& options) {
  return simulate_issue_sequence(closed_form_limit(net), x00, options);
}

IssueSequenceResult simulate_issue_sequence(const InfluenceLimit& limit, const Vector& x00,
                                            const SequenceOptions& options) {
  IssueSequenceResult result;
  result.initial_opinions_per_issue.push_back({x00, 0, 0});
  Vector x = x00;
  int s = 0;
  while (s < options.max_issues) {
    Vector next = issue_transition(limit, x);
    if (inf_norm(Vector(next - x)) <= options.settle_tol) {
      result.stop = SequenceStop::settled;
      break;
    }
    x = std::move(next);
    ++s;
    if (options.record_full) result.initial_opinions_per_issue.push_back({x, s, 0});
  }
  finish_sequence(result, x, s, options);
  return result;
}

}  // namespace fjdyn
