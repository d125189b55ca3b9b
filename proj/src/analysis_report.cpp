#include "fjdyn/analysis_report.hpp"

#include "fjdyn/errors.hpp"

#include <json.hpp>

#include <algorithm>

namespace fjdyn {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kSettleTol = SequenceOptions{}.settle_tol;

Json vertices(const VertexSet& v) { return Json(v); }

Json vertex_sets(const std::vector<VertexSet>& sets) {
  Json out = Json::array();
  for (const auto& s : sets) out.push_back(vertices(s));
  return out;
}

Json vector_json(const Vector& x) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i));
  return out;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

Json complex_list(const std::vector<std::complex<double>>& zs) {
  Json out = Json::array();
  for (const auto& z : zs) out.push_back({{"re", z.real()}, {"im", z.imag()}});
  return out;
}

Json not_applicable(const NotApplicable& na) {
  return {{"applicable", false}, {"reason", "not applicable (" + na.reason + ")"}};
}

Json state_json(const OpinionState& s) { return {{"issue", s.issue}, {"k", s.time}, {"x", vector_json(s.x)}}; }

Json optional_vertex(const std::optional<Vertex>& v) { return v ? Json(*v) : Json(nullptr); }

// Independent components with their periods; with a partition, also the first
// stubborn member of each (null when there is none).
Json iscc_witness(const SccDecomposition& scc, const AgentPartition* part) {
  Json out = Json::array();
  std::vector<int> ids = scc.independent_components();
  std::sort(ids.begin(), ids.end(), [&](int a, int b) { return scc.components[a] < scc.components[b]; });
  for (int c : ids) {
    Json e = {{"members", vertices(scc.components[c])}, {"period", scc.component_period[c]}};
    if (part) {
      Json stubborn = nullptr;
      for (Vertex v : scc.components[c]) {
        if (!std::binary_search(part->v_n.begin(), part->v_n.end(), v)) {
          stubborn = v;
          break;
        }
      }
      e["stubborn_member"] = stubborn;
    }
    out.push_back(std::move(e));
  }
  return out;
}

Json trajectory_json(const Trajectory& t) {
  Json out;
  out["kind"] = "single_issue";
  out["status"] = to_string(t.status);
  out["converged"] = t.converged;
  out["iterations"] = t.iterations;
  out["last_increment"] = t.last_increment;
  out["limit"] = t.limit ? vector_json(*t.limit) : Json(nullptr);
  // The final two states let callers inspect a non-convergent orbit.
  Json tail = Json::array();
  const std::size_t from = t.states.size() >= 2 ? t.states.size() - 2 : 0;
  for (std::size_t k = from; k < t.states.size(); ++k) tail.push_back(state_json(t.states[k]));
  out["final_states"] = std::move(tail);
  return out;
}

Json sequence_fields(const IssueSequenceResult& r) {
  Json out;
  out["outcome"] = to_string(r.outcome.kind);
  out["stop"] = to_string(r.stop);
  out["settled"] = r.settled;
  out["issues_run"] = r.issues_run;
  if (r.outcome.kind == OutcomeKind::consensus) {
    out["consensus_value"] = r.outcome.consensus_value;
  } else {
    out["consensus_value"] = nullptr;
  }
  Json clusters = Json::array();
  for (const Cluster& c : r.outcome.clusters) {
    clusters.push_back({{"members", vertices(c.members)}, {"value", c.value}});
  }
  out["clusters"] = std::move(clusters);
  out["final_spread"] = spread(r.final_opinions);
  out["final_opinions"] = vector_json(r.final_opinions);
  return out;
}

Json edges_json(const EdgeSet& edges) {
  Json out = Json::array();
  for (const auto& [a, b] : edges) out.push_back(Json::array({a, b}));
  return out;
}

Json outcome_json(const RunOutcome& outcome) {
  if (const auto* t = std::get_if<Trajectory>(&outcome)) return trajectory_json(*t);
  if (const auto* r = std::get_if<IssueSequenceResult>(&outcome)) {
    Json out = {{"kind", "issue_sequence"}};
    out.update(sequence_fields(*r));
    return out;
  }
  if (const auto* b = std::get_if<BcSequenceResult>(&outcome)) {
    Json out = {{"kind", "bounded_confidence"}};
    out.update(sequence_fields(b->result));
    out["preservation_ok"] = b->preservation_ok;
    out["first_loss_issue"] = optional_vertex(b->first_loss_issue);
    Json log = Json::array();
    for (const EdgeLogEntry& e : b->edge_log) log.push_back({{"issue", e.issue}, {"edges", edges_json(e.edges)}});
    out["edge_log"] = std::move(log);
    return out;
  }
  return not_applicable(std::get<NotApplicable>(outcome));
}

Json scenario_header(const Scenario& sc, ScenarioMode mode) {
  Json out;
  out["name"] = sc.name;
  out["n"] = sc.network.size();
  out["mode"] = to_string(mode);
  out["seed"] = sc.seed ? Json(*sc.seed) : Json(nullptr);
  return out;
}

Json tolerances_json(const Tolerances& t, const Budgets& b) {
  Json out;
  out["step_tol"] = t.step_tol;
  out["consensus_tol"] = t.consensus_tol;
  out["cluster_tol"] = t.cluster_tol;
  out["settle_tol"] = kSettleTol;
  out["support_threshold"] = kSupportThreshold;
  out["spectral_tol"] = kSpectralTol;
  out["row_sum_tol"] = 1e-9;
  out["max_iter"] = b.max_iter;
  out["max_issues"] = b.max_issues;
  return out;
}

std::vector<UnreachedWitness> unreached_witnesses(const InfluenceNetwork& net) {
  std::vector<UnreachedWitness> out;
  VertexSet susceptible = net.partition().susceptible();
  std::sort(susceptible.begin(), susceptible.end());
  for (Vertex p : net.partition().v_p) {
    const VertexSet reached = restricted_reachable(net, p, susceptible);
    for (Vertex q : net.partition().v_p) {
      if (q != p && !std::binary_search(reached.begin(), reached.end(), q)) {
        out.push_back({p, q});
        break;
      }
    }
  }
  return out;
}

}  // namespace

RunOutcome run_mode(const Scenario& sc, ScenarioMode mode, bool record_full) {
  const InfluenceNetwork& net = sc.network;
  if (mode == ScenarioMode::single) return simulate_single_issue(net, sc.x0, sc.simulation_options(record_full));

  if (mode == ScenarioMode::bounded && !sc.confidence) {
    throw PreconditionViolated("bounded mode requires a confidence block");
  }
  if (!check_assumption1(net).holds) {
    throw NonConvergent("Ψ does not exist: a non-stubborn independent component is periodic");
  }
  const InfluenceLimit limit = limit_influence_matrix(net, sc.tolerances.step_tol, sc.budgets.max_iter);
  if (mode == ScenarioMode::sequence) {
    return simulate_issue_sequence(limit, sc.x0, sc.sequence_options(record_full));
  }
  return simulate_bc_sequence(limit, sc.x0, *sc.confidence, sc.sequence_options(record_full));
}

std::vector<IssueStat> summarize(const RunOutcome& outcome) {
  const std::vector<OpinionState>* states = nullptr;
  if (const auto* t = std::get_if<Trajectory>(&outcome)) states = &t->states;
  if (const auto* r = std::get_if<IssueSequenceResult>(&outcome)) states = &r->initial_opinions_per_issue;
  if (const auto* b = std::get_if<BcSequenceResult>(&outcome)) states = &b->result.initial_opinions_per_issue;
  std::vector<IssueStat> out;
  if (!states) return out;
  for (const OpinionState& s : *states) out.push_back({s.issue, s.time, spread(s.x), s.x.mean()});
  return out;
}

AnalysisReport analyze(const Scenario& sc, bool record_full) {
  const InfluenceNetwork& net = sc.network;
  AnalysisReport rep;
  rep.name = sc.name;
  rep.mode = sc.mode;
  rep.n = net.size();
  rep.seed = sc.seed;
  rep.budgets = sc.budgets;
  rep.tolerances = sc.tolerances;
  rep.confidence = sc.confidence;
  rep.partition = net.partition();
  rep.scc = scc_decompose(net);
  rep.assumption1 = check_assumption1(net, rep.scc);
  rep.assumption2 = check_assumption2(net, rep.scc);

  if (rep.n > kMaxDenseEigenSize) {
    rep.spectral = NotApplicable{"n exceeds the dense eigensolver limit of 64"};
  } else {
    try {
      SpectralSummary s;
      s.report = eigenvalues_dense(net.xi_w(), kSpectralTol);
      s.converges = check_convergence_spectral(net).converges;
      rep.spectral = std::move(s);
    } catch (const Error& e) {
      rep.spectral = NotApplicable{std::string("eigensolver failed: ") + e.what()};
    }
  }

  if (!rep.assumption1.holds) {
    rep.psi = NotApplicable{"precondition assumption1 failed"};
  } else {
    try {
      PsiSummary ps;
      ps.limit = limit_influence_matrix(net, sc.tolerances.step_tol, sc.budgets.max_iter);
      if (rep.assumption2.holds) {
        const BoolMatrix predicted = predicted_psi_support(net);
        ps.support_match = predicted == ps.limit.support;
        for (int i = 0; i < rep.n && !ps.first_mismatch; ++i) {
          for (int j = 0; j < rep.n; ++j) {
            if (predicted(i, j) != ps.limit.support(i, j)) {
              ps.first_mismatch = std::make_pair(i, j);
              break;
            }
          }
        }
      }
      ps.predicted_zero_columns = predicted_zero_columns(net);
      rep.psi = std::move(ps);
    } catch (const Error& e) {
      rep.psi = NotApplicable{std::string("limit failed: ") + e.what()};
    }
  }

  if (!rep.partition.v_f.empty()) {
    rep.theorem2 = NotApplicable{"precondition no fully stubborn agents failed"};
    rep.corollary1 = NotApplicable{"precondition no fully stubborn agents failed"};
  } else if (!rep.assumption2.holds) {
    rep.theorem2 = NotApplicable{"precondition assumption2 failed"};
    rep.corollary1 = NotApplicable{"precondition assumption2 failed"};
  } else {
    Theorem2Report t2;
    t2.verdict = check_theorem2(net);
    if (!t2.verdict.consensus) t2.unreached = unreached_witnesses(net);
    rep.theorem2 = std::move(t2);
    rep.corollary1 = check_corollary1(net);
  }

  const auto* ps = std::get_if<PsiSummary>(&rep.psi);
  if (!sc.confidence) {
    rep.assumption3 = NotApplicable{"no confidence block in the scenario"};
    rep.theorem3 = NotApplicable{"no confidence block in the scenario"};
  } else if (!ps) {
    rep.assumption3 = NotApplicable{"precondition Ψ exists failed"};
    rep.theorem3 = NotApplicable{"precondition Ψ exists failed"};
  } else {
    const Vector y0 = ps->limit.psi * sc.x0;
    rep.assumption3 = check_assumption3(net, ps->limit, y0, *sc.confidence);
    rep.theorem3 = check_theorem3(net, ps->limit, y0, *sc.confidence);
  }

  try {
    rep.outcome = run_mode(sc, sc.mode, record_full);
  } catch (const Error& e) {
    rep.outcome = NotApplicable{std::string("run failed: ") + e.what()};
  }
  rep.issue_summary = summarize(rep.outcome);
  rep.warnings = scenario_warnings(sc, ps ? &ps->limit : nullptr);
  return rep;
}

std::string report_json(const AnalysisReport& rep) {
  Json doc;
  doc["scenario"] = {{"name", rep.name},
                     {"n", rep.n},
                     {"mode", to_string(rep.mode)},
                     {"seed", rep.seed ? Json(*rep.seed) : Json(nullptr)}};
  doc["tolerances"] = tolerances_json(rep.tolerances, rep.budgets);
  if (rep.confidence) {
    const GainWindow win = gain_window(rep.n);
    doc["confidence"] = {{"d", rep.confidence->d},
                         {"h", rep.confidence->h},
                         {"gain_window", {{"lower", win.lower}, {"upper", rep.n > 1 ? Json(win.upper) : Json(nullptr)}}},
                         {"h_in_window", win.contains(rep.confidence->h)},
                         {"common_neighbor_threshold", assumption3_threshold(rep.n, rep.confidence->h)}};
  } else {
    doc["confidence"] = nullptr;
  }

  doc["partition"] = {{"fully_stubborn", vertices(rep.partition.v_f)},
                      {"partially_stubborn", vertices(rep.partition.v_p)},
                      {"non_stubborn", vertices(rep.partition.v_n)}};
  {
    Json comps = Json::array();
    for (std::size_t c = 0; c < rep.scc.components.size(); ++c) {
      comps.push_back({{"members", vertices(rep.scc.components[c])},
                       {"independent", static_cast<bool>(rep.scc.is_independent[c])},
                       {"period", rep.scc.component_period[c]}});
    }
    doc["components"] = std::move(comps);
  }

  doc["assumption1"] = {{"holds", rep.assumption1.holds},
                        {"witness", rep.assumption1.holds
                                        ? Json{{"independent_components", iscc_witness(rep.scc, nullptr)}}
                                        : Json{{"violating_components", vertex_sets(rep.assumption1.violating_isccs)}}}};
  doc["assumption2"] = {{"holds", rep.assumption2.holds},
                        {"witness", rep.assumption2.holds
                                        ? Json{{"independent_components", iscc_witness(rep.scc, &rep.partition)}}
                                        : Json{{"violating_components", vertex_sets(rep.assumption2.violating_isccs)}}}};
  if (const auto* s = std::get_if<SpectralSummary>(&rep.spectral)) {
    doc["spectral"] = {{"applicable", true},
                       {"matrix", "xi_w"},
                       {"converges", s->converges},
                       {"spectral_radius", s->report.spectral_radius},
                       {"unit_circle_eigenvalues", complex_list(s->report.unit_circle_eigenvalues)},
                       {"eigenvalues", complex_list(s->report.eigenvalues)}};
  } else {
    doc["spectral"] = not_applicable(std::get<NotApplicable>(rep.spectral));
  }

  if (const auto* p = std::get_if<PsiSummary>(&rep.psi)) {
    Json psi = {{"applicable", true}, {"method", to_string(p->limit.method)}};
    if (p->support_match) {
      psi["support_match"] = *p->support_match;
      psi["first_mismatch"] =
          p->first_mismatch ? Json::array({p->first_mismatch->first, p->first_mismatch->second}) : Json(nullptr);
    } else {
      psi["support_match"] = not_applicable({"precondition assumption2 failed"});
    }
    psi["predicted_zero_columns"] = vertices(p->predicted_zero_columns);
    psi["matrix"] = matrix_json(p->limit.psi);
    doc["psi"] = std::move(psi);
  } else {
    doc["psi"] = not_applicable(std::get<NotApplicable>(rep.psi));
  }

  if (const auto* t = std::get_if<Theorem2Report>(&rep.theorem2)) {
    Json unreached = Json::array();
    for (const auto& u : t->unreached) unreached.push_back({{"agent", u.agent}, {"misses", u.misses}});
    doc["theorem2"] = {{"applicable", true},
                       {"consensus", t->verdict.consensus},
                       {"root_agent", optional_vertex(t->verdict.root_agent)},
                       {"unreached", std::move(unreached)}};
  } else {
    doc["theorem2"] = not_applicable(std::get<NotApplicable>(rep.theorem2));
  }
  if (const auto* c = std::get_if<Corollary1Verdict>(&rep.corollary1)) {
    doc["corollary1"] = {{"applicable", true}, {"clusters", c->clusters}, {"independent_components", vertex_sets(c->isccs)}};
  } else {
    doc["corollary1"] = not_applicable(std::get<NotApplicable>(rep.corollary1));
  }

  if (const auto* a = std::get_if<Assumption3Check>(&rep.assumption3)) {
    Json viol = Json::array();
    for (const auto& v : a->violations) {
      Json e = {{"clause", v.clause}, {"i", v.i}, {"j", v.j}};
      if (v.clause == 1) {
        e["l"] = optional_vertex(v.l);
      } else {
        e["common_neighbors"] = v.common_neighbors;
      }
      viol.push_back(std::move(e));
    }
    doc["assumption3"] = {{"applicable", true},
                          {"holds", a->holds},
                          {"threshold", a->threshold},
                          {"violations", std::move(viol)}};
  } else {
    doc["assumption3"] = not_applicable(std::get<NotApplicable>(rep.assumption3));
  }
  if (const auto* t = std::get_if<Theorem3Verdict>(&rep.theorem3)) {
    doc["theorem3"] = {
        {"applicable", true},
        {"consensus", t->consensus},
        {"conditions",
         {{"assumption2", t->assumption2},
          {"assumption3", t->assumption3},
          {"rooted_partially_stubborn", t->rooted_partially_stubborn},
          {"fully_stubborn_connected", t->fully_stubborn_connected},
          {"bridge_edge", t->bridge_edge}}},
        {"root_agent", optional_vertex(t->root_agent)},
        {"bridge", t->bridge ? Json::array({t->bridge->first, t->bridge->second}) : Json(nullptr)},
        {"failed_conditions", t->failed_conditions}};
  } else {
    doc["theorem3"] = not_applicable(std::get<NotApplicable>(rep.theorem3));
  }

  doc["outcome"] = outcome_json(rep.outcome);
  Json stats = Json::array();
  for (const IssueStat& s : rep.issue_summary) {
    stats.push_back({{"issue", s.issue}, {"k", s.k}, {"spread", s.spread}, {"mean", s.mean}});
  }
  doc["issue_summary"] = std::move(stats);
  doc["warnings"] = rep.warnings;
  return doc.dump(2) + "\n";
}

std::vector<std::string> scenario_warnings(const Scenario& sc, const InfluenceLimit* limit) {
  std::vector<std::string> out;
  if (!sc.confidence) return out;
  const int n = sc.network.size();
  const GainWindow win = gain_window(n);
  if (!win.contains(sc.confidence->h)) {
    out.push_back("gain h = " + format_double(sc.confidence->h) + " lies outside (1/(2n), 1/(n-1)) = (" +
                  format_double(win.lower) + ", " + format_double(win.upper) +
                  "); the connectivity-preservation conditions cannot hold");
  }
  if (limit) {
    for (const auto& [i, j] : near_ties(limit->psi * sc.x0, sc.confidence->d)) {
      out.push_back("agents " + std::to_string(i) + " and " + std::to_string(j) +
                    " have |y_i - y_j| within 1e-9 of d at issue 0");
    }
  }
  return out;
}

std::string run_json(const Scenario& sc, ScenarioMode mode, const RunOutcome& outcome,
                     const std::vector<std::string>& warnings, const std::optional<InnerCheck>& inner) {
  Json doc;
  doc["scenario"] = scenario_header(sc, mode);
  doc["tolerances"] = tolerances_json(sc.tolerances, sc.budgets);
  doc["outcome"] = outcome_json(outcome);
  Json stats = Json::array();
  for (const IssueStat& s : summarize(outcome)) {
    stats.push_back({{"issue", s.issue}, {"k", s.k}, {"spread", s.spread}, {"mean", s.mean}});
  }
  doc["issue_summary"] = std::move(stats);
  if (inner) {
    doc["inner_check"] = {{"issues_checked", inner->issues_checked},
                          {"max_deviation", inner->max_deviation},
                          {"max_inner_iterations", inner->max_inner_iterations},
                          {"all_converged", inner->all_converged}};
  }
  doc["warnings"] = warnings;
  return doc.dump(2) + "\n";
}

}  // namespace fjdyn
