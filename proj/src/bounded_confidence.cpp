#include "fjdyn/bounded_confidence.hpp"

#include "fjdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fjdyn {

namespace {

void check_gain(int n, double h) {
  if (!(h > 0.0) || !(1.0 - (n - 1) * h > 0.0)) {
    throw GainOutOfRange("gain h = " + std::to_string(h) + " must satisfy h > 0 and 1 - (n-1)h > 0 for n = " +
                         std::to_string(n));
  }
}

BoolMatrix membership(const NeighborSets& neighbors) {
  const int n = static_cast<int>(neighbors.size());
  BoolMatrix in = BoolMatrix::Constant(n, n, false);
  for (int i = 0; i < n; ++i) {
    for (Vertex j : neighbors[i]) in(i, j) = true;
  }
  return in;
}

}  // namespace

void ConfidenceConfig::validate(int n) const {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw GainOutOfRange("confidence bound d = " + std::to_string(d) + " must be positive");
  }
  check_gain(n, h);
}

GainWindow gain_window(int n) {
  return {1.0 / (2.0 * n), n > 1 ? 1.0 / (n - 1.0) : std::numeric_limits<double>::infinity()};
}

double assumption3_threshold(int n, double h) { return n / 2.0 + 1.0 / (4.0 * h); }

NeighborSets confidence_neighbors(const Vector& y, double d) {
  const int n = static_cast<int>(y.size());
  NeighborSets out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(y(i) - y(j)) < d) out[i].push_back(j);
    }
  }
  return out;
}

Matrix build_H(const NeighborSets& neighbors, double h) {
  const int n = static_cast<int>(neighbors.size());
  check_gain(n, h);
  Matrix out = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    int others = 0;
    for (Vertex j : neighbors[i]) {
      if (j == i) continue;
      out(i, j) = h;
      ++others;
    }
    out(i, i) = 1.0 - h * others;
  }
  return out;
}

EdgeSet confidence_edges(const NeighborSets& neighbors) {
  EdgeSet edges;
  for (int i = 0; i < static_cast<int>(neighbors.size()); ++i) {
    for (Vertex j : neighbors[i]) {
      if (j > i) edges.emplace_back(i, j);
    }
  }
  return edges;
}

std::vector<Edge> near_ties(const Vector& y, double d, double margin) {
  std::vector<Edge> out;
  for (int i = 0; i < y.size(); ++i) {
    for (int j = i + 1; j < y.size(); ++j) {
      if (std::abs(std::abs(y(i) - y(j)) - d) <= margin) out.emplace_back(i, j);
    }
  }
  return out;
}

ConfidenceGraphState confidence_graph(const Vector& y, const ConfidenceConfig& cfg) {
  ConfidenceGraphState state;
  state.neighbor_sets = confidence_neighbors(y, cfg.d);
  state.H = build_H(state.neighbor_sets, cfg.h);
  state.edges = confidence_edges(state.neighbor_sets);
  return state;
}

BcStep bc_issue_step(const InfluenceLimit& limit, const Vector& x, const ConfidenceConfig& cfg) {
  if (x.size() != limit.psi.cols()) {
    throw DimensionMismatch("opinion vector has length " + std::to_string(x.size()) + ", Ψ has " +
                            std::to_string(limit.psi.cols()) + " columns");
  }
  BcStep step;
  step.y = limit.psi * x;
  step.state = confidence_graph(step.y, cfg);
  step.x_next = step.state.H * step.y;
  return step;
}

Assumption3Check check_assumption3(const InfluenceNetwork& net, const InfluenceLimit& limit,
                                   const Vector& y0, const ConfidenceConfig& cfg) {
  const int n = net.size();
  if (y0.size() != n) throw DimensionMismatch("y0 length does not match the network");
  cfg.validate(n);

  Assumption3Check check;
  check.threshold = assumption3_threshold(n, cfg.h);
  const NeighborSets neighbors = confidence_neighbors(y0, cfg.d);
  const BoolMatrix in = membership(neighbors);
  auto fully = [&](Vertex v) { return net.agent_class(v) == AgentClass::fully_stubborn; };

  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j : neighbors[i]) {
      if (j == i) continue;

      if (!fully(j)) {
        for (Vertex l = 0; l < n; ++l) {
          if (!limit.support(j, l)) continue;
          bool ok = fully(i) ? in(i, l) : (in(j, l) && in(i, l));
          if (!ok) check.violations.push_back({1, i, j, l, 0});
        }
      }

      const bool applies = fully(i) ? fully(j) : true;
      if (!applies) continue;
      int common = 0;
      for (Vertex l = 0; l < n; ++l) {
        if (in(i, l) && in(j, l)) ++common;
      }
      const double bound = fully(i) ? n / 2.0 : check.threshold;
      if (!(common > bound)) check.violations.push_back({2, i, j, std::nullopt, common});
    }
  }
  check.holds = check.violations.empty();
  return check;
}

Theorem3Verdict check_theorem3(const InfluenceNetwork& net, const InfluenceLimit& limit,
                               const Vector& y0, const ConfidenceConfig& cfg) {
  Theorem3Verdict verdict;
  verdict.assumption2 = check_assumption2(net).holds;
  verdict.assumption3 = check_assumption3(net, limit, y0, cfg).holds;

  verdict.root_agent = partially_stubborn_root(net);
  verdict.rooted_partially_stubborn = verdict.root_agent.has_value();

  const ConfidenceGraphState h0 = confidence_graph(y0, cfg);
  const AgentPartition& part = net.partition();
  Digraph h0_graph(net.size());
  for (const auto& [a, b] : h0.edges) {
    h0_graph.add_arc(a, b);
    h0_graph.add_arc(b, a);
  }
  verdict.fully_stubborn_connected = is_weakly_connected(h0_graph.induced(part.v_f));

  if (part.v_f.empty()) {
    verdict.bridge_edge = true;
  } else {
    for (const auto& [a, b] : h0.edges) {
      auto cls_a = net.agent_class(a);
      auto cls_b = net.agent_class(b);
      if (cls_a == AgentClass::partially_stubborn && cls_b == AgentClass::fully_stubborn) {
        verdict.bridge = Edge{a, b};
      } else if (cls_b == AgentClass::partially_stubborn && cls_a == AgentClass::fully_stubborn) {
        verdict.bridge = Edge{b, a};
      }
      if (verdict.bridge) break;
    }
    verdict.bridge_edge = verdict.bridge.has_value();
  }

  if (!verdict.assumption2) verdict.failed_conditions.emplace_back("assumption2");
  if (!verdict.assumption3) verdict.failed_conditions.emplace_back("assumption3");
  if (!verdict.rooted_partially_stubborn) verdict.failed_conditions.emplace_back("rooted_partially_stubborn");
  if (!verdict.fully_stubborn_connected) verdict.failed_conditions.emplace_back("fully_stubborn_connected");
  if (!verdict.bridge_edge) verdict.failed_conditions.emplace_back("bridge_edge");
  verdict.consensus = verdict.failed_conditions.empty();
  return verdict;
}

Matrix composite_matrix(const Matrix& h, const InfluenceLimit& limit) { return h * limit.psi; }

Matrix mixed_block(const InfluenceNetwork& net, const Matrix& h) {
  const VertexSet order = net.partition().stubborn();
  const int r = static_cast<int>(order.size());
  Matrix out(r, r);
  for (int a = 0; a < r; ++a) {
    const bool fully = net.agent_class(order[a]) == AgentClass::fully_stubborn;
    for (int b = 0; b < r; ++b) {
      out(a, b) = fully ? h(order[a], order[b]) : net.weights()(order[a], order[b]);
    }
  }
  return out;
}

Matrix stubborn_block(const InfluenceNetwork& net, const Matrix& phi) {
  const VertexSet order = net.partition().stubborn();
  const int r = static_cast<int>(order.size());
  Matrix out(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) out(a, b) = phi(order[a], order[b]);
  }
  return out;
}

BcSequenceResult simulate_bc_sequence(const InfluenceNetwork& net, const Vector& x00,
                                      const ConfidenceConfig& cfg, const SequenceOptions& options) {
  return simulate_bc_sequence(closed_form_limit(net), x00, cfg, options);
}

BcSequenceResult simulate_bc_sequence(const InfluenceLimit& limit, const Vector& x00,
                                      const ConfidenceConfig& cfg, const SequenceOptions& options) {
  cfg.validate(static_cast<int>(x00.size()));
  BcSequenceResult out;
  IssueSequenceResult& result = out.result;
  result.initial_opinions_per_issue.push_back({x00, 0, 0});

  EdgeSet initial_edges;
  Vector x = x00;
  int s = 0;
  while (true) {
    BcStep step = bc_issue_step(limit, x, cfg);
    if (s == 0) initial_edges = step.state.edges;
    if (out.edge_log.empty() || out.edge_log.back().edges != step.state.edges) {
      out.edge_log.push_back({s, step.state.edges});
    }
    if (!std::includes(step.state.edges.begin(), step.state.edges.end(), initial_edges.begin(),
                       initial_edges.end())) {
      if (out.preservation_ok) out.first_loss_issue = s;
      out.preservation_ok = false;
    }
    if (s >= options.max_issues) break;
    if (inf_norm(Vector(step.x_next - x)) <= options.settle_tol) {
      result.stop = SequenceStop::settled;
      break;
    }
    x = std::move(step.x_next);
    ++s;
    if (options.record_full) result.initial_opinions_per_issue.push_back({x, s, 0});
  }
  finish_sequence(result, x, s, options);
  return out;
}

}  // namespace fjdyn
