#pragma once

// Issue sequences with bounded confidence: y(s) = Ψ x(s), then each agent averages
// with gain h over the agents whose y lies strictly within d of its own,
// x(s+1) = H(s) y(s).

#include "fjdyn/fj_single.hpp"
#include "fjdyn/graph_core.hpp"
#include "fjdyn/issue_dynamics.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fjdyn {

struct ConfidenceConfig {
  double d = 1.0;  // confidence bound, opinion units
  double h = 0.1;  // averaging gain

  /// Throws GainOutOfRange unless d > 0, h > 0 and 1 - (n - 1) h > 0.
  void validate(int n) const;
};

struct GainWindow {
  double lower;  // 1 / (2n)
  double upper;  // 1 / (n - 1), infinite for n == 1
  bool contains(double h) const { return lower < h && h < upper; }
};

/// Open interval of gains for which the connectivity-preservation conditions can hold.
GainWindow gain_window(int n);

/// n/2 + 1/(4h): common-neighbour bound for pairs involving a non-fully-stubborn agent.
double assumption3_threshold(int n, double h);

using NeighborSets = std::vector<VertexSet>;
using Edge = std::pair<Vertex, Vertex>;
/// Undirected edges (i < j), sorted.
using EdgeSet = std::vector<Edge>;

/// N_i = { j : |y_i - y_j| < d }, exact strict comparison.
NeighborSets confidence_neighbors(const Vector& y, double d);

/// Throws GainOutOfRange unless 0 < h and 1 - (n - 1) h > 0.
Matrix build_H(const NeighborSets& neighbors, double h);

EdgeSet confidence_edges(const NeighborSets& neighbors);

/// Pairs whose gap lies within `margin` of d, where the strict comparison is fragile.
std::vector<Edge> near_ties(const Vector& y, double d, double margin = 1e-9);

struct ConfidenceGraphState {
  NeighborSets neighbor_sets;
  Matrix H;
  EdgeSet edges;
};

ConfidenceGraphState confidence_graph(const Vector& y, const ConfidenceConfig& cfg);

struct BcStep {
  Vector y;       // Ψ x, the limiting opinions of the current issue
  Vector x_next;  // H y
  ConfidenceGraphState state;
};

BcStep bc_issue_step(const InfluenceLimit& limit, const Vector& x, const ConfidenceConfig& cfg);

struct Assumption3Violation {
  int clause = 0;  // 1 or 2
  Vertex i = 0;
  Vertex j = 0;
  std::optional<Vertex> l;  // clause 1 only
  int common_neighbors = 0;  // clause 2 only
};

struct Assumption3Check {
  bool holds = true;
  double threshold = 0.0;  // n/2 + 1/(4h)
  std::vector<Assumption3Violation> violations;
};

/// Connectivity-preservation conditions on y0 = Ψ x(0,0); pairs range over distinct agents.
Assumption3Check check_assumption3(const InfluenceNetwork& net, const InfluenceLimit& limit,
                                   const Vector& y0, const ConfidenceConfig& cfg);

struct Theorem3Verdict {
  bool consensus = false;
  bool assumption2 = false;
  bool assumption3 = false;
  bool rooted_partially_stubborn = false;  // condition (i)
  bool fully_stubborn_connected = false;   // condition (ii)
  bool bridge_edge = false;                // condition (iii)
  std::optional<Vertex> root_agent;
  std::optional<Edge> bridge;  // (partially stubborn, fully stubborn)
  std::vector<std::string> failed_conditions;
};

Theorem3Verdict check_theorem3(const InfluenceNetwork& net, const InfluenceLimit& limit,
                               const Vector& y0, const ConfidenceConfig& cfg);

/// Φ(s) = H(s) Ψ.
Matrix composite_matrix(const Matrix& h, const InfluenceLimit& limit);

/// Block [[H_ff, H_fp], [W_pf, W_pp]] over V_f followed by V_p.
Matrix mixed_block(const InfluenceNetwork& net, const Matrix& h);

/// Φ restricted to rows and columns V_f followed by V_p.
Matrix stubborn_block(const InfluenceNetwork& net, const Matrix& phi);

struct EdgeLogEntry {
  int issue = 0;  // first issue at which this edge set appeared
  EdgeSet edges;
};

struct BcSequenceResult {
  IssueSequenceResult result;
  /// Edge sets of G(H(s)), one entry per change.
  std::vector<EdgeLogEntry> edge_log;
  bool preservation_ok = true;
  std::optional<int> first_loss_issue;
};

BcSequenceResult simulate_bc_sequence(const InfluenceLimit& limit, const Vector& x00,
                                      const ConfidenceConfig& cfg,
                                      const SequenceOptions& options = {});
BcSequenceResult simulate_bc_sequence(const InfluenceNetwork& net, const Vector& x00,
                                      const ConfidenceConfig& cfg,
                                      const SequenceOptions& options = {});

}  // namespace fjdyn
