#pragma once

// Influence networks and the structural graph predicates built on them.
//
// Arc convention: the digraph of an n x n weight matrix W has an arc u -> v
// iff W[v][u] > 0, i.e. agent v listens to agent u. Every reachability query
// in the library uses this orientation.

#include "fjdyn/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fjdyn {

class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n) : out_(n), in_(n) {}

  /// Arc j -> i for every support(i, j) == true (same orientation as W).
  static Digraph from_support(const BoolMatrix& support);

  void add_arc(Vertex u, Vertex v);

  int size() const { return static_cast<int>(out_.size()); }
  std::span<const Vertex> successors(Vertex u) const { return out_[u]; }
  std::span<const Vertex> predecessors(Vertex v) const { return in_[v]; }
  bool has_arc(Vertex u, Vertex v) const;
  bool has_self_loop(Vertex v) const { return has_arc(v, v); }

  /// Subgraph on `vertices`; vertex k of the result is vertices[k].
  Digraph induced(std::span<const Vertex> vertices) const;

 private:
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
};

enum class AgentClass { fully_stubborn, partially_stubborn, non_stubborn };

struct AgentPartition {
  VertexSet v_f;  // xi == 0
  VertexSet v_p;  // 0 < xi < 1
  VertexSet v_n;  // xi == 1

  /// V_f followed by V_p, the index order of the stubborn blocks.
  VertexSet stubborn() const;
  /// V_p followed by V_n.
  VertexSet susceptible() const;
};

class InfluenceNetwork {
 public:
  int size() const { return static_cast<int>(xi_.size()); }
  const Matrix& weights() const { return w_; }
  const Vector& susceptibility() const { return xi_; }
  const AgentPartition& partition() const { return partition_; }
  const Digraph& graph() const { return graph_; }

  AgentClass agent_class(Vertex v) const { return classes_[v]; }
  bool is_stubborn(Vertex v) const { return classes_[v] != AgentClass::non_stubborn; }

  /// ΞW, the interpersonal part of one update.
  Matrix xi_w() const { return xi_.asDiagonal() * w_; }

 private:
  friend InfluenceNetwork build_network(const Matrix& w, const Vector& xi);

  Matrix w_;
  Vector xi_;
  AgentPartition partition_;
  std::vector<AgentClass> classes_;
  Digraph graph_;
};

/// Validates W and xi and derives the agent partition.
///
/// Entries within 1e-12 of [0, 1] are clamped into it, xi entries within 1e-12
/// of 0 or 1 snap to exactly 0 or 1, W entries at or below 1e-12 become 0, and
/// rows are renormalized when their sum is within 1e-9 of 1.
/// Throws DimensionMismatch, OutOfRangeEntry or NonStochasticRow.
InfluenceNetwork build_network(const Matrix& w, const Vector& xi);

struct SccDecomposition {
  /// Reverse topological order of the condensation (sink components first).
  std::vector<VertexSet> components;
  std::vector<bool> is_independent;
  /// gcd of cycle lengths; 0 for a singleton without a self-loop.
  std::vector<int> component_period;
  std::vector<int> component_of;

  std::vector<int> independent_components() const;
};

SccDecomposition scc_decompose(const Digraph& g);
inline SccDecomposition scc_decompose(const InfluenceNetwork& net) { return scc_decompose(net.graph()); }

/// Period of the strongly connected vertex set `component` (level-difference gcd).
int component_period(const Digraph& g, std::span<const Vertex> component);

struct AssumptionCheck {
  bool holds = true;
  std::vector<VertexSet> violating_isccs;
};

/// Every ISCC made only of non-stubborn agents and larger than one agent is aperiodic.
AssumptionCheck check_assumption1(const InfluenceNetwork& net);
AssumptionCheck check_assumption1(const InfluenceNetwork& net, const SccDecomposition& scc);

/// Every ISCC holds at least one stubborn agent (xi < 1).
AssumptionCheck check_assumption2(const InfluenceNetwork& net);
AssumptionCheck check_assumption2(const InfluenceNetwork& net, const SccDecomposition& scc);

/// Vertices t != source reachable from source along a path whose interior lies in `allowed`.
VertexSet restricted_reachable(const Digraph& g, Vertex source, std::span<const Vertex> allowed);
inline VertexSet restricted_reachable(const InfluenceNetwork& net, Vertex source,
                                      std::span<const Vertex> allowed) {
  return restricted_reachable(net.graph(), source, allowed);
}

/// Plain reachability from a set of sources (sources included).
VertexSet reachable_from(const Digraph& g, std::span<const Vertex> sources);

/// Smallest vertex that reaches every other vertex, if any.
std::optional<Vertex> has_spanning_tree(const Digraph& g);
/// Every vertex that reaches every other vertex.
VertexSet spanning_tree_roots(const Digraph& g);

/// Smallest vertex with a direct arc to every other vertex, if any.
std::optional<Vertex> has_star_center(const Digraph& g);
bool is_star_center(const Digraph& g, Vertex v);

/// Connectivity ignoring arc direction; vacuously true for graphs with at most one vertex.
bool is_weakly_connected(const Digraph& g);

}  // namespace fjdyn
