#include "fjdyn/graph_core.hpp"

#include "fjdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

namespace fjdyn {

namespace {

constexpr double kRangeSlack = 1e-12;
constexpr double kRowSumTol = 1e-9;

void insert_sorted(std::vector<Vertex>& list, Vertex v) {
  auto it = std::lower_bound(list.begin(), list.end(), v);
  if (it == list.end() || *it != v) list.insert(it, v);
}

bool contains(std::span<const Vertex> sorted, Vertex v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

double clamp_unit(double value, const char* field, int row, int col) {
  if (!std::isfinite(value) || value < -kRangeSlack || value > 1.0 + kRangeSlack) {
    throw OutOfRangeEntry(field, row, col, value);
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

Digraph Digraph::from_support(const BoolMatrix& support) {
  const int n = static_cast<int>(support.rows());
  Digraph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (support(i, j)) g.add_arc(j, i);
    }
  }
  return g;
}

void Digraph::add_arc(Vertex u, Vertex v) {
  insert_sorted(out_[u], v);
  insert_sorted(in_[v], u);
}

bool Digraph::has_arc(Vertex u, Vertex v) const { return contains(out_[u], v); }

Digraph Digraph::induced(std::span<const Vertex> vertices) const {
  std::vector<int> local(out_.size(), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) local[vertices[k]] = static_cast<int>(k);
  Digraph sub(static_cast<int>(vertices.size()));
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    for (Vertex v : out_[vertices[k]]) {
      if (local[v] >= 0) sub.add_arc(static_cast<Vertex>(k), local[v]);
    }
  }
  return sub;
}

VertexSet AgentPartition::stubborn() const {
  VertexSet out = v_f;
  out.insert(out.end(), v_p.begin(), v_p.end());
  return out;
}

VertexSet AgentPartition::susceptible() const {
  VertexSet out = v_p;
  out.insert(out.end(), v_n.begin(), v_n.end());
  return out;
}

InfluenceNetwork build_network(const Matrix& w, const Vector& xi) {
  if (w.rows() != w.cols()) {
    throw DimensionMismatch("W must be square, got " + std::to_string(w.rows()) + "x" +
                            std::to_string(w.cols()));
  }
  if (w.rows() != xi.size()) {
    throw DimensionMismatch("W is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                            " but xi has length " + std::to_string(xi.size()));
  }
  const int n = static_cast<int>(xi.size());
  if (n == 0) throw DimensionMismatch("network must have at least one agent");

  InfluenceNetwork net;
  net.w_ = Matrix(n, n);
  net.xi_ = Vector(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      double v = clamp_unit(w(i, j), "W", i, j);
      if (v <= kSupportThreshold) v = 0.0;
      net.w_(i, j) = v;
      s += w(i, j);
    }
    if (std::abs(s - 1.0) > kRowSumTol) throw NonStochasticRow(i, s);
    net.w_.row(i) /= net.w_.row(i).sum();

    double x = clamp_unit(xi(i), "xi", i, -1);
    if (x <= kRangeSlack) x = 0.0;
    if (x >= 1.0 - kRangeSlack) x = 1.0;
    net.xi_(i) = x;
  }

  net.classes_.resize(n);
  for (int i = 0; i < n; ++i) {
    if (net.xi_(i) == 0.0) {
      net.classes_[i] = AgentClass::fully_stubborn;
      net.partition_.v_f.push_back(i);
    } else if (net.xi_(i) == 1.0) {
      net.classes_[i] = AgentClass::non_stubborn;
      net.partition_.v_n.push_back(i);
    } else {
      net.classes_[i] = AgentClass::partially_stubborn;
      net.partition_.v_p.push_back(i);
    }
  }

  net.graph_ = Digraph(n);
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      if (net.w_(v, u) > 0.0) net.graph_.add_arc(u, v);
    }
  }
  return net;
}

std::vector<int> SccDecomposition::independent_components() const {
  std::vector<int> out;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (is_independent[c]) out.push_back(static_cast<int>(c));
  }
  return out;
}

int component_period(const Digraph& g, std::span<const Vertex> component) {
  if (component.empty()) return 0;
  if (component.size() == 1) return g.has_self_loop(component[0]) ? 1 : 0;

  std::vector<int> level(g.size(), -1);
  std::vector<bool> inside(g.size(), false);
  for (Vertex v : component) inside[v] = true;

  std::queue<Vertex> frontier;
  level[component[0]] = 0;
  frontier.push(component[0]);
  int period = 0;
  while (!frontier.empty()) {
    Vertex u = frontier.front();
    frontier.pop();
    for (Vertex v : g.successors(u)) {
      if (!inside[v]) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      } else {
        period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return period;
}

SccDecomposition scc_decompose(const Digraph& g) {
  // Iterative Tarjan; components are emitted sinks first.
  const int n = g.size();
  SccDecomposition out;
  out.component_of.assign(n, -1);

  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Vertex> stack;
  std::vector<std::pair<Vertex, std::size_t>> call;
  int counter = 0;

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      auto& [u, pos] = call.back();
      auto succ = g.successors(u);
      if (pos < succ.size()) {
        Vertex v = succ[pos++];
        if (index[v] < 0) {
          index[v] = low[v] = counter++;
          stack.push_back(v);
          on_stack[v] = true;
          call.emplace_back(v, 0);
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
        continue;
      }
      Vertex done = u;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        VertexSet comp;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component_of[w] = static_cast<int>(out.components.size());
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        out.components.push_back(std::move(comp));
      }
    }
  }

  const std::size_t count = out.components.size();
  out.is_independent.assign(count, true);
  out.component_period.assign(count, 0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex u : g.predecessors(v)) {
      if (out.component_of[u] != out.component_of[v]) out.is_independent[out.component_of[v]] = false;
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    out.component_period[c] = component_period(g, out.components[c]);
  }
  return out;
}

AssumptionCheck check_assumption1(const InfluenceNetwork& net) {
  return check_assumption1(net, scc_decompose(net));
}

AssumptionCheck check_assumption1(const InfluenceNetwork& net, const SccDecomposition& scc) {
  AssumptionCheck result;
  for (int c : scc.independent_components()) {
    const VertexSet& comp = scc.components[c];
    if (comp.size() < 2) continue;
    bool all_non_stubborn =
        std::none_of(comp.begin(), comp.end(), [&](Vertex v) { return net.is_stubborn(v); });
    if (all_non_stubborn && scc.component_period[c] != 1) {
      result.holds = false;
      result.violating_isccs.push_back(comp);
    }
  }
  std::sort(result.violating_isccs.begin(), result.violating_isccs.end());
  return result;
}

AssumptionCheck check_assumption2(const InfluenceNetwork& net) {
  return check_assumption2(net, scc_decompose(net));
}

AssumptionCheck check_assumption2(const InfluenceNetwork& net, const SccDecomposition& scc) {
  AssumptionCheck result;
  for (int c : scc.independent_components()) {
    const VertexSet& comp = scc.components[c];
    if (std::none_of(comp.begin(), comp.end(), [&](Vertex v) { return net.is_stubborn(v); })) {
      result.holds = false;
      result.violating_isccs.push_back(comp);
    }
  }
  std::sort(result.violating_isccs.begin(), result.violating_isccs.end());
  return result;
}

VertexSet restricted_reachable(const Digraph& g, Vertex source, std::span<const Vertex> allowed) {
  const int n = g.size();
  std::vector<bool> may_pass(n, false);
  for (Vertex v : allowed) may_pass[v] = true;

  std::vector<bool> seen(n, false);
  std::queue<Vertex> frontier;
  seen[source] = true;
  frontier.push(source);
  VertexSet out;
  while (!frontier.empty()) {
    Vertex u = frontier.front();
    frontier.pop();
    for (Vertex v : g.successors(u)) {
      if (seen[v]) continue;
      seen[v] = true;
      out.push_back(v);
      if (may_pass[v]) frontier.push(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

VertexSet reachable_from(const Digraph& g, std::span<const Vertex> sources) {
  std::vector<bool> seen(g.size(), false);
  std::queue<Vertex> frontier;
  for (Vertex s : sources) {
    if (!seen[s]) {
      seen[s] = true;
      frontier.push(s);
    }
  }
  while (!frontier.empty()) {
    Vertex u = frontier.front();
    frontier.pop();
    for (Vertex v : g.successors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        frontier.push(v);
      }
    }
  }
  VertexSet out;
  for (Vertex v = 0; v < g.size(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

VertexSet spanning_tree_roots(const Digraph& g) {
  const int n = g.size();
  VertexSet roots;
  if (n == 0) return roots;
  // Roots are exactly the members of the unique source component, if there is one.
  SccDecomposition scc = scc_decompose(g);
  auto sources = scc.independent_components();
  if (sources.size() != 1) return roots;
  return scc.components[sources.front()];
}

std::optional<Vertex> has_spanning_tree(const Digraph& g) {
  VertexSet roots = spanning_tree_roots(g);
  if (roots.empty()) return std::nullopt;
  return roots.front();
}

bool is_star_center(const Digraph& g, Vertex v) {
  return static_cast<int>(g.successors(v).size() - (g.has_self_loop(v) ? 1 : 0)) == g.size() - 1;
}

std::optional<Vertex> has_star_center(const Digraph& g) {
  for (Vertex v = 0; v < g.size(); ++v) {
    if (is_star_center(g, v)) return v;
  }
  return std::nullopt;
}

bool is_weakly_connected(const Digraph& g) {
  const int n = g.size();
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::queue<Vertex> frontier;
  seen[0] = true;
  frontier.push(0);
  int count = 1;
  while (!frontier.empty()) {
    Vertex u = frontier.front();
    frontier.pop();
    auto visit = [&](Vertex v) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        frontier.push(v);
      }
    };
    for (Vertex v : g.successors(u)) visit(v);
    for (Vertex v : g.predecessors(u)) visit(v);
  }
  return count == n;
}

}  // namespace fjdyn
