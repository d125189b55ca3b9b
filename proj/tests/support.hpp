#pragma once

// Fixtures and brute-force oracles shared by the test binaries. Nothing here calls
// the library routine it is used to check.

#include "fjdyn/graph_core.hpp"
#include "fjdyn/types.hpp"

#include <algorithm>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

namespace fjtest {

using fjdyn::Matrix;
using fjdyn::Vector;
using fjdyn::Vertex;
using fjdyn::VertexSet;

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

struct Fixture {
  fjdyn::InfluenceNetwork net;
  Vector x0;
};

// Ten-agent network with four SCCs {0,3,4}, {2,5,6}, {7,8,9}, {1}.
inline Fixture example1() {
  Matrix w = mat({{0, 0, 0, 0, 1, 0, 0, 0, 0, 0},
                  {0, 0.5, 0, 0, 0.5, 0, 0, 0, 0, 0},
                  {0, 0.5, 0, 0, 0, 0, 0.5, 0, 0, 0},
                  {1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
                  {0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0, 0, 0, 0.7, 0, 0, 0.3, 0},
                  {0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
                  {0, 0, 0, 0, 0, 0, 0, 0.5, 0, 0.5},
                  {0, 0, 0, 0, 0, 0, 0, 0, 1, 0}});
  return {fjdyn::build_network(w, vec({0, 0, 0, 0.2, 0.5, 0.7, 1, 1, 1, 1})),
          vec({-1, 0, 1, 1, -2, 0, -1, -2, 1, 2})};
}

// No fully stubborn agents; agents 0..4 partially stubborn, rooted at agent 1.
inline Fixture example2() {
  Matrix w = mat({{0.5, 0, 0, 0.5, 0, 0, 0, 0, 0, 0},
                  {0.6, 0.4, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0.5, 0, 0, 0, 0, 0.5, 0, 0, 0, 0},
                  {0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0.5, 0, 0.5, 0, 0, 0, 0, 0},
                  {0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0, 0, 0.5, 0.5, 0, 0, 0, 0},
                  {0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
                  {0, 0, 0, 0, 0, 0, 0, 0.5, 0, 0.5},
                  {0, 0, 0, 0.5, 0, 0, 0, 0, 0.5, 0}});
  return {fjdyn::build_network(w, vec({0.5, 0.7, 0.5, 0.8, 0.6, 1, 1, 1, 1, 1})),
          vec({-1, 0, 1, 1, -2, 0, -1, -2, 1, 2})};
}

// Bounded-confidence fixture (d = 1, h = 0.1); Ψ x0 reproduces
// (-0.7, 0.2, 0, 0.2, 1.46, -1.9876, 0.0082, 0.0274, 0.2, -0.25) to four decimals.
inline Fixture example3() {
  Matrix w = mat({{0.5, 0.5, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0.5, 0.5, 0, 0, 0, 0, 0, 0, 0},
                  {0.5, 0, 0.5, 0, 0, 0, 0, 0, 0, 0},
                  {0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0.69, 0, 0, 0, 0, 0, 0.31, 0},
                  {0, 0, 0.7, 0, 0, 0, 0, 0.3, 0, 0},
                  {0, 0, 0, 0, 0, 0, 0.9, 0, 0.1, 0},
                  {0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
                  {0.5, 0, 0, 0, 0, 0, 0, 0, 0.5, 0}});
  return {fjdyn::build_network(w, vec({0, 0, 0, 0.8, 0.3, 0.2, 1, 1, 1, 1})),
          vec({-0.7, 0.2, 0, 0.2, 2, -2.5, -1.5, 1, 1.5, -1})};
}

// Two mutually listening agents, ξ = (0.5, 0.5): Ψ = [[2/3, 1/3], [1/3, 2/3]].
inline Fixture n2_fixture() {
  return {fjdyn::build_network(mat({{0, 1}, {1, 0}}), vec({0.5, 0.5})), vec({0, 1})};
}

inline std::vector<Fixture> all_examples() { return {example1(), example2(), example3(), n2_fixture()}; }

inline Matrix cyclic_permutation(int n) {
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) w(i, (i + 1) % n) = 1.0;
  return w;
}

// reach(u, v): a path u -> ... -> v of length >= 0 exists, arcs u -> v iff W[v][u] > 0.
inline std::vector<std::vector<bool>> transitive_closure(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (int u = 0; u < n; ++u) {
    r[u][u] = true;
    for (int v = 0; v < n; ++v) {
      if (w(v, u) > fjdyn::kSupportThreshold) r[u][v] = true;
    }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

// SCCs as equivalence classes of mutual reachability, each sorted, listed by smallest member.
inline std::vector<VertexSet> brute_sccs(const Matrix& w) {
  const auto r = transitive_closure(w);
  const int n = static_cast<int>(w.rows());
  std::vector<VertexSet> out;
  std::vector<bool> seen(n, false);
  for (int u = 0; u < n; ++u) {
    if (seen[u]) continue;
    VertexSet c;
    for (int v = 0; v < n; ++v) {
      if (r[u][v] && r[v][u]) {
        c.push_back(v);
        seen[v] = true;
      }
    }
    out.push_back(c);
  }
  return out;
}

// An SCC is independent when no vertex outside it reaches into it.
inline bool brute_is_independent(const Matrix& w, const VertexSet& comp) {
  const int n = static_cast<int>(w.rows());
  for (int u = 0; u < n; ++u) {
    if (std::find(comp.begin(), comp.end(), u) != comp.end()) continue;
    for (Vertex v : comp) {
      if (w(v, u) > fjdyn::kSupportThreshold) return false;
    }
  }
  return true;
}

// gcd of the lengths of every simple cycle inside `comp`; 0 when there is none.
inline int brute_cycle_gcd(const Matrix& w, const VertexSet& comp) {
  int g = 0;
  const int m = static_cast<int>(comp.size());
  auto arc = [&](int a, int b) { return w(comp[b], comp[a]) > fjdyn::kSupportThreshold; };
  std::vector<bool> on_path(m, false);
  // Cycles are enumerated from their smallest local index to avoid rotations.
  auto dfs = [&](auto&& self, int start, int v, int len) -> void {
    for (int u = start; u < m; ++u) {
      if (!arc(v, u)) continue;
      if (u == start) {
        g = std::gcd(g, len);
      } else if (!on_path[u]) {
        on_path[u] = true;
        self(self, start, u, len + 1);
        on_path[u] = false;
      }
    }
  };
  for (int s = 0; s < m; ++s) {
    on_path[s] = true;
    dfs(dfs, s, s, 1);
    on_path[s] = false;
  }
  return g;
}

// Ψ(k) from its series definition (ΞW)^k + Σ_{t<k} (ΞW)^t (I - Ξ).
inline Matrix psi_series(const Matrix& w, const Vector& xi, long k) {
  const Eigen::Index n = w.rows();
  const Matrix a = xi.asDiagonal() * w;
  const Matrix b = Matrix::Identity(n, n) - Matrix(xi.asDiagonal());
  Matrix power = Matrix::Identity(n, n);
  Matrix sum = Matrix::Zero(n, n);
  for (long t = 0; t < k; ++t) {
    sum += power * b;
    power = power * a;
  }
  return power + sum;
}

// Characteristic polynomial coefficients c_0..c_n of det(λI - A), c_n = 1,
// by the Faddeev-LeVerrier recursion.
inline std::vector<double> char_poly(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix m = Matrix::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * Matrix::Identity(n, n);
    c[n - k] = -(a * m).trace() / k;
  }
  return c;
}

// Roots of a monic polynomial by Durand-Kerner iteration.
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
  using C = std::complex<double>;
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<C> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::pow(C(0.4, 0.9), i);
  auto p = [&](C x) {
    C v = 0.0;
    for (int i = n; i >= 0; --i) v = v * x + c[i];
    return v;
  };
  for (int iter = 0; iter < 5000; ++iter) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      C den = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      const C dz = p(z[i]) / den;
      z[i] -= dz;
      change = std::max(change, std::abs(dz));
    }
    if (change < 1e-15) break;
  }
  return z;
}

// Largest distance in a greedy nearest pairing of two equal-size multisets.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return 1e300;
  double worst = 0.0;
  for (const auto& x : a) {
    auto best = std::min_element(b.begin(), b.end(),
                                 [&](const auto& p, const auto& q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*best - x));
    b.erase(best);
  }
  return worst;
}

inline bool contains(const VertexSet& s, Vertex v) { return std::find(s.begin(), s.end(), v) != s.end(); }

}  // namespace fjtest
