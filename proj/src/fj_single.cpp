#include "fjdyn/fj_single.hpp"

#include "fjdyn/errors.hpp"
#include "fjdyn/oracle_suite.hpp"

#include <cmath>
#include <string>

namespace fjdyn {

namespace {

void clamp_tiny_negatives(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0.0 && m(i, j) > -kSupportThreshold) m(i, j) = 0.0;
    }
  }
}

void require_length(const InfluenceNetwork& net, const Vector& v, const char* what) {
  if (v.size() != net.size()) {
    throw DimensionMismatch(std::string(what) + " has length " + std::to_string(v.size()) +
                            ", network has " + std::to_string(net.size()) + " agents");
  }
}

}  // namespace

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::oscillation_detected: return "oscillation_detected";
    case RunStatus::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

const char* to_string(LimitMethod method) {
  return method == LimitMethod::closed_form ? "closed_form" : "iterative";
}

Vector fj_step(const InfluenceNetwork& net, const Vector& x, const Vector& x0) {
  require_length(net, x, "x");
  require_length(net, x0, "x0");
  const Vector& xi = net.susceptibility();
  return xi.cwiseProduct(net.weights() * x) + (Vector::Ones(xi.size()) - xi).cwiseProduct(x0);
}

Trajectory simulate_single_issue(const InfluenceNetwork& net, const Vector& x0,
                                 const SimulationOptions& options) {
  require_length(net, x0, "x0");
  Trajectory traj;
  traj.states.push_back({x0, 0, 0});

  Vector x = x0;
  Vector previous = x0;
  double midpoint_increment = -1.0;
  const long midpoint = options.max_iter / 2;
  long k = 0;
  while (k < options.max_iter) {
    Vector next = fj_step(net, x, x0);
    traj.last_increment = inf_norm(Vector(next - x));
    previous = std::move(x);
    x = std::move(next);
    ++k;
    if (options.record_full) traj.states.push_back({x, 0, k});
    if (traj.last_increment <= options.tol) {
      traj.converged = true;
      break;
    }
    if (k == midpoint) midpoint_increment = traj.last_increment;
  }
  traj.iterations = k;

  if (traj.converged) {
    traj.status = RunStatus::converged;
    traj.limit = x;
  } else if (midpoint_increment > 0.0 && traj.last_increment >= 0.5 * midpoint_increment) {
    // Increments that stopped decaying come from unit-circle eigenvalues.
    traj.status = RunStatus::oscillation_detected;
  } else {
    traj.status = RunStatus::budget_exhausted;
  }

  if (!options.record_full && k > 0) {
    if (!traj.converged && k > 1) traj.states.push_back({previous, 0, k - 1});
    traj.states.push_back({x, 0, k});
  }
  return traj;
}

Matrix influence_matrix_k(const InfluenceNetwork& net, long k) {
  const int n = net.size();
  const Matrix m = net.xi_w();
  const Vector stubbornness = Vector::Ones(n) - net.susceptibility();
  Matrix psi = Matrix::Identity(n, n);
  for (long t = 0; t < k; ++t) {
    psi = m * psi;
    psi.diagonal() += stubbornness;
  }
  return psi;
}

BoolMatrix support_of(const Matrix& m, double threshold) {
  return (m.array() > threshold).matrix();
}

InfluenceLimit closed_form_limit(const InfluenceNetwork& net) {
  AssumptionCheck a2 = check_assumption2(net);
  if (!a2.holds) {
    throw SingularSystem("I - ΞW is singular: an independent component has no stubborn agent");
  }
  const int n = net.size();
  const Matrix lhs = Matrix::Identity(n, n) - net.xi_w();
  const Matrix rhs = (Vector::Ones(n) - net.susceptibility()).asDiagonal().toDenseMatrix();
  InfluenceLimit limit;
  limit.psi = lhs.partialPivLu().solve(rhs);
  clamp_tiny_negatives(limit.psi);
  limit.support = support_of(limit.psi);
  limit.method = LimitMethod::closed_form;
  return limit;
}

InfluenceLimit limit_influence_matrix(const InfluenceNetwork& net, double tol, long max_iter) {
  if (check_assumption2(net).holds) return closed_form_limit(net);

  // Ψ(2k) = M^{2k} + S_{2k} with S_{2k} = S_k + M^k S_k, S_k = sum_{t<k} M^t (I - Ξ).
  const int n = net.size();
  const Matrix m = net.xi_w();
  const Matrix stubborn = (Vector::Ones(n) - net.susceptibility()).asDiagonal().toDenseMatrix();
  Matrix power = m;
  Matrix partial = stubborn;
  long k = 1;
  while (2 * k <= max_iter) {
    Matrix psi_k = power + partial;
    partial += power * partial;
    power = power * power;
    k *= 2;
    Matrix psi_2k = power + partial;
    if (inf_norm(Matrix(psi_2k - psi_k)) <= tol) {
      Matrix next = m * psi_2k + stubborn;
      if (inf_norm(Matrix(next - psi_2k)) > tol) {
        throw NonConvergent("Ψ(k) oscillates: even powers settle but consecutive steps differ");
      }
      InfluenceLimit limit;
      limit.psi = std::move(psi_2k);
      clamp_tiny_negatives(limit.psi);
      limit.support = support_of(limit.psi);
      limit.method = LimitMethod::iterative;
      return limit;
    }
  }
  throw NonConvergent("Ψ(k) did not settle within " + std::to_string(max_iter) + " steps");
}

SpectralConvergence check_convergence_spectral(const InfluenceNetwork& net) {
  SpectralReport report = eigenvalues_dense(net.xi_w(), kSpectralTol);
  SpectralConvergence out;
  out.converges = true;
  out.spectral_radius = report.spectral_radius;
  out.max_modulus_eigenvalues = report.unit_circle_eigenvalues;
  for (const auto& lambda : report.unit_circle_eigenvalues) {
    if (std::abs(lambda - 1.0) > kSpectralTol) out.converges = false;
  }
  return out;
}

VertexSet predicted_zero_columns(const InfluenceNetwork& net) {
  const VertexSet stubborn = net.partition().stubborn();
  VertexSet out;
  for (Vertex v : reachable_from(net.graph(), stubborn)) {
    if (!net.is_stubborn(v)) out.push_back(v);
  }
  return out;
}

}  // namespace fjdyn
