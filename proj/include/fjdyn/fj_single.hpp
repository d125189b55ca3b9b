#pragma once

// Single-issue Friedkin-Johnsen dynamics x(k+1) = ΞW x(k) + (I - Ξ) x(0).

#include "fjdyn/graph_core.hpp"
#include "fjdyn/types.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace fjdyn {

struct OpinionState {
  Vector x;
  int issue = 0;
  long time = 0;
};

enum class RunStatus { converged, oscillation_detected, budget_exhausted };

const char* to_string(RunStatus status);

struct Trajectory {
  /// Every state when recorded in full; otherwise the first and last state, plus the
  /// penultimate one when the run did not converge.
  std::vector<OpinionState> states;
  bool converged = false;
  std::optional<Vector> limit;
  long iterations = 0;
  RunStatus status = RunStatus::budget_exhausted;
  /// Infinity norm of the final step.
  double last_increment = 0.0;
};

struct SimulationOptions {
  double tol = 1e-10;
  long max_iter = 100000;
  bool record_full = false;
};

Vector fj_step(const InfluenceNetwork& net, const Vector& x, const Vector& x0);

Trajectory simulate_single_issue(const InfluenceNetwork& net, const Vector& x0,
                                 const SimulationOptions& options = {});

/// Ψ(k), with x(k) = Ψ(k) x(0).
Matrix influence_matrix_k(const InfluenceNetwork& net, long k);

enum class LimitMethod { closed_form, iterative };

const char* to_string(LimitMethod method);

struct InfluenceLimit {
  Matrix psi;
  BoolMatrix support;
  LimitMethod method = LimitMethod::closed_form;
};

/// lim Ψ(k). Solves (I - ΞW)Ψ = I - Ξ when every independent component holds a
/// stubborn agent, otherwise iterates Ψ(k) by doubling and confirms the last step
/// is below tol. Throws NonConvergent when the limit does not settle.
InfluenceLimit limit_influence_matrix(const InfluenceNetwork& net, double tol = 1e-10,
                                      long max_iter = 100000);

/// Closed form only; throws SingularSystem when Assumption 2 fails.
InfluenceLimit closed_form_limit(const InfluenceNetwork& net);

BoolMatrix support_of(const Matrix& m, double threshold = kSupportThreshold);

// Separates deliberate unit-circle eigenvalues from rounding noise.
inline constexpr double kSpectralTol = 1e-8;

struct SpectralConvergence {
  bool converges = false;
  /// Eigenvalues of ΞW with modulus >= 1 - kSpectralTol.
  std::vector<std::complex<double>> max_modulus_eigenvalues;
  double spectral_radius = 0.0;
};

/// 1 is the only maximum-modulus eigenvalue of ΞW.
SpectralConvergence check_convergence_spectral(const InfluenceNetwork& net);

/// Non-stubborn agents reachable from some stubborn agent; their Ψ columns vanish.
VertexSet predicted_zero_columns(const InfluenceNetwork& net);

}  // namespace fjdyn
