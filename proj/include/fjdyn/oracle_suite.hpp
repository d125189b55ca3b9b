#pragma once

// Independent numerical oracles used to cross-check the structural predicates,
// plus the seeded fixture generators the verification suites draw from.

#include "fjdyn/bounded_confidence.hpp"
#include "fjdyn/graph_core.hpp"
#include "fjdyn/types.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace fjdyn {

struct SpectralReport {
  /// Sorted by decreasing modulus, then decreasing real part, then imaginary part.
  std::vector<std::complex<double>> eigenvalues;
  double spectral_radius = 0.0;
  std::vector<std::complex<double>> unit_circle_eigenvalues;
};

inline constexpr int kMaxDenseEigenSize = 64;

/// All eigenvalues of a dense nonsymmetric matrix (n <= 64).
/// Throws PreconditionViolated above the size guard, EigensolverFailure if the QR
/// iteration does not converge.
SpectralReport eigenvalues_dense(const Matrix& a, double unit_tol = 1e-8);

/// The 2n-dimensional system x̂(k+1) = Ŵ x̂(k), x̂ = (x(0), x(k)),
/// Ŵ = [[I, 0], [I - Ξ, ΞW]].
class AugmentedSystem {
 public:
  AugmentedSystem(const InfluenceNetwork& net, const Vector& x0);

  void step();
  /// Lower block, the opinions at the current time.
  Vector opinions() const { return state_.tail(n_); }
  const Matrix& matrix() const { return w_hat_; }

 private:
  int n_;
  Matrix w_hat_;
  Vector state_;
};

Vector simulate_augmented(const InfluenceNetwork& net, const Vector& x0, int k);

enum class OracleMode { single_issue, issue_sequence, bounded_confidence };
enum class OutcomeLabel { converges, oscillates, consensus, clusters, budget_exhausted };

const char* to_string(OutcomeLabel label);

struct BruteForceOptions {
  /// Steps (single issue) or issues (sequence modes).
  long budget = 20000;
  double tol = 1e-10;
  double consensus_tol = 1e-6;
  /// Inner single-issue iteration per issue in the sequence modes.
  long inner_budget = 200000;
  double inner_tol = 1e-14;
  std::optional<ConfidenceConfig> confidence;  // required for bounded_confidence
};

/// Long-horizon classification by direct iteration. Sequence modes run every issue's
/// inner dynamics to convergence instead of using the closed-form Ψ.
OutcomeLabel brute_force_outcome(const InfluenceNetwork& net, const Vector& x00, OracleMode mode,
                                 const BruteForceOptions& options = {});

struct ClassMix {
  double fully = 0.0;
  double partially = 1.0;
  double non = 0.0;
};

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_draw(std::mt19937_64& rng);

/// SplitMix64 finaliser, used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Random support with at least one in-arc per row, weights uniform on [0.1, 1)
/// before row normalisation, classes drawn from `mix`, partial ξ uniform on (0.05, 0.95).
InfluenceNetwork random_network(int n, double density, ClassMix mix, std::uint64_t seed);

/// A random network with a planted non-stubborn independent component of the given
/// period (>= 2), so the convergence assumption fails.
InfluenceNetwork random_periodic_network(int n, int period, std::uint64_t seed);

Vector random_opinions(int n, double lo, double hi, std::uint64_t seed);

struct BcInstance {
  InfluenceNetwork network;
  Vector x00;
  ConfidenceConfig cfg;
  bool constructed = false;
};

/// Instance satisfying the connectivity-preservation conditions at s = 0.
/// Even seeds try rejection sampling over random networks first; odd seeds (and
/// rejection failures) build a tight core plus far-away self-anchored hermits.
BcInstance assumption3_instance(std::uint64_t seed);

}  // namespace fjdyn
