#include "fjdyn/oracle_suite.hpp"

#include "fjdyn/errors.hpp"
#include "fjdyn/fj_single.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fjdyn {

namespace {

bool is_prime(long v) {
  if (v < 2) return false;
  for (long d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

// Horizon for the x(k) vs x(2k) comparison. A prime k cannot be a multiple of a
// short cycle length unless it equals it, so periodic orbits show up as a gap.
long probe_horizon(long budget) {
  long k = std::max<long>(2, budget / 2);
  while (k > 2 && !is_prime(k)) --k;
  return k;
}

// Runs the single-issue dynamics from x0 until the step is negligible.
std::optional<Vector> inner_limit(const Matrix& xw, const Vector& anchor, const Vector& x0,
                                  const BruteForceOptions& options) {
  Vector x = x0;
  for (long k = 0; k < options.inner_budget; ++k) {
    Vector next = xw * x + anchor;
    const double scale = std::max(1.0, inf_norm(next));
    const double inc = inf_norm(Vector(next - x));
    x = std::move(next);
    if (inc <= options.inner_tol * scale) return x;
  }
  return std::nullopt;
}

OutcomeLabel single_issue_outcome(const InfluenceNetwork& net, const Vector& x0,
                                  const BruteForceOptions& options) {
  const Matrix xw = net.xi_w();
  const Vector anchor = (Vector::Ones(net.size()) - net.susceptibility()).cwiseProduct(x0);
  const long k = probe_horizon(options.budget);

  Vector x = x0;
  Vector x_k;
  double inc_k = 0.0;
  double inc = 0.0;
  for (long t = 1; t <= 2 * k; ++t) {
    Vector next = xw * x + anchor;
    inc = inf_norm(Vector(next - x));
    x = std::move(next);
    if (inc <= options.tol) return OutcomeLabel::converges;
    if (t == k) {
      x_k = x;
      inc_k = inc;
    }
  }
  const double gap = inf_norm(Vector(x - x_k));
  if (gap > 10.0 * options.tol && inc >= 0.5 * inc_k) return OutcomeLabel::oscillates;
  return OutcomeLabel::budget_exhausted;
}

OutcomeLabel sequence_outcome(const InfluenceNetwork& net, const Vector& x00, bool bounded,
                              const BruteForceOptions& options) {
  if (bounded && !options.confidence) {
    throw PreconditionViolated("bounded-confidence classification needs a confidence config");
  }
  const Matrix xw = net.xi_w();
  const Vector zeta = Vector::Ones(net.size()) - net.susceptibility();

  Vector x = x00;
  for (long s = 0; s < options.budget; ++s) {
    auto y = inner_limit(xw, zeta.cwiseProduct(x), x, options);
    if (!y) return OutcomeLabel::budget_exhausted;
    Vector next = *y;
    if (bounded) {
      const ConfidenceConfig& cfg = *options.confidence;
      next = build_H(confidence_neighbors(*y, cfg.d), cfg.h) * *y;
    }
    const double inc = inf_norm(Vector(next - x));
    x = std::move(next);
    if (inc <= options.tol) {
      return spread(x) <= options.consensus_tol ? OutcomeLabel::consensus : OutcomeLabel::clusters;
    }
  }
  return OutcomeLabel::budget_exhausted;
}

AgentClass draw_class(std::mt19937_64& rng, const ClassMix& mix) {
  const double u = unit_draw(rng);
  if (u < mix.fully) return AgentClass::fully_stubborn;
  if (u < mix.fully + mix.partially) return AgentClass::partially_stubborn;
  return AgentClass::non_stubborn;
}

double draw_xi(std::mt19937_64& rng, AgentClass cls) {
  switch (cls) {
    case AgentClass::fully_stubborn: return 0.0;
    case AgentClass::partially_stubborn: return 0.05 + 0.9 * unit_draw(rng);
    case AgentClass::non_stubborn: return 1.0;
  }
  return 1.0;
}

int draw_index(std::mt19937_64& rng, int n) {
  return std::min(n - 1, static_cast<int>(unit_draw(rng) * n));
}

void normalize_rows(Matrix& w) {
  for (int i = 0; i < w.rows(); ++i) w.row(i) /= w.row(i).sum();
}

std::optional<BcInstance> try_random_bc(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = 5 + draw_index(rng, 6);
  const double densities[] = {0.4, 0.7, 1.0};
  const double density = densities[draw_index(rng, 3)];
  InfluenceNetwork net = random_network(n, density, {0.3, 0.4, 0.3}, mix_seed(seed, 1));
  if (!check_assumption2(net).holds) return std::nullopt;

  const GainWindow window = gain_window(n);
  ConfidenceConfig cfg;
  cfg.d = 1.0;
  cfg.h = window.lower + (window.upper - window.lower) * (0.2 + 0.6 * unit_draw(rng));
  const double width = 0.3 + 0.6 * unit_draw(rng);
  Vector x00 = random_opinions(n, -width, width, mix_seed(seed, 2));

  const InfluenceLimit limit = closed_form_limit(net);
  const Vector y0 = limit.psi * x00;
  if (!near_ties(y0, cfg.d).empty()) return std::nullopt;
  if (!check_assumption3(net, limit, y0, cfg).holds) return std::nullopt;
  return BcInstance{std::move(net), std::move(x00), cfg, false};
}

BcInstance constructed_bc(std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 7));
  const int n = 6 + draw_index(rng, 7);
  // Hermits q must leave a core m = n - q with m - n/2 > (n - 1)/4, else no gain fits.
  const int q_max = static_cast<int>(std::ceil((n + 1) / 4.0)) - 1;
  const int q = draw_index(rng, q_max + 1);
  const int m = n - q;

  // Core dynamics: resample until every independent component holds a stubborn agent.
  InfluenceNetwork core;
  for (std::uint64_t attempt = 0;; ++attempt) {
    const double density = 0.3 + 0.7 * unit_draw(rng);
    core = random_network(m, density, {0.3, 0.4, 0.3}, mix_seed(seed, 100 + attempt));
    if (check_assumption2(core).holds) break;
  }

  std::vector<int> place(n);
  std::iota(place.begin(), place.end(), 0);
  std::shuffle(place.begin(), place.end(), rng);

  Matrix w = Matrix::Zero(n, n);
  Vector xi(n);
  for (int a = 0; a < m; ++a) {
    xi(place[a]) = core.susceptibility()(a);
    for (int b = 0; b < m; ++b) w(place[a], place[b]) = core.weights()(a, b);
  }
  for (int k = 0; k < q; ++k) {
    const int v = place[m + k];
    w(v, v) = 1.0;
    xi(v) = unit_draw(rng) < 0.5 ? 0.0 : draw_xi(rng, AgentClass::partially_stubborn);
  }

  ConfidenceConfig cfg;
  cfg.d = 0.5 + 1.5 * unit_draw(rng);
  const GainWindow window = gain_window(n);
  const double lo = std::max(window.lower, 1.0 / (4.0 * (m - n / 2.0)));
  cfg.h = lo + (window.upper - lo) * (0.25 + 0.5 * unit_draw(rng));

  const double centre = 4.0 * unit_draw(rng) - 2.0;
  Vector x00(n);
  for (int a = 0; a < m; ++a) x00(place[a]) = centre + cfg.d * (0.9 * unit_draw(rng) - 0.45);
  for (int k = 0; k < q; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    x00(place[m + k]) = centre + sign * cfg.d * (1.5 + 1.2 * (k / 2));
  }
  return BcInstance{build_network(w, xi), std::move(x00), cfg, true};
}

}  // namespace

SpectralReport eigenvalues_dense(const Matrix& a, double unit_tol) {
  if (a.rows() != a.cols()) throw DimensionMismatch("eigenvalues need a square matrix");
  if (a.rows() > kMaxDenseEigenSize) {
    throw PreconditionViolated("dense eigensolver is limited to n <= " +
                               std::to_string(kMaxDenseEigenSize));
  }
  SpectralReport report;
  if (a.rows() == 0) return report;

  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw EigensolverFailure("QR iteration did not converge");
  }
  const auto values = solver.eigenvalues();
  report.eigenvalues.assign(values.data(), values.data() + values.size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              const double mx = std::abs(x);
              const double my = std::abs(y);
              if (mx != my) return mx > my;
              if (x.real() != y.real()) return x.real() > y.real();
              return x.imag() > y.imag();
            });
  report.spectral_radius = std::abs(report.eigenvalues.front());
  for (const auto& z : report.eigenvalues) {
    if (std::abs(std::abs(z) - 1.0) <= unit_tol) report.unit_circle_eigenvalues.push_back(z);
  }
  return report;
}

AugmentedSystem::AugmentedSystem(const InfluenceNetwork& net, const Vector& x0) : n_(net.size()) {
  if (x0.size() != n_) throw DimensionMismatch("x0 length does not match the network");
  w_hat_ = Matrix::Zero(2 * n_, 2 * n_);
  w_hat_.topLeftCorner(n_, n_).setIdentity();
  w_hat_.bottomLeftCorner(n_, n_) = (Vector::Ones(n_) - net.susceptibility()).asDiagonal();
  w_hat_.bottomRightCorner(n_, n_) = net.xi_w();
  state_.resize(2 * n_);
  state_ << x0, x0;
}

void AugmentedSystem::step() { state_ = w_hat_ * state_; }

Vector simulate_augmented(const InfluenceNetwork& net, const Vector& x0, int k) {
  AugmentedSystem sys(net, x0);
  for (int t = 0; t < k; ++t) sys.step();
  return sys.opinions();
}

const char* to_string(OutcomeLabel label) {
  switch (label) {
    case OutcomeLabel::converges: return "converges";
    case OutcomeLabel::oscillates: return "oscillates";
    case OutcomeLabel::consensus: return "consensus";
    case OutcomeLabel::clusters: return "clusters";
    case OutcomeLabel::budget_exhausted: return "budget_exhausted";
  }
  return "unknown";
}

OutcomeLabel brute_force_outcome(const InfluenceNetwork& net, const Vector& x00, OracleMode mode,
                                 const BruteForceOptions& options) {
  if (x00.size() != net.size()) throw DimensionMismatch("x00 length does not match the network");
  switch (mode) {
    case OracleMode::single_issue: return single_issue_outcome(net, x00, options);
    case OracleMode::issue_sequence: return sequence_outcome(net, x00, false, options);
    case OracleMode::bounded_confidence: return sequence_outcome(net, x00, true, options);
  }
  return OutcomeLabel::budget_exhausted;
}

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

InfluenceNetwork random_network(int n, double density, ClassMix mix, std::uint64_t seed) {
  if (n < 1) throw PreconditionViolated("random_network needs n >= 1");
  if (std::abs(mix.fully + mix.partially + mix.non - 1.0) > 1e-9 || mix.fully < 0 ||
      mix.partially < 0 || mix.non < 0) {
    throw PreconditionViolated("class probabilities must be non-negative and sum to 1");
  }
  std::mt19937_64 rng(seed);
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (density >= 1.0 || unit_draw(rng) < density) w(i, j) = 0.1 + 0.9 * unit_draw(rng);
    }
    if (w.row(i).sum() == 0.0) w(i, draw_index(rng, n)) = 0.1 + 0.9 * unit_draw(rng);
  }
  normalize_rows(w);
  Vector xi(n);
  for (int i = 0; i < n; ++i) xi(i) = draw_xi(rng, draw_class(rng, mix));
  return build_network(w, xi);
}

InfluenceNetwork random_periodic_network(int n, int period, std::uint64_t seed) {
  if (period < 2 || n < period) {
    throw PreconditionViolated("a planted periodic component needs 2 <= period <= n");
  }
  std::mt19937_64 rng(seed);
  // Component size m = period * layers; arcs only go from layer t to layer t + 1.
  const int layers = 1 + draw_index(rng, n / period);
  const int m = period * layers;

  std::vector<int> place(n);
  std::iota(place.begin(), place.end(), 0);
  std::shuffle(place.begin(), place.end(), rng);

  Matrix w = Matrix::Zero(n, n);
  Vector xi(n);
  for (int a = 0; a < m; ++a) {
    const int v = place[a];
    xi(v) = 1.0;
    // Cycle through the members in order closes the component: a - 1 -> a.
    const int prev = place[(a + m - 1) % m];
    w(v, prev) = 0.1 + 0.9 * unit_draw(rng);
    const int layer = a % period;
    for (int b = 0; b < m; ++b) {
      if (b % period == (layer + period - 1) % period && unit_draw(rng) < 0.3) {
        w(v, place[b]) = 0.1 + 0.9 * unit_draw(rng);
      }
    }
  }
  const ClassMix rest{0.3, 0.4, 0.3};
  for (int a = m; a < n; ++a) {
    const int v = place[a];
    for (int b = 0; b < n; ++b) {
      if (unit_draw(rng) < 0.4) w(v, place[b]) = 0.1 + 0.9 * unit_draw(rng);
    }
    if (w.row(v).sum() == 0.0) w(v, place[draw_index(rng, n)]) = 0.1 + 0.9 * unit_draw(rng);
    xi(v) = draw_xi(rng, draw_class(rng, rest));
  }
  normalize_rows(w);
  return build_network(w, xi);
}

Vector random_opinions(int n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = lo + (hi - lo) * unit_draw(rng);
  return x;
}

BcInstance assumption3_instance(std::uint64_t seed) {
  if (seed % 2 == 0) {
    for (std::uint64_t attempt = 0; attempt < 400; ++attempt) {
      if (auto inst = try_random_bc(mix_seed(seed, 1000 + attempt))) return std::move(*inst);
    }
  }
  return constructed_bc(seed);
}

}  // namespace fjdyn
