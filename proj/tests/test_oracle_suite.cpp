#include "support.hpp"

#include "fjdyn/errors.hpp"
#include "fjdyn/fj_single.hpp"
#include "fjdyn/oracle_suite.hpp"
#include "fjdyn/verify_suites.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace fjdyn;
using namespace fjtest;

TEST_CASE("eigenvalues of the identity are all one") {
  const SpectralReport r = eigenvalues_dense(Matrix::Identity(5, 5));
  REQUIRE(r.eigenvalues.size() == 5);
  for (const auto& l : r.eigenvalues) CHECK(std::abs(l - 1.0) <= 1e-12);
  CHECK(r.unit_circle_eigenvalues.size() == 5);
  CHECK(r.spectral_radius == doctest::Approx(1.0));
}

TEST_CASE("eigenvalues of a 3-cycle are the cube roots of unity, in canonical order") {
  const SpectralReport r = eigenvalues_dense(cyclic_permutation(3));
  REQUIRE(r.eigenvalues.size() == 3);
  const double s = std::sqrt(3.0) / 2;
  CHECK(std::abs(r.eigenvalues[0] - std::complex<double>(1, 0)) <= 1e-12);
  CHECK(std::abs(r.eigenvalues[1] - std::complex<double>(-0.5, s)) <= 1e-12);
  CHECK(std::abs(r.eigenvalues[2] - std::complex<double>(-0.5, -s)) <= 1e-12);
}

TEST_CASE("eigenvalues of Xi W in the first example: only 1 on the unit circle") {
  const SpectralReport r = eigenvalues_dense(example1().net.xi_w());
  REQUIRE(r.unit_circle_eigenvalues.size() == 1);
  CHECK(std::abs(r.unit_circle_eigenvalues[0] - 1.0) <= 1e-8);
}

TEST_CASE("the eigensolver refuses matrices above the size guard") {
  CHECK_THROWS_AS(eigenvalues_dense(Matrix::Identity(65, 65)), PreconditionViolated);
}

TEST_CASE("eigenvalues agree with characteristic-polynomial roots on small matrices") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const int n = 2 + static_cast<int>(s % 3);
    const Matrix a = random_network(n, 0.7, {0.2, 0.5, 0.3}, 7000 + s).xi_w();
    const SpectralReport r = eigenvalues_dense(a);
    CHECK(r.eigenvalues.size() == static_cast<std::size_t>(n));
    double radius = 0.0;
    for (const auto& l : r.eigenvalues) radius = std::max(radius, std::abs(l));
    CHECK(std::abs(r.spectral_radius - radius) <= 1e-10);
    for (std::size_t k = 1; k < r.eigenvalues.size(); ++k) {
      CHECK(std::abs(r.eigenvalues[k]) <= std::abs(r.eigenvalues[k - 1]) + 1e-12);
    }
    const auto roots = poly_roots(char_poly(a));
    // Repeated roots make the polynomial route ill-conditioned; compare simple spectra only.
    double min_gap = 1e300;
    for (std::size_t i = 0; i < roots.size(); ++i)
      for (std::size_t j = i + 1; j < roots.size(); ++j) min_gap = std::min(min_gap, std::abs(roots[i] - roots[j]));
    if (min_gap < 1e-3) continue;
    CHECK(multiset_distance(r.eigenvalues, roots) <= 1e-8);
  }
}

TEST_CASE("augmented system: k = 0 and k = 1") {
  const auto f = example1();
  CHECK(simulate_augmented(f.net, f.x0, 0) == f.x0);
  CHECK(inf_norm(Vector(simulate_augmented(f.net, f.x0, 1) - fj_step(f.net, f.x0, f.x0))) <= 1e-15);
  AugmentedSystem sys(f.net, f.x0);
  CHECK(sys.matrix().rows() == 20);
  CHECK(sys.matrix().topLeftCorner(10, 10) == Matrix::Identity(10, 10));
  CHECK(sys.matrix().topRightCorner(10, 10) == Matrix::Zero(10, 10));
}

TEST_CASE("augmented system reproduces the single-issue trajectory") {
  std::vector<Fixture> fixtures = all_examples();
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto net = random_network(2 + s % 11, 0.5, {0.2, 0.5, 0.3}, 7100 + s);
    fixtures.push_back({net, random_opinions(net.size(), -1, 1, s)});
  }
  for (const auto& f : fixtures) {
    AugmentedSystem sys(f.net, f.x0);
    Vector x = f.x0;
    for (int k = 1; k <= 500; ++k) {
      sys.step();
      x = fj_step(f.net, x, f.x0);
      if (k == 100 || k == 500) CHECK(inf_norm(Vector(sys.opinions() - x)) <= 1e-12);
    }
  }
}

TEST_CASE("brute-force classification") {
  const auto pair = build_network(mat({{0, 1}, {1, 0}}), vec({1, 1}));
  CHECK(brute_force_outcome(pair, vec({0, 1}), OracleMode::single_issue) == OutcomeLabel::oscillates);
  CHECK(brute_force_outcome(example1().net, example1().x0, OracleMode::single_issue) == OutcomeLabel::converges);

  const auto f2 = example2();
  CHECK(brute_force_outcome(f2.net, f2.x0, OracleMode::issue_sequence) == OutcomeLabel::consensus);

  Matrix w = Matrix::Zero(4, 4);
  w.topLeftCorner(2, 2) = cyclic_permutation(2);
  w.bottomRightCorner(2, 2) = cyclic_permutation(2);
  const auto split = build_network(w, Vector::Constant(4, 0.5));
  CHECK(brute_force_outcome(split, vec({0, 1, 2, 3}), OracleMode::issue_sequence) == OutcomeLabel::clusters);

  BruteForceOptions opts;
  opts.confidence = ConfidenceConfig{1.0, 0.1};
  const auto f3 = example3();
  CHECK(brute_force_outcome(f3.net, f3.x0, OracleMode::bounded_confidence, opts) == OutcomeLabel::consensus);
  CHECK_THROWS_AS(brute_force_outcome(f3.net, f3.x0, OracleMode::bounded_confidence), PreconditionViolated);
}

TEST_CASE("random networks are deterministic and well formed") {
  const auto a = random_network(8, 0.3, {0.3, 0.4, 0.3}, 99);
  const auto b = random_network(8, 0.3, {0.3, 0.4, 0.3}, 99);
  CHECK(a.weights() == b.weights());
  CHECK(a.susceptibility() == b.susceptibility());
  CHECK(random_opinions(5, -1, 1, 3) == random_opinions(5, -1, 1, 3));

  const auto full = random_network(6, 1.0, {0.3, 0.4, 0.3}, 5);
  CHECK((full.weights().array() > 0).all());

  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto net = random_network(2 + s % 11, 0.2, {0, 1, 0}, 7200 + s);
    CHECK(net.partition().v_f.empty());
    CHECK(net.partition().v_n.empty());
    for (int i = 0; i < net.size(); ++i) {
      CHECK(net.susceptibility()(i) > 0.05);
      CHECK(net.susceptibility()(i) < 0.95);
      CHECK(net.graph().predecessors(i).size() >= 1);
    }
  }
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const double u = unit_draw(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
}

TEST_CASE("planted periodic networks violate the convergence condition") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const int n = 3 + static_cast<int>(s % 8);
    const int period = 2 + static_cast<int>(s % 2);
    const auto net = random_periodic_network(n, period, 7300 + s);
    CHECK_FALSE(check_assumption1(net).holds);
    CHECK_FALSE(check_convergence_spectral(net).converges);
  }
}

TEST_CASE("constructed bounded-confidence instances satisfy assumption 3") {
  int constructed = 0;
  for (std::uint64_t s = 0; s < 120; ++s) {
    const BcInstance inst = assumption3_instance(s);
    const int n = inst.network.size();
    CHECK(gain_window(n).contains(inst.cfg.h));
    const InfluenceLimit lim = limit_influence_matrix(inst.network);
    CHECK(check_assumption3(inst.network, lim, lim.psi * inst.x00, inst.cfg).holds);
    constructed += inst.constructed ? 1 : 0;
  }
  CHECK(constructed > 0);
  CHECK(constructed < 120);
}

TEST_CASE("verification suites: names, ranges and errors") {
  CHECK(suite_names().size() == 8);
  CHECK(default_seed_range("theorem1").last == 999);
  CHECK_THROWS_AS(run_suite("nope", {0, 1}), std::invalid_argument);
}

TEST_CASE("every suite passes on a short seed range, serial and sharded alike") {
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    const SuiteResult serial = run_suite(name, {0, 39}, 1);
    const SuiteResult sharded = run_suite(name, {0, 39}, 3);
    CHECK(serial.passed());
    for (const auto& f : serial.failures) MESSAGE("seed " << f.seed << ": " << f.detail);
    CHECK(serial.instances + serial.skipped == 40);
    CHECK(suite_results_json({serial}) == suite_results_json({sharded}));
  }
}
