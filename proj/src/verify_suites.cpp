#include "fjdyn/verify_suites.hpp"

#include "fjdyn/bounded_confidence.hpp"
#include "fjdyn/errors.hpp"
#include "fjdyn/fj_single.hpp"
#include "fjdyn/issue_dynamics.hpp"
#include "fjdyn/oracle_suite.hpp"

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fjdyn {

namespace {

struct CaseOutcome {
  bool skipped = false;
  bool ok = true;
  std::string detail;
  std::vector<std::string> tally;
};


// Attempts per seed before giving up on finding a qualifying instance.
constexpr int kMaxAttempts = 500;

constexpr ClassMix kMixes[] = {
    {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.0, 0.5, 0.5}, {0.2, 0.3, 0.5}, {0.0, 0.0, 1.0}, {0.1, 0.2, 0.7},
};
constexpr double kDensities[] = {0.2, 0.5, 1.0};

int draw_int(std::mt19937_64& rng, int lo, int hi) {
  return std::min(hi, lo + static_cast<int>(unit_draw(rng) * (hi - lo + 1)));
}

// The mixed family: n in [2, 12], the three densities, five class mixes, and every
// fifth draw a planted periodic non-stubborn component.
InfluenceNetwork mixed_network(std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 11));
  const int n = draw_int(rng, 2, 12);
  const double density = kDensities[draw_int(rng, 0, 2)];
  const ClassMix mix = kMixes[draw_int(rng, 0, 4)];
  if (draw_int(rng, 0, 4) == 4) {
    const int period = draw_int(rng, 2, std::min(n, 4));
    return random_periodic_network(n, period, mix_seed(seed, 12));
  }
  return random_network(n, density, mix, mix_seed(seed, 13));
}

// First network of the family satisfying `accept`, trying derived sub-seeds.
template <typename Gen, typename Accept>
std::optional<InfluenceNetwork> find_instance(std::uint64_t seed, Gen gen, Accept accept) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    InfluenceNetwork net = gen(mix_seed(seed, 5000 + attempt));
    if (accept(net)) return net;
  }
  return std::nullopt;
}

std::string describe(const VertexSet& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
  os << ']';
  return os.str();
}

CaseOutcome fail(std::string detail) { return {false, false, std::move(detail), {}}; }

CaseOutcome theorem1_case(std::uint64_t seed) {
  const InfluenceNetwork net = mixed_network(seed);
  const bool structural = check_assumption1(net).holds;
  const SpectralConvergence spectral = check_convergence_spectral(net);
  CaseOutcome out;
  out.tally.push_back(structural ? "assumption1_holds" : "assumption1_fails");
  if (structural != spectral.converges) {
    std::ostringstream os;
    os << "n=" << net.size() << " structural=" << structural << " spectral=" << spectral.converges
       << " unit_circle_count=" << spectral.max_modulus_eigenvalues.size();
    out.ok = false;
    out.detail = os.str();
  }
  return out;
}

CaseOutcome property1_case(std::uint64_t seed) {
  const InfluenceNetwork net = mixed_network(seed);
  const int n = net.size();
  for (long k : {0L, 1L, 5L, 50L}) {
    const Matrix psi = influence_matrix_k(net, k);
    for (int i = 0; i < n; ++i) {
      const double sum = psi.row(i).sum();
      if (std::abs(sum - 1.0) > 1e-12) {
        return fail("Psi(" + std::to_string(k) + ") row " + std::to_string(i) + " sums to " +
                    std::to_string(sum));
      }
    }
    if (psi.minCoeff() < -1e-12) return fail("Psi(" + std::to_string(k) + ") has a negative entry");
  }
  CaseOutcome out;
  if (!check_assumption1(net).holds) {
    out.tally.push_back("limit_not_applicable");
    return out;
  }
  const InfluenceLimit limit = limit_influence_matrix(net);
  out.tally.push_back(limit.method == LimitMethod::closed_form ? "limit_closed_form" : "limit_iterative");
  for (int i = 0; i < n; ++i) {
    if (std::abs(limit.psi.row(i).sum() - 1.0) > 1e-10) {
      return fail("limit row " + std::to_string(i) + " is not stochastic");
    }
  }
  if (limit.psi.minCoeff() < -1e-10) return fail("limit has a negative entry");
  return out;
}

CaseOutcome property2_case(std::uint64_t seed) {
  auto net = find_instance(seed, [&](std::uint64_t s) { return mixed_network(s); },
                           [](const InfluenceNetwork& g) { return check_assumption1(g).holds; });
  if (!net) return {true, true, "", {}};
  const VertexSet zero = predicted_zero_columns(*net);
  const InfluenceLimit limit = limit_influence_matrix(*net);
  CaseOutcome out;
  out.tally.push_back(zero.empty() ? "no_zero_columns" : "zero_columns_predicted");
  out.tally.push_back(limit.method == LimitMethod::closed_form ? "limit_closed_form" : "limit_iterative");
  for (Vertex c : zero) {
    const double peak = limit.psi.col(c).cwiseAbs().maxCoeff();
    if (peak > 1e-10) {
      return fail("column " + std::to_string(c) + " predicted zero, max entry " + std::to_string(peak));
    }
  }
  return out;
}

CaseOutcome lemma3_case(std::uint64_t seed) {
  auto net = find_instance(seed, [&](std::uint64_t s) { return mixed_network(s); },
                           [](const InfluenceNetwork& g) { return check_assumption2(g).holds; });
  if (!net) return {true, true, "", {}};
  const InfluenceLimit limit = closed_form_limit(*net);
  const BoolMatrix predicted = predicted_psi_support(*net);
  CaseOutcome out;
  out.tally.push_back(net->partition().v_n.empty() ? "no_non_stubborn" : "with_non_stubborn");
  if (predicted != limit.support) {
    for (int i = 0; i < net->size(); ++i) {
      for (int j = 0; j < net->size(); ++j) {
        if (predicted(i, j) != limit.support(i, j)) {
          std::ostringstream os;
          os.precision(17);
          os << "entry (" << i << "," << j << ") predicted=" << predicted(i, j)
             << " computed=" << limit.psi(i, j);
          return fail(os.str());
        }
      }
    }
  }
  return out;
}

Digraph psi_pp_graph(const InfluenceNetwork& net, const InfluenceLimit& limit) {
  return Digraph::from_support(limit.support).induced(net.partition().v_p);
}

CaseOutcome property3_case(std::uint64_t seed) {
  auto gen = [](std::uint64_t s) {
    std::mt19937_64 rng(s);
    const int n = draw_int(rng, 2, 12);
    const double density = kDensities[draw_int(rng, 0, 2)];
    constexpr ClassMix mixes[] = {{0.1, 0.6, 0.3}, {0.0, 0.7, 0.3}, {0.2, 0.5, 0.3}, {0.0, 1.0, 0.0}};
    return random_network(n, density, mixes[draw_int(rng, 0, 3)], mix_seed(s, 1));
  };
  auto accept = [](const InfluenceNetwork& g) {
    if (g.partition().v_p.size() < 2 || !check_assumption2(g).holds) return false;
    return has_spanning_tree(psi_pp_graph(g, closed_form_limit(g))).has_value();
  };
  auto net = find_instance(seed, gen, accept);
  if (!net) return {true, true, "", {}};
  const Digraph g = psi_pp_graph(*net, closed_form_limit(*net));
  const VertexSet roots = spanning_tree_roots(g);
  CaseOutcome out;
  out.tally.push_back("v_p_size_" + std::to_string(g.size()));
  if (!has_star_center(g)) return fail("no star center although roots exist: " + describe(roots));
  for (Vertex r : roots) {
    if (!is_star_center(g, r)) return fail("root " + std::to_string(r) + " is not a star center");
  }
  return out;
}

// Two independent groups side by side, with a few arcs from the first group into
// the second so that the second may or may not remain independent.
InfluenceNetwork joined_network(const InfluenceNetwork& a, const InfluenceNetwork& b,
                                std::mt19937_64& rng) {
  const int na = a.size();
  const int n = na + b.size();
  Matrix w = Matrix::Zero(n, n);
  w.topLeftCorner(na, na) = a.weights();
  w.bottomRightCorner(b.size(), b.size()) = b.weights();
  Vector xi(n);
  xi << a.susceptibility(), b.susceptibility();
  if (unit_draw(rng) < 0.5) {
    const int target = draw_int(rng, na, n - 1);
    w.row(target) *= 0.7;
    w(target, draw_int(rng, 0, na - 1)) += 0.3;
  }
  return build_network(w, xi);
}

CaseOutcome theorem2_case(std::uint64_t seed) {
  auto gen = [](std::uint64_t s) {
    std::mt19937_64 rng(s);
    const int n = draw_int(rng, 2, 12);
    const double density = kDensities[draw_int(rng, 0, 2)];
    const double p = 0.3 + 0.2 * draw_int(rng, 0, 3);
    const ClassMix mix{0.0, p, 1.0 - p};
    if (n >= 4 && draw_int(rng, 0, 2) == 0) {
      const int na = draw_int(rng, 2, n - 2);
      return joined_network(random_network(na, density, mix, mix_seed(s, 2)),
                            random_network(n - na, density, mix, mix_seed(s, 3)), rng);
    }
    return random_network(n, density, mix, mix_seed(s, 1));
  };
  auto net = find_instance(seed, gen, [](const InfluenceNetwork& g) {
    return g.partition().v_f.empty() && check_assumption2(g).holds;
  });
  if (!net) return {true, true, "", {}};

  const Vector x00 = random_opinions(net->size(), -1.0, 1.0, mix_seed(seed, 21));
  const Theorem2Verdict t2 = check_theorem2(*net);
  const Corollary1Verdict c1 = check_corollary1(*net);
  const IssueSequenceResult seq = simulate_issue_sequence(*net, x00);

  CaseOutcome out;
  out.tally.push_back(to_string(seq.outcome.kind));
  const bool consensus = seq.outcome.kind == OutcomeKind::consensus;
  const bool clusters = seq.outcome.kind == OutcomeKind::clusters;
  if (consensus != t2.consensus || clusters != c1.clusters) {
    std::ostringstream os;
    os << "n=" << net->size() << " simulated=" << to_string(seq.outcome.kind)
       << " theorem2=" << t2.consensus << " corollary1=" << c1.clusters << " issues=" << seq.issues_run;
    out.ok = false;
    out.detail = os.str();
  }
  return out;
}

CaseOutcome lemma5_case(std::uint64_t seed) {
  const BcInstance inst = assumption3_instance(seed);
  const InfluenceLimit limit = closed_form_limit(inst.network);
  const Vector y0 = limit.psi * inst.x00;
  CaseOutcome out;
  out.tally.push_back(inst.constructed ? "constructed" : "rejection_sampled");
  if (!check_assumption3(inst.network, limit, y0, inst.cfg).holds) {
    return fail("generated instance violates the preservation conditions");
  }
  const Theorem3Verdict t3 = check_theorem3(inst.network, limit, y0, inst.cfg);
  const BcSequenceResult run = simulate_bc_sequence(limit, inst.x00, inst.cfg);
  out.tally.push_back(t3.consensus ? "conditions_hold" : "conditions_fail");
  out.tally.push_back(to_string(run.result.outcome.kind));
  if (!run.preservation_ok) {
    return fail("edge lost at issue " + std::to_string(run.first_loss_issue.value_or(-1)));
  }
  if (t3.consensus) {
    if (!run.result.settled || spread(run.result.final_opinions) >= 1e-6) {
      std::ostringstream os;
      os << "conditions hold but spread " << spread(run.result.final_opinions) << " after "
         << run.result.issues_run << " issues";
      return fail(os.str());
    }
  }
  return out;
}

CaseOutcome augmented_case(std::uint64_t seed) {
  const InfluenceNetwork net = mixed_network(seed);
  const Vector x0 = random_opinions(net.size(), -2.0, 2.0, mix_seed(seed, 31));
  AugmentedSystem sys(net, x0);
  Vector x = x0;
  for (int k = 1; k <= 500; ++k) {
    sys.step();
    x = fj_step(net, x, x0);
    const double gap = inf_norm(Vector(sys.opinions() - x));
    if (gap > 1e-12) {
      return fail("k=" + std::to_string(k) + " differs by " + std::to_string(gap));
    }
  }
  return {};
}

struct SuiteDef {
  const char* name;
  int floor;  // minimum instances required
  CaseOutcome (*fn)(std::uint64_t);
};

constexpr SuiteDef kSuites[] = {
    {"theorem1", 1000, theorem1_case}, {"property1", 100, property1_case},
    {"property2", 200, property2_case}, {"lemma3", 500, lemma3_case},
    {"property3", 200, property3_case}, {"theorem2", 300, theorem2_case},
    {"lemma5", 200, lemma5_case},       {"augmented", 100, augmented_case},
};

const SuiteDef& lookup(const std::string& name) {
  for (const SuiteDef& s : kSuites) {
    if (name == s.name) return s;
  }
  throw std::invalid_argument("unknown suite: " + name);
}

CaseOutcome guarded(const SuiteDef& def, std::uint64_t seed) {
  try {
    return def.fn(seed);
  } catch (const std::exception& e) {
    return fail(std::string("exception: ") + e.what());
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const SuiteDef& s : kSuites) v.emplace_back(s.name);
    return v;
  }();
  return names;
}

SeedRange default_seed_range(const std::string& suite) {
  return {0, static_cast<std::uint64_t>(lookup(suite).floor - 1)};
}

SuiteResult run_suite(const std::string& suite, SeedRange seeds, int jobs) {
  const SuiteDef& def = lookup(suite);
  if (seeds.last < seeds.first) throw std::invalid_argument("empty seed range");
  const std::size_t count = seeds.last - seeds.first + 1;
  std::vector<CaseOutcome> outcomes(count);

  const int workers = static_cast<int>(std::clamp<std::size_t>(jobs < 1 ? 1 : jobs, 1, count));
  if (workers == 1) {
    for (std::size_t k = 0; k < count; ++k) outcomes[k] = guarded(def, seeds.first + k);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < count; k += workers) outcomes[k] = guarded(def, seeds.first + k);
      });
    }
    for (auto& t : pool) t.join();
  }

  SuiteResult result;
  result.name = suite;
  result.first_seed = seeds.first;
  result.last_seed = seeds.last;
  for (std::size_t k = 0; k < count; ++k) {
    const CaseOutcome& c = outcomes[k];
    if (c.skipped) {
      ++result.skipped;
      continue;
    }
    ++result.instances;
    for (const auto& key : c.tally) ++result.tallies[key];
    if (!c.ok) result.failures.push_back({seeds.first + k, c.detail});
  }
  return result;
}

std::string suite_results_json(const std::vector<SuiteResult>& results) {
  nlohmann::ordered_json doc;
  bool all = true;
  doc["suites"] = nlohmann::ordered_json::array();
  for (const SuiteResult& r : results) {
    nlohmann::ordered_json s;
    s["name"] = r.name;
    s["seeds"] = {{"first", r.first_seed}, {"last", r.last_seed}};
    s["instances"] = r.instances;
    s["skipped"] = r.skipped;
    s["passed"] = r.passed();
    s["failures"] = nlohmann::ordered_json::array();
    for (const SuiteFailure& f : r.failures) s["failures"].push_back({{"seed", f.seed}, {"detail", f.detail}});
    s["tallies"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : r.tallies) s["tallies"][key] = value;
    all = all && r.passed();
    doc["suites"].push_back(std::move(s));
  }
  doc["passed"] = all;
  return doc.dump(2) + "\n";
}

}  // namespace fjdyn
