#pragma once

// Seeded randomized suites that pit each structural predicate against its
// numerical oracle. Every seed yields one instance; a disagreement is recorded
// with the seed so it can be replayed.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fjdyn {

struct SuiteFailure {
  std::uint64_t seed = 0;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::uint64_t first_seed = 0;
  std::uint64_t last_seed = 0;
  int instances = 0;
  /// Seeds for which no qualifying instance was found.
  int skipped = 0;
  std::vector<SuiteFailure> failures;
  std::map<std::string, int> tallies;

  bool passed() const { return failures.empty(); }
};

struct SeedRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;  // inclusive
};

/// theorem1, property1, property2, lemma3, property3, theorem2, lemma5, augmented.
const std::vector<std::string>& suite_names();

/// Seeds 0..count-1, with count the instance floor for that suite.
SeedRange default_seed_range(const std::string& suite);

/// Throws std::invalid_argument for an unknown suite. `jobs` > 1 shards seeds
/// across threads; the merged result is identical to a serial run.
SuiteResult run_suite(const std::string& suite, SeedRange seeds, int jobs = 1);

/// Deterministic JSON document for a set of suite results.
std::string suite_results_json(const std::vector<SuiteResult>& results);

}  // namespace fjdyn
