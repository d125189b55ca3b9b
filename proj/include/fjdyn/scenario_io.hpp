#pragma once

// Scenario files (JSON) and trajectory CSV output.

#include "fjdyn/bounded_confidence.hpp"
#include "fjdyn/fj_single.hpp"
#include "fjdyn/graph_core.hpp"
#include "fjdyn/issue_dynamics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fjdyn {

enum class ScenarioMode { single, sequence, bounded };

const char* to_string(ScenarioMode mode);

struct Budgets {
  long max_iter = 100000;
  int max_issues = 10000;
};

struct Tolerances {
  double step_tol = 1e-10;
  double consensus_tol = 1e-6;
  double cluster_tol = 1e-6;
};

struct Scenario {
  std::string name;
  InfluenceNetwork network;
  Vector x0;
  ScenarioMode mode = ScenarioMode::single;
  std::optional<ConfidenceConfig> confidence;
  Budgets budgets;
  Tolerances tolerances;
  std::optional<std::uint64_t> seed;

  SimulationOptions simulation_options(bool record_full = false) const;
  SequenceOptions sequence_options(bool record_full = false) const;
};

/// Throws ParseError (line, column) for malformed JSON and ValidationError (field
/// path such as "W[2]" or "confidence.h") for anything the model rejects.
Scenario parse_scenario(const std::string& text);

/// As parse_scenario; throws IoError when the file cannot be read.
Scenario load_scenario(const std::string& path);

/// 17 significant digits, enough to reproduce every double exactly.
std::string format_double(double v);

/// Writes to a sibling temporary file, then renames over `path`. Throws IoError.
void write_file_atomic(const std::string& path, const std::string& contents);

/// CSV with header issue,k,agent_0,...,agent_{n-1}; one row per state.
std::string trajectory_csv(const std::vector<OpinionState>& states, int n);

void write_trajectory(const Trajectory& trajectory, int n, const std::string& path);
void write_trajectory(const IssueSequenceResult& result, int n, const std::string& path);

/// Parses what trajectory_csv emits. Throws ParseError.
std::vector<OpinionState> parse_trajectory_csv(const std::string& text);

}  // namespace fjdyn
