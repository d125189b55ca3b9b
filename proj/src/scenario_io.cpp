#include "fjdyn/scenario_io.hpp"

#include "fjdyn/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace fjdyn {

namespace {

using nlohmann::json;

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

double number_at(const json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(field, "must be finite");
  return x;
}

Vector vector_at(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(key, "required field is missing");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw ValidationError(key, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(i) = number_at(arr[i], index_path(key, i));
  return v;
}

Matrix matrix_at(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(key, "required field is missing");
  const json& rows = doc.at(key);
  if (!rows.is_array() || rows.empty()) throw ValidationError(key, "expected a non-empty array of rows");
  const std::size_t n = rows.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_field = index_path(key, i);
    if (!rows[i].is_array()) throw ValidationError(row_field, "expected an array of numbers");
    if (rows[i].size() != n) {
      throw ValidationError(row_field, "has " + std::to_string(rows[i].size()) +
                                           " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = number_at(rows[i][j], index_path(row_field, j));
  }
  return m;
}

double positive_at(const json& obj, const std::string& parent, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const std::string field = parent + "." + key;
  const double v = number_at(obj.at(key), field);
  if (!(v > 0.0)) throw ValidationError(field, "must be positive");
  return v;
}

long long count_at(const json& obj, const std::string& parent, const char* key, long long fallback,
                   long long max) {
  if (!obj.contains(key)) return fallback;
  const std::string field = parent + "." + key;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(field, "expected an integer");
  const long long x = v.get<long long>();
  if (x < 1 || x > max) throw ValidationError(field, "must lie in [1, " + std::to_string(max) + "]");
  return x;
}

void reject_unknown(const json& obj, const std::string& parent, std::initializer_list<const char*> known) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError(parent.empty() ? item.key() : parent + "." + item.key(), "unknown field");
    }
  }
}

const json& object_at(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_object()) throw ValidationError(key, "expected an object");
  return v;
}

void line_column(const std::string& text, std::size_t byte, int& line, int& column) {
  line = 1;
  column = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t k = 0; k + 1 < end; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

InfluenceNetwork network_from(const Matrix& w, const Vector& xi) {
  try {
    return build_network(w, xi);
  } catch (const NonStochasticRow& e) {
    throw ValidationError(index_path("W", e.row()),
                          "row sums to " + format_double(e.sum()) + ", expected 1 within 1e-9");
  } catch (const OutOfRangeEntry& e) {
    std::string field = index_path(e.field(), e.row());
    if (e.col() >= 0) field = index_path(field, e.col());
    throw ValidationError(field, "entry lies outside [0, 1]");
  } catch (const DimensionMismatch& e) {
    throw ValidationError("xi", e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return buf.str();
}

}  // namespace

const char* to_string(ScenarioMode mode) {
  switch (mode) {
    case ScenarioMode::single: return "single";
    case ScenarioMode::sequence: return "sequence";
    case ScenarioMode::bounded: return "bounded";
  }
  return "unknown";
}

SimulationOptions Scenario::simulation_options(bool record_full) const {
  SimulationOptions o;
  o.tol = tolerances.step_tol;
  o.max_iter = budgets.max_iter;
  o.record_full = record_full;
  return o;
}

SequenceOptions Scenario::sequence_options(bool record_full) const {
  SequenceOptions o;
  o.max_issues = budgets.max_issues;
  o.consensus_tol = tolerances.consensus_tol;
  o.cluster_tol = tolerances.cluster_tol;
  o.record_full = record_full;
  return o;
}

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 0;
    int column = 0;
    line_column(text, e.byte, line, column);
    std::string reason = e.what();
    // Drop the library's own "[json.exception.parse_error.101] parse error at ...: " prefix.
    if (auto pos = reason.find("syntax error"); pos != std::string::npos) reason = reason.substr(pos);
    throw ParseError(reason, line, column);
  }
  if (!doc.is_object()) throw ValidationError("(root)", "scenario must be a JSON object");
  reject_unknown(doc, "", {"name", "W", "xi", "x0", "mode", "confidence", "budgets", "tolerances", "seed"});

  Scenario sc;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ValidationError("name", "expected a string");
    sc.name = doc["name"].get<std::string>();
  }

  const Matrix w = matrix_at(doc, "W");
  const Vector xi = vector_at(doc, "xi");
  if (xi.size() != w.rows()) {
    throw ValidationError("xi", "has length " + std::to_string(xi.size()) + ", expected " +
                                    std::to_string(w.rows()));
  }
  sc.network = network_from(w, xi);
  sc.x0 = vector_at(doc, "x0");
  if (sc.x0.size() != w.rows()) {
    throw ValidationError("x0", "has length " + std::to_string(sc.x0.size()) + ", expected " +
                                    std::to_string(w.rows()));
  }

  if (doc.contains("mode")) {
    const json& m = doc["mode"];
    const std::string s = m.is_string() ? m.get<std::string>() : "";
    if (s == "single") {
      sc.mode = ScenarioMode::single;
    } else if (s == "sequence") {
      sc.mode = ScenarioMode::sequence;
    } else if (s == "bounded") {
      sc.mode = ScenarioMode::bounded;
    } else {
      throw ValidationError("mode", "expected one of \"single\", \"sequence\", \"bounded\"");
    }
  }

  if (doc.contains("confidence")) {
    const json& c = object_at(doc, "confidence");
    reject_unknown(c, "confidence", {"d", "h"});
    if (!c.contains("d")) throw ValidationError("confidence.d", "required field is missing");
    if (!c.contains("h")) throw ValidationError("confidence.h", "required field is missing");
    ConfidenceConfig cfg;
    cfg.d = positive_at(c, "confidence", "d", 1.0);
    cfg.h = positive_at(c, "confidence", "h", 0.1);
    try {
      cfg.validate(sc.network.size());
    } catch (const GainOutOfRange& e) {
      throw ValidationError("confidence.h", e.what());
    }
    sc.confidence = cfg;
  }
  if (sc.mode == ScenarioMode::bounded && !sc.confidence) {
    throw ValidationError("confidence", "mode \"bounded\" requires a confidence block");
  }

  if (doc.contains("budgets")) {
    const json& b = object_at(doc, "budgets");
    reject_unknown(b, "budgets", {"max_iter", "max_issues"});
    sc.budgets.max_iter = static_cast<long>(
        count_at(b, "budgets", "max_iter", sc.budgets.max_iter, std::numeric_limits<long>::max()));
    sc.budgets.max_issues = static_cast<int>(
        count_at(b, "budgets", "max_issues", sc.budgets.max_issues, std::numeric_limits<int>::max()));
  }

  if (doc.contains("tolerances")) {
    const json& t = object_at(doc, "tolerances");
    reject_unknown(t, "tolerances", {"step_tol", "consensus_tol", "cluster_tol"});
    sc.tolerances.step_tol = positive_at(t, "tolerances", "step_tol", sc.tolerances.step_tol);
    sc.tolerances.consensus_tol = positive_at(t, "tolerances", "consensus_tol", sc.tolerances.consensus_tol);
    sc.tolerances.cluster_tol = positive_at(t, "tolerances", "cluster_tol", sc.tolerances.cluster_tol);
  }

  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (!s.is_number_unsigned()) throw ValidationError("seed", "expected a non-negative integer");
    sc.seed = s.get<std::uint64_t>();
  }
  return sc;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignore;
      fs::remove(tmp, ignore);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

std::string trajectory_csv(const std::vector<OpinionState>& states, int n) {
  std::string out = "issue,k";
  for (int i = 0; i < n; ++i) out += ",agent_" + std::to_string(i);
  out += '\n';
  for (const OpinionState& st : states) {
    if (st.x.size() != n) throw DimensionMismatch("state length does not match the agent count");
    out += std::to_string(st.issue);
    out += ',';
    out += std::to_string(st.time);
    for (int i = 0; i < n; ++i) {
      out += ',';
      out += format_double(st.x(i));
    }
    out += '\n';
  }
  return out;
}

void write_trajectory(const Trajectory& trajectory, int n, const std::string& path) {
  write_file_atomic(path, trajectory_csv(trajectory.states, n));
}

void write_trajectory(const IssueSequenceResult& result, int n, const std::string& path) {
  write_file_atomic(path, trajectory_csv(result.initial_opinions_per_issue, n));
}

std::vector<OpinionState> parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("issue,k", 0) != 0) {
    throw ParseError("expected header starting with issue,k", 1, 1);
  }
  const int n = static_cast<int>(std::count(line.begin(), line.end(), ',')) - 1;

  std::vector<OpinionState> states;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (static_cast<int>(cells.size()) != n + 2) {
      throw ParseError("expected " + std::to_string(n + 2) + " cells", line_no, 1);
    }
    OpinionState st;
    st.x.resize(n);
    int column = 1;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char* end = nullptr;
      const double v = std::strtod(cells[c].c_str(), &end);
      if (cells[c].empty() || *end != '\0') throw ParseError("not a number: " + cells[c], line_no, column);
      if (c == 0) {
        st.issue = static_cast<int>(v);
      } else if (c == 1) {
        st.time = static_cast<long>(v);
      } else {
        st.x(static_cast<Eigen::Index>(c - 2)) = v;
      }
      column += static_cast<int>(cells[c].size()) + 1;
    }
    states.push_back(std::move(st));
  }
  return states;
}

}  // namespace fjdyn
