#pragma once

// Uniform output envelope for the command-line tools: one tabular payload
// plus named pass/fail checks, rendered as CSV, JSON, or an aligned human
// table.  The JSON and table renderings carry identical numeric payloads
// (floats are emitted with 17 significant digits, which round-trips doubles
// exactly); exact probabilities travel as numerator / 2^log2_denominator
// alongside their float rendition.

#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "walkmax/distributions.hpp"

namespace walkmax {

inline std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// A cell: empty, text, integer, float, or arbitrary-precision integer.
using Value = std::variant<std::monostate, std::string, long long,
                           unsigned long long, double, BigInt>;

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0;
  double bound = 0;
};

struct OutputEnvelope {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
  std::vector<Check> checks;

  bool all_checks_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline std::string value_to_string(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(unsigned long long x) const { return std::to_string(x); }
    std::string operator()(double x) const { return format_float(x); }
    std::string operator()(const BigInt& x) const { return x.str(); }
  };
  return std::visit(Visitor{}, v);
}

inline nlohmann::json value_to_json(const Value& v) {
  struct Visitor {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(const std::string& s) const { return s; }
    nlohmann::json operator()(long long x) const { return x; }
    nlohmann::json operator()(unsigned long long x) const { return x; }
    nlohmann::json operator()(double x) const { return x; }
    nlohmann::json operator()(const BigInt& x) const { return x.str(); }
  };
  return std::visit(Visitor{}, v);
}

// ---------------------------------------------------------------------------
// Renderers
// ---------------------------------------------------------------------------

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string render_csv(const OutputEnvelope& e) {
  std::string out;
  out += "# command=" + e.command + "\n";
  for (const auto& [k, v] : e.params) out += "# " + k + "=" + v + "\n";
  for (std::size_t i = 0; i < e.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(e.columns[i]);
  }
  out += '\n';
  for (const auto& row : e.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(value_to_string(row[i]));
    }
    out += '\n';
  }
  for (const auto& c : e.checks)
    out += "# check: " + c.name + "," + (c.pass ? "pass" : "fail") + "," +
           format_float(c.measured) + "," + format_float(c.bound) + "\n";
  return out;
}

inline nlohmann::json render_json(const OutputEnvelope& e) {
  nlohmann::json j;
  j["command"] = e.command;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : e.params) params[k] = v;
  j["params"] = std::move(params);
  j["columns"] = e.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : e.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) r.push_back(value_to_json(v));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : e.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"measured", c.measured},
                      {"bound", c.bound}});
  j["checks"] = std::move(checks);
  return j;
}

inline std::string render_table(const OutputEnvelope& e) {
  std::string out = "command: " + e.command + "\n";
  for (const auto& [k, v] : e.params) out += "  " + k + " = " + v + "\n";
  std::vector<std::size_t> width(e.columns.size());
  std::vector<std::vector<std::string>> cells;
  cells.reserve(e.rows.size());
  for (std::size_t i = 0; i < e.columns.size(); ++i) width[i] = e.columns[i].size();
  for (const auto& row : e.rows) {
    std::vector<std::string> r;
    r.reserve(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
      r.push_back(value_to_string(row[i]));
      if (i < width.size() && r.back().size() > width[i]) width[i] = r.back().size();
    }
    cells.push_back(std::move(r));
  }
  const auto pad = [](const std::string& s, std::size_t w) {
    std::string p = s;
    p.resize(w, ' ');
    return p;
  };
  for (std::size_t i = 0; i < e.columns.size(); ++i)
    out += (i ? "  " : "") + pad(e.columns[i], width[i]);
  out += '\n';
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size(); ++i)
      out += (i ? "  " : "") + pad(r[i], i < width.size() ? width[i] : r[i].size());
    out += '\n';
  }
  if (!e.checks.empty()) {
    out += "checks:\n";
    for (const auto& c : e.checks)
      out += std::string("  [") + (c.pass ? "PASS" : "FAIL") + "] " + c.name +
             "  measured=" + format_float(c.measured) +
             "  bound=" + format_float(c.bound) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Row builders for the exact distribution types
// ---------------------------------------------------------------------------

// Shared schema: a discriminator plus (n, x, a, numerator, log2_denominator,
// float_value); marginals leave the coordinate they integrated out empty.
inline std::vector<std::string> dist_columns() {
  return {"table", "n", "x", "a", "numerator", "log2_denominator", "float_value"};
}

inline void append_joint_rows(OutputEnvelope& e, const JointTable& t) {
  for (const auto& [key, p] : t.entries)
    e.rows.push_back({std::string("joint"), static_cast<long long>(t.n),
                      static_cast<long long>(key.first),
                      static_cast<long long>(key.second), p.numerator(),
                      static_cast<long long>(p.log2_denominator()),
                      p.to_double()});
}

inline void append_position_rows(OutputEnvelope& e, const PosDist& d) {
  for (const auto& [x, p] : d.pmf)
    e.rows.push_back({std::string("position"), static_cast<long long>(d.n),
                      static_cast<long long>(x), std::monostate{}, p.numerator(),
                      static_cast<long long>(p.log2_denominator()),
                      p.to_double()});
}

inline void append_max_rows(OutputEnvelope& e, const MaxDist& d) {
  for (const auto& [a, p] : d.pmf)
    e.rows.push_back({std::string("max"), static_cast<long long>(d.n),
                      std::monostate{}, static_cast<long long>(a), p.numerator(),
                      static_cast<long long>(p.log2_denominator()),
                      p.to_double()});
}

}  // namespace walkmax
