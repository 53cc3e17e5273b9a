#pragma once

// JSON and CSV I/O: measure specs, configs, lattices, reports and verify summaries.
// Needs vendor/json.hpp on the include path.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "carleson_lab/carleson.hpp"
#include "carleson_lab/lattice.hpp"
#include "carleson_lab/measures.hpp"
#include "carleson_lab/operators.hpp"
#include "carleson_lab/quadrature.hpp"
#include "carleson_lab/verify.hpp"

namespace carleson_lab::io {

using json = nlohmann::json;

inline constexpr int kReportVersion = 1;

// ---------------------------------------------------------------------------
// Parsing helpers.

/// Parses text, turning syntax errors into DomainError with line and column.
inline json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    const auto at = msg.find("parse error");
    if (at != std::string::npos) msg = msg.substr(at);
    throw DomainError(source + ": malformed JSON: " + msg);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline json load_json(const std::string& path) { return parse_json(read_file(path), path); }

inline void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw DomainError(where + ": expected an object");
}

/// Rejects keys outside `allowed`.
inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw DomainError(where + ": unknown key '" + key + "'");
  }
}

inline double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw DomainError(where + ": missing '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw DomainError(where + "." + key + ": expected a number");
  return v.get<double>();
}

template <class T>
void read_opt(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw DomainError(where + "." + key + ": expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw DomainError(where + "." + key + ": expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
        throw DomainError(where + "." + key + ": must be >= 0");
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw DomainError(where + "." + key + ": expected a number");
  } else {
    if (!v.is_string()) throw DomainError(where + "." + key + ": expected a string");
  }
  out = v.get<T>();
}

// ---------------------------------------------------------------------------
// Points and measures.

inline json to_json(const Point& z) {
  json out = json::array();
  for (int i = 0; i < z.dim(); ++i) out.push_back({z[i].real(), z[i].imag()});
  return out;
}

inline Point point_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim))
    throw DomainError(where + ": expected 1.." + std::to_string(kMaxDim) + " [re, im] pairs");
  std::array<cplx, kMaxDim> c{};
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& pr = j[i];
    if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number() || !pr[1].is_number())
      throw DomainError(where + "[" + std::to_string(i) + "]: expected [re, im]");
    c[i] = cplx(pr[0].get<double>(), pr[1].get<double>());
  }
  return Point::from_coords(std::span<const cplx>(c.data(), j.size()));
}

inline json to_json(const measures::MeasureSpec& mu) {
  return std::visit(
      [&](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, measures::RadialPower>) {
          json out{{"type", "radial_power"}, {"theta", m.theta}};
          if (m.coef != 1.0) out["coef"] = m.coef;
          return out;
        } else if constexpr (std::is_same_v<T, measures::WeightedDensity>) {
          json out{{"type", "weighted_density"}, {"theta", m.theta}, {"h", measures::builtin_name(m.h)}};
          if (m.coef != 1.0) out["coef"] = m.coef;
          return out;
        } else if constexpr (std::is_same_v<T, measures::Atomic>) {
          json atoms = json::array();
          for (const auto& a : m.atoms) atoms.push_back({{"point", to_json(a.point)}, {"mass", a.mass}});
          return {{"type", "atomic"}, {"atoms", atoms}};
        } else {
          json parts = json::array();
          for (const auto& p : m.parts) parts.push_back(to_json(p));
          return {{"type", "sum"}, {"parts", parts}};
        }
      },
      mu.variant());
}

/// Dimension fixed by the first atom in the document, if any.
inline std::optional<int> implied_dim(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) return std::nullopt;
  const auto type = j["type"].get<std::string>();
  if (type == "atomic" && j.contains("atoms") && j["atoms"].is_array() && !j["atoms"].empty()) {
    const auto& a = j["atoms"][0];
    if (a.is_object() && a.contains("point") && a["point"].is_array()) return static_cast<int>(a["point"].size());
  }
  if (type == "sum" && j.contains("parts") && j["parts"].is_array())
    for (const auto& p : j["parts"])
      if (auto d = implied_dim(p)) return d;
  return std::nullopt;
}

inline measures::MeasureSpec measure_from_json(const json& j, int n, const std::string& where = "measure") {
  require_object(j, where);
  if (!j.contains("type") || !j["type"].is_string()) throw DomainError(where + ": missing string 'type'");
  const auto type = j["type"].get<std::string>();
  if (type == "radial_power") {
    check_keys(j, {"type", "theta", "coef"}, where);
    double coef = 1.0;
    read_opt(j, "coef", coef, where);
    return measures::MeasureSpec::radial_power(n, get_number(j, "theta", where), coef);
  }
  if (type == "weighted_density") {
    check_keys(j, {"type", "theta", "h", "coef"}, where);
    if (!j.contains("h") || !j["h"].is_string()) throw DomainError(where + ": missing string 'h'");
    double coef = 1.0;
    read_opt(j, "coef", coef, where);
    return measures::MeasureSpec::weighted_density(n, measures::parse_builtin(j["h"].get<std::string>()),
                                                   get_number(j, "theta", where), coef);
  }
  if (type == "atomic") {
    check_keys(j, {"type", "atoms"}, where);
    if (!j.contains("atoms") || !j["atoms"].is_array()) throw DomainError(where + ": missing array 'atoms'");
    std::vector<measures::Atom> atoms;
    for (std::size_t i = 0; i < j["atoms"].size(); ++i) {
      const auto& a = j["atoms"][i];
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      check_keys(a, {"point", "mass"}, w);
      if (!a.contains("point")) throw DomainError(w + ": missing 'point'");
      atoms.push_back({point_from_json(a["point"], w + ".point"), get_number(a, "mass", w)});
    }
    if (atoms.empty()) return measures::MeasureSpec::zero(n);
    return measures::MeasureSpec::atomic(n, std::move(atoms));
  }
  if (type == "sum") {
    check_keys(j, {"type", "parts"}, where);
    if (!j.contains("parts") || !j["parts"].is_array()) throw DomainError(where + ": missing array 'parts'");
    std::vector<measures::MeasureSpec> parts;
    for (std::size_t i = 0; i < j["parts"].size(); ++i)
      parts.push_back(measure_from_json(j["parts"][i], n, where + ".parts[" + std::to_string(i) + "]"));
    return measures::MeasureSpec::sum(n, std::move(parts));
  }
  throw DomainError(where + ": unknown measure type '" + type + "'");
}

/// "radial_power:<theta>", "weighted_density:<h>:<theta>" or "zero".
inline std::optional<json> measure_shorthand(const std::string& s) {
  auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw DomainError("measure '" + s + "': bad number '" + t + "'");
    return v;
  };
  if (s == "zero") return json{{"type", "sum"}, {"parts", json::array()}};
  if (s.rfind("radial_power:", 0) == 0) return json{{"type", "radial_power"}, {"theta", number(s.substr(13))}};
  if (s.rfind("weighted_density:", 0) == 0) {
    const auto rest = s.substr(17);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw DomainError("measure '" + s + "': expected weighted_density:<h>:<theta>");
    return json{{"type", "weighted_density"}, {"h", rest.substr(0, colon)}, {"theta", number(rest.substr(colon + 1))}};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Configs.

inline json to_json(const quad::QuadConfig& c) {
  return {{"radial_nodes", c.radial_nodes},         {"angular_nodes", c.angular_nodes}, {"mc_samples", c.mc_samples},
          {"seed", c.seed},                         {"boundary_grading", c.boundary_grading},
          {"outer_cutoff", c.outer_cutoff}};
}

inline quad::QuadConfig quad_config_from_json(const json& j, const std::string& where = "quad") {
  check_keys(j, {"radial_nodes", "angular_nodes", "mc_samples", "seed", "boundary_grading", "outer_cutoff"}, where);
  quad::QuadConfig c;
  read_opt(j, "radial_nodes", c.radial_nodes, where);
  read_opt(j, "angular_nodes", c.angular_nodes, where);
  read_opt(j, "mc_samples", c.mc_samples, where);
  read_opt(j, "seed", c.seed, where);
  read_opt(j, "boundary_grading", c.boundary_grading, where);
  read_opt(j, "outer_cutoff", c.outer_cutoff, where);
  c.validate();
  return c;
}

inline json to_json(const carleson::TrendConfig& t) {
  return {{"shells", t.shells},
          {"series_shells", t.series_shells},
          {"rays", t.rays},
          {"slope_min", t.slope_min},
          {"median_factor", t.median_factor},
          {"summable_slope", t.summable_slope},
          {"vanish_rel", t.vanish_rel},
          {"vanish_slope", t.vanish_slope},
          {"route_bracket", t.route_bracket},
          {"min_shells", t.min_shells}};
}

inline carleson::TrendConfig trend_config_from_json(const json& j, const std::string& where = "trend") {
  check_keys(j,
             {"shells", "series_shells", "rays", "slope_min", "median_factor", "summable_slope", "vanish_rel",
              "vanish_slope", "route_bracket", "min_shells"},
             where);
  carleson::TrendConfig t;
  read_opt(j, "shells", t.shells, where);
  read_opt(j, "series_shells", t.series_shells, where);
  read_opt(j, "rays", t.rays, where);
  read_opt(j, "slope_min", t.slope_min, where);
  read_opt(j, "median_factor", t.median_factor, where);
  read_opt(j, "summable_slope", t.summable_slope, where);
  read_opt(j, "vanish_rel", t.vanish_rel, where);
  read_opt(j, "vanish_slope", t.vanish_slope, where);
  read_opt(j, "route_bracket", t.route_bracket, where);
  read_opt(j, "min_shells", t.min_shells, where);
  if (t.shells < 2 || t.series_shells < 1 || t.rays < 1 || t.min_shells < 2)
    throw DomainError(where + ": shell and ray counts too small");
  return t;
}

inline json to_json(const carleson::Tuple& t) { return {{"p", t.p}, {"q", t.q}, {"alpha", t.alpha}}; }

inline carleson::Tuple tuple_from_json(const json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number())
      throw DomainError(where + ": expected [p, q, alpha]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  }
  check_keys(j, {"p", "q", "alpha"}, where);
  return {get_number(j, "p", where), get_number(j, "q", where), get_number(j, "alpha", where)};
}

// ---------------------------------------------------------------------------
// Lattices.

inline json to_json(const lattice::Lattice& lat) {
  json pts = json::array();
  for (const auto& p : lat.points) pts.push_back(to_json(p));
  return {{"r", lat.r},
          {"dim", lat.dim},
          {"truncation", lat.truncation},
          {"overlap_bound", lat.overlap_bound},
          {"points", pts}};
}

inline lattice::Lattice lattice_from_json(const json& j, const std::string& where = "lattice") {
  check_keys(j, {"r", "dim", "truncation", "overlap_bound", "points"}, where);
  lattice::Lattice lat;
  lat.r = get_number(j, "r", where);
  read_opt(j, "dim", lat.dim, where);
  read_opt(j, "truncation", lat.truncation, where);
  read_opt(j, "overlap_bound", lat.overlap_bound, where);
  if (!j.contains("points") || !j["points"].is_array()) throw DomainError(where + ": missing array 'points'");
  for (std::size_t i = 0; i < j["points"].size(); ++i) {
    lat.points.push_back(point_from_json(j["points"][i], where + ".points[" + std::to_string(i) + "]"));
    if (lat.points.back().dim() != lat.dim) throw DomainError(where + ": point dimension mismatch");
  }
  return lat;
}

inline json to_json(const lattice::LatticeReport& r) {
  return {{"separation_ok", r.separation_ok},
          {"min_separation", r.min_separation},
          {"covering_misses", r.covering_misses},
          {"max_overlap", r.max_overlap}};
}

// ---------------------------------------------------------------------------
// Reports.

inline json to_json(const carleson::DiagnosticsReport& r) {
  return {{"route", r.route},   {"dim", r.dim},       {"lambda", r.lambda},
          {"gamma", r.gamma},   {"parameter", r.parameter}, {"radii", r.radii},
          {"values", r.values}, {"slope", r.slope},   {"verdict", carleson::to_string(r.verdict)},
          {"norm_estimate", r.norm_estimate}, {"warnings", r.warnings}};
}

inline json to_json(const carleson::NormReport& r) {
  json routes = json::array();
  for (const auto& d : r.routes) routes.push_back(to_json(d));
  return {{"value", r.value},
          {"headline_route", r.headline_route},
          {"verdict", carleson::to_string(r.verdict)},
          {"direct_lower_bound", r.direct_lower_bound},
          {"route_ratio", r.route_ratio},
          {"routes", routes}};
}

inline json to_json(const carleson::VanishingReport& r) {
  return {{"route", r.route}, {"radii", r.radii}, {"values", r.values}, {"slope", r.slope}, {"vanishing", r.vanishing}};
}

inline json to_json(const carleson::KeyLemmaReport& r) {
  return {{"lambda", r.lambda},   {"gamma", r.gamma},
          {"k_est", r.k_est},     {"argmax", r.argmax},
          {"carleson_norm", r.carleson_norm}, {"ratio", r.ratio}};
}

inline json to_json(const carleson::ProductReport& r) {
  return {{"lambda", r.lambda},     {"gamma", r.gamma},         {"c_est", r.c_est}, {"argmax", r.argmax},
          {"evaluated", r.evaluated}, {"carleson_norm", r.carleson_norm}, {"ratio", r.ratio}};
}

inline json to_json(const operators::FamilyTrend& f) {
  return {{"radii", f.radii}, {"values", f.values}, {"best", f.best}, {"maximizer", f.maximizer}};
}

inline json to_json(const operators::ToeplitzReport& r) {
  return {{"lambda", r.lambda},
          {"gamma", r.gamma},
          {"carleson", to_json(r.carleson)},
          {"estimate",
           {{"value", r.estimate.value},
            {"maximizer", r.estimate.maximizer},
            {"evaluated", r.estimate.evaluated},
            {"seed", r.estimate.seed}}},
          {"family", to_json(r.family)},
          {"slope", r.slope},
          {"operator_verdict", carleson::to_string(r.operator_verdict)},
          {"ratio", r.ratio},
          {"consistent", r.consistent}};
}

inline json to_json(const operators::CompactnessReport& r) {
  return {{"radii", r.radii},     {"values", r.values},
          {"slope", r.slope},     {"compact", r.compact},
          {"vanishing", to_json(r.vanishing)}, {"agrees", r.agrees}};
}

inline json to_json(const operators::Side& s) {
  return {{"value", s.value}, {"values", s.values}, {"slope", s.slope}, {"bounded", s.bounded}, {"compact", s.compact}};
}

inline json to_json(const operators::Section5Params& p) {
  return {{"t", p.t}, {"alpha", p.alpha}, {"p", p.p}, {"beta", p.beta}, {"s", p.s}};
}

inline json to_json(const operators::OperatorReport& r) {
  return {{"op", r.op},
          {"symbol", r.symbol},
          {"regime", r.regime},
          {"params", to_json(r.params)},
          {"radii", r.radii},
          {"operator_side", to_json(r.operator_side)},
          {"symbol_side", to_json(r.symbol_side)},
          {"maximizer", r.maximizer},
          {"ratio", r.ratio},
          {"consistent", r.consistent}};
}

/// {"report_version": 1, "command", "config", "result"}.
inline json envelope(const std::string& command, json config, json result) {
  return {{"report_version", kReportVersion}, {"command", command}, {"config", std::move(config)},
          {"result", std::move(result)}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSV: one row per probe radius.

struct Series {
  std::vector<double> radii;
  std::vector<double> values;
  double slope = 0.0;
  std::string verdict;
};

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const Series& s) {
  if (s.radii.size() != s.values.size()) throw DomainError("to_csv: radii and values differ in length");
  std::string out = "probe_id,radius,value,slope,verdict\n";
  for (std::size_t i = 0; i < s.radii.size(); ++i)
    out += std::to_string(i) + "," + csv_number(s.radii[i]) + "," + csv_number(s.values[i]) + "," +
           csv_number(s.slope) + "," + s.verdict + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Verify summaries. No timings, so repeated runs compare byte for byte.

inline json to_json(const verify::SuiteResult& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"criterion", c.criterion}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"suite", r.suite}, {"pass", r.pass()}, {"checks", checks}};
}

inline json verify_summary(const std::string& requested, const std::vector<verify::SuiteResult>& results,
                           const verify::Settings& s) {
  bool pass = true;
  json suites = json::array();
  for (const auto& r : results) {
    pass = pass && r.pass();
    suites.push_back(to_json(r));
  }
  return {{"report_version", kReportVersion},
          {"command", "verify"},
          {"suite", requested},
          {"config", {{"quad", to_json(s.cfg)}, {"trend", to_json(s.tc)}, {"seed", s.seed}}},
          {"pass", pass},
          {"suites", suites}};
}

// ---------------------------------------------------------------------------

/// Writes to a sibling temporary, then renames over `path`.
inline void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw DomainError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DomainError("cannot replace '" + path + "': " + ec.message());
  }
}

}  // namespace carleson_lab::io
