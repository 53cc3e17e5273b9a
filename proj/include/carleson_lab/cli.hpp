#pragma once

// Command-line front end. Exit codes: 0 carleson/consistent, 1 negative,
// 2 inconclusive, 3 input error. Needs vendor/CLI11.hpp and vendor/json.hpp.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "carleson_lab/serialize.hpp"

namespace carleson_lab::cli {

using io::json;

enum Exit : int { kOk = 0, kNegative = 1, kInconclusive = 2, kInputError = 3 };

inline int exit_for(carleson::Verdict v) {
  switch (v) {
    case carleson::Verdict::carleson: return kOk;
    case carleson::Verdict::not_carleson: return kNegative;
    case carleson::Verdict::inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

/// Everything a subcommand reads. Loaded from --config, then overridden by flags.
struct RunConfig {
  std::string command;
  std::optional<json> measure;  // resolved measure document
  std::optional<int> dim;
  std::optional<double> lambda, gamma;
  std::vector<carleson::Tuple> tuples;
  quad::QuadConfig quad;
  carleson::TrendConfig trend;
  double lattice_r = 1.0;
  std::optional<double> lattice_truncation;  // default: that of carleson::default_lattice
  std::uint64_t seed = 20140101;
  std::string format = "json";
  std::string output;
  std::optional<int> threads;
  std::string route = "auto";  // classify: auto, ball, berezin, lattice
  double r = 0.5;              // ball route radius
  std::optional<double> t;     // berezin parameter
  double beta = 1.0, p1 = 2.0, alpha1 = 0.0, p2 = 2.0, alpha2 = 0.0;
  carleson::KeyLemmaParams keylemma;
  operators::Section5Params section5;
  std::string symbol = "monomial:1";
  std::string op = "cesaro";
  int trials = 32;
  int probes = 10000;
  std::optional<json> z, w;
  std::string suite;
};

// ---------------------------------------------------------------------------
// Input resolution.

/// Shorthand ("radial_power:0"), or a path to a JSON file.
inline json resolve_measure(const std::string& arg) {
  if (auto j = io::measure_shorthand(arg)) return *j;
  return io::load_json(arg);
}

/// Comma-separated reals.
inline std::vector<double> numbers(const std::string& s, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    try {
      v.push_back(std::stod(tok, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw DomainError(what + ": bad number '" + tok + "'");
  }
  return v;
}

/// "re,im[,re,im]" to [[re, im], ...].
inline json point_arg(const std::string& s, const std::string& what) {
  const auto v = numbers(s, what);
  if (v.empty() || v.size() % 2 != 0) throw DomainError(what + ": expected re,im pairs");
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back({v[i], v[i + 1]});
  return out;
}

inline carleson::Tuple tuple_arg(const std::string& s) {
  const auto v = numbers(s, "--tuple");
  if (v.size() != 3) throw DomainError("--tuple: expected p,q,alpha");
  return {v[0], v[1], v[2]};
}

inline void apply_config_file(RunConfig& rc, const json& j, const std::string& path) {
  io::check_keys(j,
                 {"command", "measure", "dim", "lambda", "gamma", "tuples", "quad", "trend", "lattice", "seed",
                  "format", "output", "threads", "route", "r", "t", "beta", "p1", "alpha1", "p2", "alpha2",
                  "keylemma", "section5", "symbol", "operator", "trials", "probes", "z", "w", "suite"},
                 path);
  io::read_opt(j, "command", rc.command, path);
  if (j.contains("measure")) {
    if (j["measure"].is_string()) {
      // File paths are relative to the config file.
      const auto arg = j["measure"].get<std::string>();
      const std::filesystem::path p(arg);
      const bool relative_file = !io::measure_shorthand(arg) && p.is_relative();
      rc.measure = resolve_measure(relative_file ? (std::filesystem::path(path).parent_path() / p).string() : arg);
    } else {
      rc.measure = j["measure"];
    }
  }
  if (j.contains("dim")) {
    int d = 0;
    io::read_opt(j, "dim", d, path);
    rc.dim = d;
  }
  if (j.contains("lambda")) rc.lambda = io::get_number(j, "lambda", path);
  if (j.contains("gamma")) rc.gamma = io::get_number(j, "gamma", path);
  if (j.contains("tuples")) {
    if (!j["tuples"].is_array()) throw DomainError(path + ".tuples: expected an array");
    for (std::size_t i = 0; i < j["tuples"].size(); ++i)
      rc.tuples.push_back(io::tuple_from_json(j["tuples"][i], path + ".tuples[" + std::to_string(i) + "]"));
  }
  if (j.contains("quad")) rc.quad = io::quad_config_from_json(j["quad"], path + ".quad");
  if (j.contains("trend")) rc.trend = io::trend_config_from_json(j["trend"], path + ".trend");
  if (j.contains("lattice")) {
    const auto& l = j["lattice"];
    io::check_keys(l, {"r", "truncation"}, path + ".lattice");
    io::read_opt(l, "r", rc.lattice_r, path + ".lattice");
    if (l.contains("truncation")) rc.lattice_truncation = io::get_number(l, "truncation", path + ".lattice");
  }
  io::read_opt(j, "seed", rc.seed, path);
  io::read_opt(j, "format", rc.format, path);
  io::read_opt(j, "output", rc.output, path);
  if (j.contains("threads")) {
    int th = 0;
    io::read_opt(j, "threads", th, path);
    rc.threads = th;
  }
  io::read_opt(j, "route", rc.route, path);
  io::read_opt(j, "r", rc.r, path);
  if (j.contains("t")) rc.t = io::get_number(j, "t", path);
  io::read_opt(j, "beta", rc.beta, path);
  io::read_opt(j, "p1", rc.p1, path);
  io::read_opt(j, "alpha1", rc.alpha1, path);
  io::read_opt(j, "p2", rc.p2, path);
  io::read_opt(j, "alpha2", rc.alpha2, path);
  if (j.contains("keylemma")) {
    const auto& k = j["keylemma"];
    const std::string w = path + ".keylemma";
    io::check_keys(k, {"p", "q", "r", "alpha1", "alpha2", "s"}, w);
    io::read_opt(k, "p", rc.keylemma.p, w);
    io::read_opt(k, "q", rc.keylemma.q, w);
    io::read_opt(k, "r", rc.keylemma.r, w);
    io::read_opt(k, "alpha1", rc.keylemma.alpha1, w);
    io::read_opt(k, "alpha2", rc.keylemma.alpha2, w);
    io::read_opt(k, "s", rc.keylemma.s, w);
  }
  if (j.contains("section5")) {
    const auto& k = j["section5"];
    const std::string w = path + ".section5";
    io::check_keys(k, {"t", "alpha", "p", "beta", "s"}, w);
    io::read_opt(k, "t", rc.section5.t, w);
    io::read_opt(k, "alpha", rc.section5.alpha, w);
    io::read_opt(k, "p", rc.section5.p, w);
    io::read_opt(k, "beta", rc.section5.beta, w);
    io::read_opt(k, "s", rc.section5.s, w);
  }
  io::read_opt(j, "symbol", rc.symbol, path);
  io::read_opt(j, "operator", rc.op, path);
  io::read_opt(j, "trials", rc.trials, path);
  io::read_opt(j, "probes", rc.probes, path);
  if (j.contains("z")) rc.z = j["z"];
  if (j.contains("w")) rc.w = j["w"];
  io::read_opt(j, "suite", rc.suite, path);
}

inline int dimension(const RunConfig& rc) {
  const auto implied = rc.measure ? io::implied_dim(*rc.measure) : std::nullopt;
  if (rc.dim && implied && *rc.dim != *implied)
    throw DomainError("--dim " + std::to_string(*rc.dim) + " conflicts with the measure's atoms (n = " +
                      std::to_string(*implied) + ")");
  const int n = rc.dim.value_or(implied.value_or(1));
  Point::check_dim(n);
  return n;
}

inline measures::MeasureSpec measure_of(const RunConfig& rc) {
  if (!rc.measure) throw DomainError(rc.command + ": --measure is required");
  return io::measure_from_json(*rc.measure, dimension(rc));
}

inline carleson::CarlesonParams params_of(const RunConfig& rc) {
  if (!rc.tuples.empty()) {
    if (rc.lambda || rc.gamma) throw DomainError("give either --tuple or --lambda/--gamma, not both");
    return carleson::derive_params(rc.tuples);
  }
  const double lambda = rc.lambda.value_or(1.0), gamma = rc.gamma.value_or(0.0);
  if (!(lambda > 0.0)) throw DomainError("lambda > 0 fails");
  if (!(gamma > -1.0)) throw DomainError("gamma > -1 fails");
  return carleson::params_from(lambda, gamma);
}

/// monomial:k, constant:c, g_log, power_growth:sigma, kernel:a:sigma (a real, on the first axis).
inline spaces::AnalyticFn symbol_of(const std::string& s, int n) {
  auto after = [&](const std::string& prefix) { return s.substr(prefix.size()); };
  auto num = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw DomainError("--symbol '" + s + "': bad number '" + t + "'");
    return v;
  };
  if (s == "g_log") return spaces::g_log(n);
  if (s.rfind("monomial:", 0) == 0) {
    const double k = num(after("monomial:"));
    if (k != std::floor(k)) throw DomainError("--symbol '" + s + "': degree must be an integer");
    return spaces::monomial(n, static_cast<int>(k));
  }
  if (s.rfind("constant:", 0) == 0) return spaces::constant(n, num(after("constant:")));
  if (s.rfind("power_growth:", 0) == 0) return spaces::power_growth(n, num(after("power_growth:")));
  if (s.rfind("kernel:", 0) == 0) {
    const auto rest = after("kernel:");
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw DomainError("--symbol '" + s + "': expected kernel:<a>:<sigma>");
    std::array<cplx, kMaxDim> c{cplx(num(rest.substr(0, colon)), 0.0)};
    return spaces::kernel_test_function(Point::from_coords(std::span<const cplx>(c.data(), static_cast<std::size_t>(n))),
                                        num(rest.substr(colon + 1)));
  }
  throw DomainError("unknown --symbol '" + s + "' (monomial:k, constant:c, g_log, power_growth:s, kernel:a:s)");
}

inline operators::OperatorKind operator_of(const std::string& s) {
  if (s == "cesaro" || s == "J_g") return operators::OperatorKind::cesaro;
  if (s == "companion" || s == "I_g") return operators::OperatorKind::companion;
  if (s == "multiplier" || s == "M_g") return operators::OperatorKind::multiplier;
  throw DomainError("unknown --operator '" + s + "' (cesaro, companion, multiplier)");
}

// ---------------------------------------------------------------------------
// Output.

struct Outcome {
  int code = kOk;
  json result;
  std::optional<io::Series> series;  // CSV rows, when the command has a radial series
};

inline json config_echo(const RunConfig& rc, int n) {
  json c{{"dim", n}, {"quad", io::to_json(rc.quad)}, {"trend", io::to_json(rc.trend)}, {"seed", rc.seed}};
  if (rc.measure) c["measure"] = *rc.measure;
  return c;
}

inline void emit(const RunConfig& rc, const json& config, const Outcome& o, std::ostream& out) {
  std::string text;
  if (rc.format == "csv") {
    if (!o.series) throw DomainError(rc.command + ": CSV output is not available; use --format json");
    text = io::to_csv(*o.series);
  } else {
    text = io::dump(io::envelope(rc.command, config, o.result));
  }
  if (rc.output.empty()) {
    out << text;
  } else {
    io::write_atomic(rc.output, text);
  }
}

// ---------------------------------------------------------------------------
// Commands.

inline Outcome cmd_geometry(const RunConfig& rc, int n) {
  if (!rc.z || !rc.w) throw DomainError("geometry: --z and --w are required");
  const Point z = io::point_from_json(*rc.z, "z"), w = io::point_from_json(*rc.w, "w");
  if (z.dim() != n || w.dim() != n) throw DomainError("geometry: points must have dimension " + std::to_string(n));
  const Point pw = geometry::mobius(z, w);
  const Point back = geometry::mobius(z, pw);
  double inv = 0.0;
  for (int i = 0; i < n; ++i) inv = std::max(inv, std::abs(back[i] - w[i]));
  const double closed = (1.0 - z.norm2()) * (1.0 - w.norm2()) / std::norm(1.0 - inner(w, z));
  Outcome o;
  o.result = {{"mobius", io::to_json(pw)},
              {"pseudo_hyperbolic", geometry::pseudo_hyperbolic(z, w)},
              {"bergman_distance", geometry::bergman_dist(z, w)},
              {"involution_residual", inv},
              {"identity_residual", std::abs(geometry::one_minus_norm2_mobius(z, w) - closed)}};
  return o;
}

inline double truncation_of(const RunConfig& rc, int n) {
  return rc.lattice_truncation.value_or(std::ldexp(1.0, n == 1 ? -rc.trend.series_shells : -std::min(rc.trend.series_shells, 4)));
}

inline lattice::Lattice lattice_of(const RunConfig& rc, int n) {
  return lattice::build_lattice(rc.lattice_r, n, truncation_of(rc, n));
}

inline Outcome cmd_lattice(const RunConfig& rc, int n) {
  const auto lat = lattice_of(rc, n);
  const auto rep = lattice::verify_lattice(lat, rc.probes, rc.seed);
  Outcome o;
  o.code = rep.separation_ok && rep.covering_misses == 0 && rep.max_overlap <= lat.overlap_bound ? kOk : kNegative;
  o.result = {{"lattice", io::to_json(lat)}, {"report", io::to_json(rep)}, {"size", lat.points.size()}};
  return o;
}

inline io::Series series_of(const carleson::DiagnosticsReport& d) {
  return {d.radii, d.values, d.slope, carleson::to_string(d.verdict)};
}

inline Outcome cmd_classify(const RunConfig& rc, const measures::MeasureSpec& mu, const carleson::CarlesonParams& P) {
  carleson::DiagnosticsReport d;
  if (rc.route == "ball") {
    d = carleson::classify_ball(mu, P, rc.r, rc.quad, rc.trend);
  } else if (rc.route == "berezin") {
    d = carleson::classify_berezin(mu, P, rc.t, rc.quad, rc.trend);
  } else if (rc.route == "lattice") {
    d = carleson::classify_lattice(mu, P, lattice_of(rc, mu.dim()), rc.quad, rc.trend);
  } else if (rc.route == "auto") {
    if (P.lambda >= 1.0) {
      d = carleson::classify_ball(mu, P, rc.r, rc.quad, rc.trend);
    } else {
      d = carleson::classify_lattice(mu, P, lattice_of(rc, mu.dim()), rc.quad, rc.trend);
    }
  } else {
    throw DomainError("unknown --route '" + rc.route + "' (auto, ball, berezin, lattice)");
  }
  return {exit_for(d.verdict), io::to_json(d), series_of(d)};
}

inline carleson::NormOptions norm_options(const RunConfig& rc) {
  carleson::NormOptions opt;
  opt.r = rc.r;
  opt.berezin_param = rc.t;
  return opt;
}

inline Outcome cmd_norm(const RunConfig& rc, const measures::MeasureSpec& mu, const carleson::CarlesonParams& P) {
  const auto rep = carleson::carleson_norm(mu, P, rc.quad, rc.trend, norm_options(rc));
  Outcome o{exit_for(rep.verdict), io::to_json(rep), std::nullopt};
  for (const auto& d : rep.routes)
    if (d.route == rep.headline_route) o.series = series_of(d);
  return o;
}

inline Outcome cmd_vanishing(const RunConfig& rc, const measures::MeasureSpec& mu, const carleson::CarlesonParams& P) {
  const auto rep = carleson::vanishing_probe(mu, P, rc.t, rc.quad, rc.trend, norm_options(rc));
  return {rep.vanishing ? kOk : kNegative, io::to_json(rep),
          io::Series{rep.radii, rep.values, rep.slope, rep.vanishing ? "vanishing" : "not_vanishing"}};
}

inline Outcome cmd_toeplitz(const RunConfig& rc, const measures::MeasureSpec& mu) {
  const operators::ToeplitzSpec spec{mu, rc.beta, rc.p1, rc.alpha1, rc.p2, rc.alpha2};
  if (const auto v = operators::toeplitz_violation(spec)) throw DomainError("hypothesis violated: " + *v);
  operators::ToeplitzOptions opt;
  opt.seed = rc.seed;
  opt.norm = norm_options(rc);
  const auto rep = operators::toeplitz_equivalence_check(spec, rc.quad, rc.trend, opt);
  const auto cmp = operators::toeplitz_compactness_probe(spec, rc.quad, rc.trend, opt.norm, &rep.family);
  Outcome o;
  o.result = io::to_json(rep);
  o.result["compactness"] = io::to_json(cmp);
  o.result["spec"] = {{"beta", rc.beta}, {"p1", rc.p1}, {"alpha1", rc.alpha1}, {"p2", rc.p2}, {"alpha2", rc.alpha2}};
  o.code = !rep.consistent ? kNegative
           : rep.operator_verdict == carleson::Verdict::inconclusive ? kInconclusive
                                                                     : kOk;
  o.series = io::Series{rep.family.radii, rep.family.values, rep.slope, carleson::to_string(rep.operator_verdict)};
  return o;
}

/// C_est / ||mu|| in [1e-2, 1e2] for a finite norm; C_est not small against the norm proxy otherwise.
inline Outcome cmd_product(const RunConfig& rc, const measures::MeasureSpec& mu) {
  if (rc.tuples.empty()) throw DomainError("product: at least one --tuple p,q,alpha is required");
  if (rc.trials < 1) throw DomainError("product: trials must be >= 1");
  const auto P = carleson::derive_params(rc.tuples);
  auto nopt = norm_options(rc);
  nopt.lower_bound = false;
  const auto norm = carleson::carleson_norm(mu, P, rc.quad, rc.trend, nopt);
  const auto rep = carleson::product_inequality_check(mu, rc.tuples, rc.trials, rc.seed, rc.quad, rc.trend, norm.value);
  Outcome o;
  o.result = io::to_json(rep);
  o.result["norm_verdict"] = carleson::to_string(norm.verdict);
  json tuples = json::array();
  for (const auto& t : rc.tuples) tuples.push_back(io::to_json(t));
  o.result["tuples"] = tuples;
  if (norm.verdict == carleson::Verdict::inconclusive) {
    o.code = kInconclusive;
  } else if (norm.verdict == carleson::Verdict::carleson) {
    o.code = rep.ratio >= 1e-2 && rep.ratio <= 1e2 ? kOk : kNegative;
  } else {
    o.code = rep.ratio >= 1e-2 ? kOk : kNegative;
  }
  return o;
}

/// K_est <= 1e2 ||mu|| when mu is Carleson for the induced (lambda, gamma).
inline Outcome cmd_keylemma(const RunConfig& rc, const measures::MeasureSpec& mu) {
  const auto P = carleson::key_lemma_params(rc.keylemma);
  const auto rep = carleson::key_lemma_check(mu, rc.keylemma, spaces::function_battery(mu.dim()), rc.quad, rc.trend);
  auto nopt = norm_options(rc);
  nopt.lower_bound = false;
  const auto verdict = carleson::carleson_norm(mu, P, rc.quad, rc.trend, nopt).verdict;
  Outcome o;
  o.result = io::to_json(rep);
  o.result["norm_verdict"] = carleson::to_string(verdict);
  const auto& k = rc.keylemma;
  o.result["params"] = {{"p", k.p}, {"q", k.q}, {"r", k.r}, {"alpha1", k.alpha1}, {"alpha2", k.alpha2}, {"s", k.s}};
  o.code = verdict == carleson::Verdict::carleson ? (rep.ratio <= 1e2 ? kOk : kNegative) : exit_for(verdict);
  return o;
}

inline Outcome cmd_cesaro(const RunConfig& rc, int n) {
  const auto kind = operator_of(rc.op);
  if (const auto v = operators::section5_violation(n, kind, rc.section5)) throw DomainError("hypothesis violated: " + *v);
  const auto g = symbol_of(rc.symbol, n);
  const auto rep = operators::operator_check(kind, g, rc.section5, rc.quad, rc.trend);
  const auto& O = rep.operator_side;
  return {rep.consistent ? kOk : kNegative, io::to_json(rep),
          io::Series{rep.radii, O.values, O.slope, O.bounded ? (O.compact ? "compact" : "bounded") : "unbounded"}};
}

inline int cmd_verify(const RunConfig& rc, std::ostream& out) {
  const auto& names = verify::suite_names();
  if (rc.suite != "all" && std::find(names.begin(), names.end(), rc.suite) == names.end())
    throw DomainError("unknown suite '" + rc.suite + "'");
  if (rc.format != "json") throw DomainError("verify: only --format json is available");
  const verify::Settings s{rc.quad, rc.trend, rc.seed};
  const auto results = verify::run(rc.suite, s);
  bool pass = true;
  for (const auto& r : results) {
    out << "== " << r.suite << (r.pass() ? " PASS" : " FAIL") << "\n";
    for (const auto& c : r.checks)
      out << "  [" << c.criterion << "] " << (c.pass ? "ok   " : "FAIL ") << c.name << ": " << c.detail << "\n";
    pass = pass && r.pass();
  }
  const auto text = io::dump(io::verify_summary(rc.suite, results, s));
  if (rc.output.empty()) {
    out << text;
  } else {
    io::write_atomic(rc.output, text);
  }
  out.flush();
  return pass ? kOk : kNegative;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Carleson measure diagnostics on the unit ball of C^n"};
  app.require_subcommand(1);

  std::string config_path, measure_arg, z_arg, w_arg;
  std::vector<std::string> tuple_args;
  RunConfig flags;
  std::optional<int> dim, threads, trials, probes;
  std::optional<double> lambda, gamma, lat_r, lat_trunc, r, t, beta, p1, alpha1, p2, alpha2;
  std::optional<double> kp, kq, kr, ka1, ka2, ks, st, salpha, sp, sbeta, ss;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format, output, route, symbol, op;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--dim", dim, "complex dimension n (1 or 2)");
    sub->add_option("--seed", seed, "seed for randomized probes");
    sub->add_option("--threads", threads, "worker threads (default: CARLESON_LAB_THREADS, else 1)");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", output, "report path (written atomically); stdout when absent");
  };
  auto measure_opts = [&](CLI::App* sub) {
    sub->add_option("--measure", measure_arg, "radial_power:<theta>, weighted_density:<h>:<theta>, zero, or a JSON file");
  };
  auto params_opts = [&](CLI::App* sub) {
    sub->add_option("--lambda", lambda, "lambda > 0");
    sub->add_option("--gamma", gamma, "gamma > -1");
    sub->add_option("--tuple", tuple_args, "p,q,alpha (repeatable); derives lambda and gamma");
  };
  auto route_opts = [&](CLI::App* sub) {
    sub->add_option("--r", r, "ball route radius");
    sub->add_option("--t", t, "Berezin parameter");
  };

  auto* geo = app.add_subcommand("geometry", "Mobius map, pseudo-hyperbolic and Bergman distance");
  common(geo);
  geo->add_option("--z", z_arg, "re,im[,re,im]")->required();
  geo->add_option("--w", w_arg, "re,im[,re,im]")->required();

  auto* lat = app.add_subcommand("lattice", "build and check an r-lattice");
  common(lat);
  lat->add_option("--radius", lat_r, "lattice radius r");
  lat->add_option("--truncation", lat_trunc, "stop at 1 - |a| < truncation");
  lat->add_option("--probes", probes, "covering probes");

  auto* cls = app.add_subcommand("classify", "(lambda, gamma)-Carleson verdict on one route");
  common(cls), measure_opts(cls), params_opts(cls), route_opts(cls);
  cls->add_option("--route", route, "auto, ball, berezin or lattice");
  cls->add_option("--lattice-radius", lat_r, "lattice route radius");
  cls->add_option("--truncation", lat_trunc, "lattice route truncation");

  auto* nrm = app.add_subcommand("norm", "Carleson norm estimate over all routes");
  common(nrm), measure_opts(nrm), params_opts(nrm), route_opts(nrm);

  auto* van = app.add_subcommand("vanishing", "vanishing Carleson probe");
  common(van), measure_opts(van), params_opts(van), route_opts(van);

  auto* toe = app.add_subcommand("toeplitz", "Toeplitz boundedness against the Carleson condition");
  common(toe), measure_opts(toe), route_opts(toe);
  toe->add_option("--beta", beta, "kernel weight beta");
  toe->add_option("--p1", p1);
  toe->add_option("--alpha1", alpha1);
  toe->add_option("--p2", p2);
  toe->add_option("--alpha2", alpha2);

  auto* prod = app.add_subcommand("product", "product inequality constant against the Carleson norm");
  common(prod), measure_opts(prod), route_opts(prod);
  prod->add_option("--tuple", tuple_args, "p,q,alpha (repeatable)");
  prod->add_option("--trials", trials, "sampled kernel tuples");

  auto* key = app.add_subcommand("keylemma", "integral operator bound against the Carleson norm");
  common(key), measure_opts(key), route_opts(key);
  key->add_option("--p", kp);
  key->add_option("--q", kq);
  key->add_option("--rexp", kr, "power r of |f|");
  key->add_option("--alpha1", ka1);
  key->add_option("--alpha2", ka2);
  key->add_option("--s", ks);

  auto* ces = app.add_subcommand("cesaro", "J_g, I_g or M_g from A^t_alpha into F(p, p beta - n - 1, s)");
  common(ces);
  ces->add_option("--operator", op, "cesaro, companion or multiplier");
  ces->add_option("--symbol", symbol, "monomial:k, constant:c, g_log, power_growth:s, kernel:a:s");
  ces->add_option("--t", st);
  ces->add_option("--alpha", salpha);
  ces->add_option("--p", sp);
  ces->add_option("--beta", sbeta);
  ces->add_option("--s", ss);

  auto* ver = app.add_subcommand("verify", "acceptance suites");
  common(ver);
  std::string suite;
  ver->add_option("suite", suite, "geometry, quadrature, lattice, theoremA, theoremB, theorem11, toeplitz, "
                                  "vanishing, section5 or all")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  RunConfig rc;
  try {
    if (!config_path.empty()) {
      apply_config_file(rc, io::load_json(config_path), config_path);
      if (!rc.command.empty() && rc.command != sub->get_name())
        throw DomainError(config_path + ": command '" + rc.command + "' does not match '" + sub->get_name() + "'");
    }
    rc.command = sub->get_name();
    if (!measure_arg.empty()) rc.measure = resolve_measure(measure_arg);
    if (dim) rc.dim = dim;
    if (lambda) rc.lambda = lambda;
    if (gamma) rc.gamma = gamma;
    if (!tuple_args.empty()) {
      rc.tuples.clear();
      for (const auto& s : tuple_args) rc.tuples.push_back(tuple_arg(s));
    }
    if (seed) rc.seed = *seed;
    if (threads) rc.threads = threads;
    if (format) rc.format = *format;
    if (output) rc.output = *output;
    if (route) rc.route = *route;
    if (r) rc.r = *r;
    if (t) rc.t = t;
    if (lat_r) rc.lattice_r = *lat_r;
    if (lat_trunc) rc.lattice_truncation = lat_trunc;
    if (probes) rc.probes = *probes;
    if (trials) rc.trials = *trials;
    if (beta) rc.beta = *beta;
    if (p1) rc.p1 = *p1;
    if (alpha1) rc.alpha1 = *alpha1;
    if (p2) rc.p2 = *p2;
    if (alpha2) rc.alpha2 = *alpha2;
    if (kp) rc.keylemma.p = *kp;
    if (kq) rc.keylemma.q = *kq;
    if (kr) rc.keylemma.r = *kr;
    if (ka1) rc.keylemma.alpha1 = *ka1;
    if (ka2) rc.keylemma.alpha2 = *ka2;
    if (ks) rc.keylemma.s = *ks;
    if (st) rc.section5.t = *st;
    if (salpha) rc.section5.alpha = *salpha;
    if (sp) rc.section5.p = *sp;
    if (sbeta) rc.section5.beta = *sbeta;
    if (ss) rc.section5.s = *ss;
    if (symbol) rc.symbol = *symbol;
    if (op) rc.op = *op;
    if (!z_arg.empty()) rc.z = point_arg(z_arg, "--z");
    if (!w_arg.empty()) rc.w = point_arg(w_arg, "--w");
    if (!suite.empty()) rc.suite = suite;
    if (rc.format != "json" && rc.format != "csv") throw DomainError("format must be json or csv");
    if (rc.threads) {
      if (*rc.threads < 1) throw DomainError("--threads must be >= 1");
      set_thread_count(*rc.threads);
    }
    rc.quad.validate();

    if (rc.command == "verify") return cmd_verify(rc, out);

    const int n = rc.command == "geometry" && !rc.dim && rc.z ? static_cast<int>(rc.z->size()) : dimension(rc);
    json config = config_echo(rc, n);
    Outcome o;
    if (rc.command == "geometry") {
      o = cmd_geometry(rc, n);
    } else if (rc.command == "lattice") {
      config["lattice"] = {{"r", rc.lattice_r}, {"truncation", truncation_of(rc, n)}, {"probes", rc.probes}};
      o = cmd_lattice(rc, n);
    } else if (rc.command == "cesaro") {
      config["section5"] = io::to_json(rc.section5);
      config["symbol"] = rc.symbol;
      config["operator"] = rc.op;
      o = cmd_cesaro(rc, n);
    } else {
      const auto mu = measure_of(rc);
      config["route"] = {{"r", rc.r}};
      if (rc.t) config["route"]["t"] = *rc.t;
      if (rc.command == "classify" || rc.command == "norm" || rc.command == "vanishing") {
        const auto P = params_of(rc);
        config["lambda"] = P.lambda;
        config["gamma"] = P.gamma;
        if (rc.command == "classify") {
          config["route"]["name"] = rc.route;
          if (rc.route == "lattice" || (rc.route == "auto" && P.lambda < 1.0))
            config["lattice"] = {{"r", rc.lattice_r}, {"truncation", truncation_of(rc, n)}};
          o = cmd_classify(rc, mu, P);
        } else if (rc.command == "norm") {
          o = cmd_norm(rc, mu, P);
        } else {
          o = cmd_vanishing(rc, mu, P);
        }
      } else if (rc.command == "toeplitz") {
        o = cmd_toeplitz(rc, mu);
      } else if (rc.command == "product") {
        config["trials"] = rc.trials;
        o = cmd_product(rc, mu);
      } else {
        o = cmd_keylemma(rc, mu);
      }
    }
    emit(rc, config, o, out);
    return o.code;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kInconclusive;
  }
}

}  // namespace carleson_lab::cli
