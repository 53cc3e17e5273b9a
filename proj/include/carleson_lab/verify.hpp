#pragma once

// Acceptance suites. Each check records the criterion it belongs to; details
// carry only seeded, thread-count-independent numbers so summaries compare byte for byte.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "carleson_lab/carleson.hpp"
#include "carleson_lab/geometry.hpp"
#include "carleson_lab/lattice.hpp"
#include "carleson_lab/measures.hpp"
#include "carleson_lab/operators.hpp"
#include "carleson_lab/quadrature.hpp"
#include "carleson_lab/spaces.hpp"

namespace carleson_lab::verify {

using measures::MeasureSpec;

struct Check {
  int criterion = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct Settings {
  quad::QuadConfig cfg;
  carleson::TrendConfig tc;
  std::uint64_t seed = 20140101;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"geometry", "quadrature", "lattice",  "theoremA", "theoremB",
                                              "theorem11", "toeplitz",  "vanishing", "section5"};
  return names;
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline Point pt(int n, cplx a, cplx b = 0.0) {
  std::array<cplx, 2> c{a, b};
  return Point::from_coords(std::span<const cplx>(c.data(), static_cast<std::size_t>(n)));
}

struct Named {
  std::string name;
  MeasureSpec mu;
  double theta = std::nan("");  // RadialPower exponent; NaN otherwise
};

/// RadialPower(-1 + k/4), k = 1..12, and three atomic sets.
inline std::vector<Named> measure_battery(int n) {
  std::vector<Named> out;
  for (int k = 1; k <= 12; ++k) {
    const double th = -1.0 + 0.25 * k;
    out.push_back({"radial_power(" + num(th) + ")", MeasureSpec::radial_power(n, th), th});
  }
  out.push_back({"atom_half", MeasureSpec::atomic(n, {{pt(n, 0.5), 1.0}})});
  out.push_back({"atoms_three", MeasureSpec::atomic(n, {{pt(n, std::polar(0.3, 0.4), 0.1), 1.0},
                                                        {pt(n, std::polar(0.9, 2.0)), 0.5},
                                                        {pt(n, std::polar(0.99, -1.0)), 0.25}})});
  std::vector<measures::Atom> ray;
  for (int k = 1; k <= 8; ++k) {
    const double t = 1.0 - std::ldexp(1.0, -k);
    ray.push_back({pt(n, t), std::pow(1.0 - t * t, 2.0)});
  }
  out.push_back({"atoms_ray", MeasureSpec::atomic(n, ray)});
  return out;
}

inline Check make(int criterion, std::string name, bool pass, std::string detail) {
  return {criterion, std::move(name), pass, std::move(detail)};
}

inline std::string dim_tag(int n) { return "n=" + std::to_string(n); }

}  // namespace detail

// ---------------------------------------------------------------------------
// 1. Geometry.

inline SuiteResult geometry_suite(const Settings& s) {
  SuiteResult out{"geometry", {}};
  for (int n = 1; n <= 2; ++n) {
    std::mt19937_64 rng(s.seed + static_cast<std::uint64_t>(n));
    double identity = 0.0, involution = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const Point a = lattice::uniform_ball_point(n, 0.999, rng);
      const Point z = lattice::uniform_ball_point(n, 0.999, rng);
      const Point w = geometry::mobius(a, z);
      const double rhs = (1.0 - a.norm2()) * (1.0 - z.norm2()) / std::norm(1.0 - inner(z, a));
      identity = std::max(identity, std::abs((1.0 - w.norm2()) - rhs));
      const Point back = geometry::mobius(a, w);
      double d = 0.0;
      for (int k = 0; k < n; ++k) d += std::norm(back[k] - z[k]);
      involution = std::max(involution, std::sqrt(d));
    }
    out.checks.push_back(detail::make(1, "mobius identity " + detail::dim_tag(n), identity < 1e-10,
                                      "max residual " + detail::num(identity) + " on 10000 pairs"));
    out.checks.push_back(detail::make(1, "mobius involution " + detail::dim_tag(n), involution < 1e-10,
                                      "max |phi_a(phi_a(z)) - z| " + detail::num(involution)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2 and 3. Quadrature and the kernel-integral bracket.

inline SuiteResult quadrature_suite(const Settings& s) {
  SuiteResult out{"quadrature", {}};
  for (int n = 1; n <= 2; ++n) {
    double mass_err = 0.0, norm_err = 0.0;
    for (double alpha : {-0.5, 0.0, 1.0, 2.5}) {
      mass_err = std::max(mass_err, std::abs(quad::integrate_ball([](const Point&) { return 1.0; }, alpha, s.cfg, n) - 1.0));
      for (int k : {1, 2, 4}) {
        // ||z_1^k||_{2,alpha}^2 = c_alpha n! k! Gamma(alpha+1) / Gamma(n+k+alpha+1).
        const double expect = std::sqrt(quad::normalizing_constant(n, alpha) *
                                        std::exp(std::lgamma(n + 1.0) + std::lgamma(k + 1.0) + std::lgamma(alpha + 1.0) -
                                                 std::lgamma(n + k + alpha + 1.0)));
        norm_err = std::max(norm_err, std::abs(spaces::bergman_norm(spaces::monomial(n, k), 2.0, alpha, s.cfg) / expect - 1.0));
      }
    }
    out.checks.push_back(detail::make(2, "weighted volume " + detail::dim_tag(n), mass_err < 1e-8,
                                      "max |v_alpha(B) - 1| " + detail::num(mass_err)));
    out.checks.push_back(detail::make(2, "monomial norms " + detail::dim_tag(n), norm_err < 1e-8,
                                      "max relative error " + detail::num(norm_err)));
  }
  const double half = spaces::bergman_norm(spaces::monomial(1, 1), 2.0, 0.0, s.cfg);
  out.checks.push_back(detail::make(2, "||z||_{2,0} n=1", std::abs(half - std::sqrt(0.5)) < 1e-8, "value " + detail::num(half)));

  // I_{c,t}(z) (1-|z|^2)^c, I_{c,t}(z) = int (1-|w|^2)^t |1 - <z,w>|^{-(n+1+t+c)} dv(w).
  const double pairs[3][2] = {{0.5, 0.5}, {1.0, 0.0}, {2.0, 1.0}};
  for (int n = 1; n <= 2; ++n) {
    for (const auto& ct : pairs) {
      const double c = ct[0], t = ct[1];
      const auto mu = MeasureSpec::radial_power(n, t);
      double lo = 1e300, hi = 0.0;
      for (double r : {0.0, 0.5, 0.9, 0.99, 0.999}) {
        const double v = measures::kernel_integral(mu, detail::pt(n, r), n + 1 + t + c, s.cfg) * std::pow(1.0 - r * r, c);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      out.checks.push_back(detail::make(3, "kernel bracket " + detail::dim_tag(n) + " c=" + detail::num(c) + " t=" + detail::num(t),
                                        lo > 0.0 && hi / lo < 50.0,
                                        "[" + detail::num(lo) + ", " + detail::num(hi) + "] ratio " + detail::num(hi / lo)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 4. Lattice.

inline SuiteResult lattice_suite(const Settings& s) {
  SuiteResult out{"lattice", {}};
  for (int n = 1; n <= 2; ++n) {
    const double trunc = n == 1 ? 1e-2 : 0.3;
    int max_overlap = 0, bound = 0;
    bool per_r = true;
    std::string overlaps;
    for (double r : {0.25, 0.5, 1.0}) {
      const auto lat = lattice::build_lattice(r, n, trunc);
      const auto rep = lattice::verify_lattice(lat, 10000, s.seed);
      const std::string tag = detail::dim_tag(n) + " r=" + detail::num(r);
      out.checks.push_back(detail::make(4, "covering " + tag, rep.covering_misses == 0,
                                        std::to_string(lat.points.size()) + " points, " + std::to_string(rep.covering_misses) +
                                            " misses on 10000 probes"));
      out.checks.push_back(detail::make(4, "separation " + tag, rep.separation_ok && rep.min_separation >= r / 2.0,
                                        "min distance " + detail::num(rep.min_separation)));
      per_r = per_r && rep.max_overlap <= lat.overlap_bound;
      max_overlap = std::max(max_overlap, rep.max_overlap);
      bound = std::max(bound, lat.overlap_bound);
      overlaps += (overlaps.empty() ? "" : " ") + std::to_string(rep.max_overlap);
    }
    out.checks.push_back(detail::make(4, "overlap " + detail::dim_tag(n), per_r && max_overlap <= bound,
                                      "max overlap per r: " + overlaps + " <= uniform bound " + std::to_string(bound)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 5 and 6. Route agreement and threshold flips.

namespace detail {

/// Battery route agreement and threshold flip for one (n, lambda, gamma).
inline void routes_block(SuiteResult& out, int criterion, int n, double lambda, double gamma, const Settings& s,
                         const lattice::Lattice* lat) {
  using carleson::Verdict;
  const auto P = carleson::params_from(lambda, gamma);
  const double th = carleson::radial_threshold(n, P);
  const std::string tag = dim_tag(n) + " (" + num(lambda) + "," + num(gamma) + ")";
  auto both = [&](const MeasureSpec& mu) {
    carleson::DiagnosticsReport head =
        lambda >= 1.0 ? carleson::classify_ball(mu, P, 0.5, s.cfg, s.tc) : carleson::classify_lattice(mu, P, *lat, s.cfg, s.tc);
    const auto ber = carleson::classify_berezin(mu, P, std::nullopt, s.cfg, s.tc);
    return std::pair<Verdict, Verdict>{head.verdict, ber.verdict};
  };
  int agree = 0, total = 0;
  std::string miss;
  for (const auto& m : measure_battery(n)) {
    const auto [a, b] = both(m.mu);
    ++total;
    if (a == b && a != Verdict::inconclusive) {
      ++agree;
    } else {
      miss += " " + m.name + ":" + carleson::to_string(a) + "/" + carleson::to_string(b);
    }
  }
  out.checks.push_back(make(criterion, "route agreement " + tag, agree == total,
                            std::to_string(agree) + "/" + std::to_string(total) + (miss.empty() ? "" : " disagree:" + miss)));
  const auto below = both(MeasureSpec::radial_power(n, th - 0.1));
  const auto above = both(MeasureSpec::radial_power(n, th + 0.1));
  const bool flip = below.first == Verdict::not_carleson && below.second == Verdict::not_carleson &&
                    above.first == Verdict::carleson && above.second == Verdict::carleson;
  out.checks.push_back(make(criterion, "threshold flip " + tag, flip,
                            "theta* = " + num(th) + ": below " + carleson::to_string(below.first) + "/" +
                                carleson::to_string(below.second) + ", above " + carleson::to_string(above.first) + "/" +
                                carleson::to_string(above.second)));
}

}  // namespace detail

inline SuiteResult theoremA_suite(const Settings& s) {
  SuiteResult out{"theoremA", {}};
  for (int n = 1; n <= 2; ++n)
    for (const auto& lg : {std::pair{1.0, 0.0}, std::pair{1.5, 0.5}}) detail::routes_block(out, 5, n, lg.first, lg.second, s, nullptr);
  return out;
}

inline SuiteResult theoremB_suite(const Settings& s) {
  SuiteResult out{"theoremB", {}};
  const auto lat = carleson::default_lattice(1, s.tc);
  for (const auto& lg : {std::pair{0.5, 0.0}, std::pair{0.75, 0.5}}) detail::routes_block(out, 6, 1, lg.first, lg.second, s, &lat);
  return out;
}

// ---------------------------------------------------------------------------
// 7. Product inequality.

inline SuiteResult theorem11_suite(const Settings& s) {
  SuiteResult out{"theorem11", {}};
  const std::vector<std::vector<carleson::Tuple>> tuple_sets{{{2.0, 1.0, 0.0}, {4.0, 2.0, 0.0}},
                                                             {{2.0, 2.0, 0.5}, {4.0, 2.0, 0.5}}};
  for (int n = 1; n <= 2; ++n) {
    for (const auto& tuples : tuple_sets) {
      const auto P = carleson::derive_params(tuples);
      const std::string tag = detail::dim_tag(n) + " (" + detail::num(P.lambda) + "," + detail::num(P.gamma) + ")";
      auto battery = detail::measure_battery(n);
      battery.push_back({"zero", MeasureSpec::zero(n)});
      double lo = 1e300, hi = 0.0, lo_inf = 1e300;
      bool zero_iff = true;
      for (const auto& m : battery) {
        carleson::NormOptions no;
        no.lower_bound = false;
        const auto norm = carleson::carleson_norm(m.mu, P, s.cfg, s.tc, no);
        const auto rep = carleson::product_inequality_check(m.mu, tuples, 32, s.seed, s.cfg, s.tc, norm.value);
        // Without a finite norm only ||mu|| <~ C can be tested: C_est must keep pace.
        if (norm.verdict == carleson::Verdict::not_carleson) {
          lo_inf = std::min(lo_inf, rep.ratio);
        } else {
          lo = std::min(lo, rep.ratio);
          hi = std::max(hi, rep.ratio);
        }
        if ((rep.c_est == 0.0) != measures::is_zero(m.mu)) zero_iff = false;
      }
      out.checks.push_back(detail::make(7, "product bracket " + tag, lo >= 1e-2 && hi <= 1e2 && lo_inf >= 1e-2,
                                        "C_est / norm in [" + detail::num(lo) + ", " + detail::num(hi) +
                                            "] (carleson), >= " + detail::num(lo_inf) + " (not carleson)"));
      out.checks.push_back(detail::make(7, "product zero iff mu = 0 " + tag, zero_iff, zero_iff ? "holds" : "fails"));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// 8 and 9. Toeplitz boundedness and compactness.

namespace detail {

inline constexpr double kToeplitzBeta = 1.0;  // lambda = 1, gamma = beta for p1 = p2 = 2, alpha = 0

struct ToeplitzRow {
  std::string name;
  operators::ToeplitzReport rep;
  operators::CompactnessReport compact;
};

/// Equivalence and compactness reports for the battery; shared by the two suites.
inline const std::vector<ToeplitzRow>& toeplitz_rows(int n, const Settings& s) {
  static std::map<std::tuple<int, std::uint64_t, int, int, int, int, double>, std::vector<ToeplitzRow>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(n, s.seed, s.cfg.radial_nodes, s.cfg.angular_nodes, s.tc.shells, s.tc.rays, s.cfg.outer_cutoff);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<ToeplitzRow> rows;
  operators::ToeplitzOptions opt;
  opt.seed = s.seed;
  for (const auto& m : measure_battery(n)) {
    const operators::ToeplitzSpec spec{m.mu, kToeplitzBeta};
    ToeplitzRow row{m.name, operators::toeplitz_equivalence_check(spec, s.cfg, s.tc, opt), {}};
    row.compact = operators::toeplitz_compactness_probe(spec, s.cfg, s.tc, {}, &row.rep.family);
    rows.push_back(std::move(row));
  }
  return cache.emplace(key, std::move(rows)).first->second;
}

}  // namespace detail

inline SuiteResult toeplitz_suite(const Settings& s) {
  SuiteResult out{"toeplitz", {}};
  for (int n = 1; n <= 2; ++n) {
    const auto& rows = detail::toeplitz_rows(n, s);
    int ok = 0;
    double lo = 1e300, hi = 0.0;
    std::string miss;
    for (const auto& r : rows) {
      if (r.rep.consistent) {
        ++ok;
      } else {
        miss += " " + r.name;
      }
      if (r.rep.operator_verdict == carleson::Verdict::carleson && r.rep.carleson.value > 0.0) {
        lo = std::min(lo, r.rep.ratio);
        hi = std::max(hi, r.rep.ratio);
      }
    }
    out.checks.push_back(detail::make(8, "equivalence " + detail::dim_tag(n), ok == static_cast<int>(rows.size()),
                                      std::to_string(ok) + "/" + std::to_string(rows.size()) + " consistent, bounded ratios [" +
                                          detail::num(lo) + ", " + detail::num(hi) + "]" +
                                          (miss.empty() ? "" : " inconsistent:" + miss)));
  }

  // T for (1-|w|^2)^beta c_beta dv is the identity.
  for (int n = 1; n <= 2; ++n) {
    quad::QuadConfig cfg = s.cfg;
    cfg.outer_cutoff = 1e-12;
    if (n == 2) cfg.angular_nodes = std::max(cfg.angular_nodes, 512);
    const double tol = n == 1 ? 1e-8 : 1e-6;
    double worst = 0.0;
    for (double beta : {0.0, 1.0}) {
      const operators::ToeplitzSpec spec{MeasureSpec::radial_power(n, beta, quad::normalizing_constant(n, beta)), beta};
      for (int k = 0; k <= 6; ++k) {
        const auto f = spaces::monomial(n, k);
        for (double r : {0.1, 0.5, 0.9}) {
          const Point z = detail::pt(n, std::polar(r * (n == 2 ? 0.8 : 1.0), 0.7), n == 2 ? std::polar(0.6 * r, -0.3) : 0.0);
          worst = std::max(worst, std::abs(operators::toeplitz_apply(spec, f, z, cfg) - f(z)) / std::max(1.0, std::abs(f(z))));
        }
      }
    }
    out.checks.push_back(detail::make(8, "reproducing " + detail::dim_tag(n), worst < tol, "max error " + detail::num(worst)));
  }

  // mu -> 3 mu on atoms.
  double homog = 0.0;
  for (int n = 1; n <= 2; ++n) {
    for (const auto& m : detail::measure_battery(n)) {
      if (!std::isnan(m.theta)) continue;
      const operators::ToeplitzSpec a{m.mu, detail::kToeplitzBeta}, b{measures::scaled(m.mu, 3.0), detail::kToeplitzBeta};
      const auto f = spaces::kernel_test_function(detail::pt(n, std::polar(0.4, 1.0)), 1.5);
      for (double r : {0.0, 0.6, 0.95}) {
        const Point z = detail::pt(n, std::polar(r, -0.5));
        const cplx ta = operators::toeplitz_apply(a, f, z, s.cfg), tb = operators::toeplitz_apply(b, f, z, s.cfg);
        homog = std::max(homog, std::abs(tb - 3.0 * ta) / std::abs(3.0 * ta));
      }
    }
  }
  out.checks.push_back(detail::make(8, "homogeneity on atoms", homog < 1e-14, "max relative deviation " + detail::num(homog)));
  return out;
}

inline SuiteResult vanishing_suite(const Settings& s) {
  SuiteResult out{"vanishing", {}};
  for (int n = 1; n <= 2; ++n) {
    const auto& rows = detail::toeplitz_rows(n, s);
    int ok = 0;
    std::string miss;
    for (const auto& r : rows) {
      if (r.compact.agrees) {
        ++ok;
      } else {
        miss += " " + r.name;
      }
    }
    out.checks.push_back(detail::make(9, "compact iff vanishing " + detail::dim_tag(n), ok == static_cast<int>(rows.size()),
                                      std::to_string(ok) + "/" + std::to_string(rows.size()) + " agree" +
                                          (miss.empty() ? "" : ", disagree:" + miss)));
  }
  const auto P = carleson::params_from(1.0, 0.0);
  for (int n = 1; n <= 2; ++n) {
    carleson::NormOptions no;
    no.lower_bound = false;
    const auto dv = MeasureSpec::radial_power(n, 0.0);
    const auto norm = carleson::carleson_norm(dv, P, s.cfg, s.tc, no);
    const auto van = carleson::vanishing_probe(dv, P, std::nullopt, s.cfg, s.tc);
    out.checks.push_back(detail::make(9, "dv carleson, not vanishing " + detail::dim_tag(n),
                                      norm.verdict == carleson::Verdict::carleson && !van.vanishing,
                                      std::string("verdict ") + carleson::to_string(norm.verdict) + ", tail slope " +
                                          detail::num(van.slope)));
    bool all = true;
    std::string slopes;
    for (double th : {0.25, 0.5, 1.0}) {
      const auto v = carleson::vanishing_probe(MeasureSpec::radial_power(n, th), P, std::nullopt, s.cfg, s.tc);
      all = all && v.vanishing;
      slopes += (slopes.empty() ? "" : " ") + detail::num(v.slope);
    }
    out.checks.push_back(detail::make(9, "above threshold vanishing " + detail::dim_tag(n), all, "tail slopes " + slopes));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 10. Operators on F(p, q, s).

inline SuiteResult section5_suite(const Settings& s) {
  SuiteResult out{"section5", {}};
  const int n = 1;
  const std::vector<spaces::AnalyticFn> symbols{spaces::constant(n, 1.0), spaces::monomial(n, 1), spaces::constant(n, 0.0),
                                                spaces::g_log(n)};
  const auto fb = spaces::function_battery(n);
  const int per_pair = 1000 / static_cast<int>(symbols.size() * fb.size()) + 1;
  double worst[4] = {0.0, 0.0, 0.0, 0.0};
  int probes = 0;
  std::uint64_t seed = s.seed;
  for (const auto& g : symbols) {
    for (const auto& f : fb) {
      const auto r = operators::operator_identities(g, f, per_pair, seed++);
      worst[0] = std::max(worst[0], r.cesaro);
      worst[1] = std::max(worst[1], r.companion);
      worst[2] = std::max(worst[2], r.multiplier);
      worst[3] = std::max(worst[3], r.ray_constant);
      probes += r.probes;
    }
  }
  const double w = std::max({worst[0], worst[1], worst[2], worst[3]});
  out.checks.push_back(detail::make(10, "radial identities", w < 1e-7 && probes >= 1000,
                                    std::to_string(probes) + " probes, max errors J " + detail::num(worst[0]) + " I " +
                                        detail::num(worst[1]) + " M " + detail::num(worst[2]) + " ray " + detail::num(worst[3])));

  for (double sv : {n + 0.5, n + 2.0}) {
    const auto rs = operators::fpqs_bloch_ratios(n, 2.0, 0.0, sv, s.cfg);
    double lo = 1e300, hi = 0.0;
    for (const auto& r : rs) lo = std::min(lo, r.ratio), hi = std::max(hi, r.ratio);
    out.checks.push_back(detail::make(10, "F(2,0," + detail::num(sv) + ") vs Bloch", !rs.empty() && lo >= 0.1 && hi <= 10.0,
                                      std::to_string(rs.size()) + " functions, ratios [" + detail::num(lo) + ", " + detail::num(hi) + "]"));
  }

  for (double beta : {3.0, 2.5, 2.0}) {
    const operators::Section5Params sp{2.0, 1.0, 2.0, beta, 2.0};
    for (auto kind : {operators::OperatorKind::cesaro, operators::OperatorKind::companion, operators::OperatorKind::multiplier}) {
      int ok = 0;
      std::string miss;
      for (const auto& g : symbols) {
        const auto r = operators::operator_check(kind, g, sp, s.cfg, s.tc);
        if (r.consistent) {
          ++ok;
        } else {
          miss += " " + g.descriptor;
        }
      }
      out.checks.push_back(detail::make(10, std::string(operators::to_string(kind)) + " beta=" + detail::num(beta) + " (" +
                                                operators::to_string(operators::regime_for(n, sp)) + ")",
                                        ok == static_cast<int>(symbols.size()),
                                        std::to_string(ok) + "/" + std::to_string(symbols.size()) + " consistent" +
                                            (miss.empty() ? "" : ", inconsistent:" + miss)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

inline SuiteResult run_suite(const std::string& name, const Settings& s = {}) {
  static const std::map<std::string, std::function<SuiteResult(const Settings&)>> table{
      {"geometry", geometry_suite},   {"quadrature", quadrature_suite}, {"lattice", lattice_suite},
      {"theoremA", theoremA_suite},   {"theoremB", theoremB_suite},     {"theorem11", theorem11_suite},
      {"toeplitz", toeplitz_suite},   {"vanishing", vanishing_suite},   {"section5", section5_suite}};
  const auto it = table.find(name);
  if (it == table.end()) throw DomainError("verify: unknown suite '" + name + "'");
  return it->second(s);
}

/// `all` expands to every suite in criterion order.
inline std::vector<SuiteResult> run(const std::string& name, const Settings& s = {}) {
  std::vector<SuiteResult> out;
  if (name == "all") {
    for (const auto& n : suite_names()) out.push_back(run_suite(n, s));
  } else {
    out.push_back(run_suite(name, s));
  }
  return out;
}

}  // namespace carleson_lab::verify
