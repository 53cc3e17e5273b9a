#pragma once

// (lambda, gamma)-Bergman Carleson measures: parameter derivation, the ball,
// Berezin and lattice classifiers, vanishing probes, the key-lemma operator
// and the product-inequality harness.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "carleson_lab/lattice.hpp"
#include "carleson_lab/measures.hpp"
#include "carleson_lab/quadrature.hpp"
#include "carleson_lab/spaces.hpp"

namespace carleson_lab::carleson {

struct Tuple {
  double p = 2.0;
  double q = 2.0;
  double alpha = 0.0;
};

struct CarlesonParams {
  std::vector<Tuple> tuples;
  double lambda = 1.0;
  double gamma = 0.0;

  /// (n+1+gamma) lambda: the power of (1-|z|^2) in the ball condition.
  double exponent(int n) const { return (n + 1 + gamma) * lambda; }
};

/// lambda = sum q_i/p_i, gamma = (1/lambda) sum alpha_i q_i / p_i.
inline CarlesonParams derive_params(const std::vector<Tuple>& tuples) {
  if (tuples.empty()) throw DomainError("derive_params: at least one (p, q, alpha) tuple is required");
  CarlesonParams out;
  out.tuples = tuples;
  double lam = 0.0, acc = 0.0;
  for (const auto& t : tuples) {
    if (!(t.p > 0.0) || !(t.q > 0.0)) throw DomainError("derive_params: p_i and q_i must be > 0");
    if (!(t.alpha > -1.0)) throw DomainError("derive_params: alpha_i must be > -1");
    lam += t.q / t.p;
    acc += t.alpha * t.q / t.p;
  }
  out.lambda = lam;
  out.gamma = acc / lam;
  if (!(out.gamma > -1.0))
    throw DomainError("derive_params: gamma = " + std::to_string(out.gamma) + " is not > -1");
  return out;
}

/// Parameters given directly, as the single tuple (1, lambda, gamma).
inline CarlesonParams params_from(double lambda, double gamma) { return derive_params({{1.0, lambda, gamma}}); }

/// RadialPower(theta) on B_n is (lambda, gamma)-Carleson iff theta >= this value
/// when lambda >= 1, and iff theta > this value when lambda < 1.
inline double radial_threshold(int n, const CarlesonParams& P) {
  return P.lambda >= 1.0 ? P.exponent(n) - (n + 1) : (1.0 + P.gamma) * P.lambda - 1.0;
}

// ---------------------------------------------------------------------------
// Reports and decision rules.

enum class Verdict { carleson, not_carleson, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::carleson: return "carleson";
    case Verdict::not_carleson: return "not_carleson";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct TrendConfig {
  int shells = 12;                // probe radii 1 - 2^{-j}, j = 1..shells
  int series_shells = 10;         // shells of the lambda < 1 series (n = 1; n = 2 uses 4)
  int rays = 8;
  double slope_min = -0.05;       // bounded: tail slope of log(value) vs log(1-|a|) at least this
  double median_factor = 10.0;    // bounded: last value at most this times the median
  double summable_slope = 0.05;   // summable: shell contributions decay at least at this rate
  double vanish_rel = 1e-2;
  double vanish_slope = 0.05;
  double route_bracket = 100.0;   // route estimates further apart than this are inconclusive
  int min_shells = 4;
};

struct DiagnosticsReport {
  std::string route;
  int dim = 1;
  double lambda = 1.0;
  double gamma = 0.0;
  double parameter = 0.0;  // r (ball, lattice), t or s (berezin)
  std::vector<double> radii;
  std::vector<double> values;
  double slope = 0.0;
  Verdict verdict = Verdict::inconclusive;
  double norm_estimate = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {
inline DiagnosticsReport report(std::string route, int n, const CarlesonParams& P, double parameter) {
  DiagnosticsReport rep;
  rep.route = std::move(route);
  rep.dim = n;
  rep.lambda = P.lambda;
  rep.gamma = P.gamma;
  rep.parameter = parameter;
  return rep;
}
}  // namespace detail

/// Probe radii 1 - 2^{-j}, j = 1..shells.
inline std::vector<double> dyadic_radii(int shells) {
  std::vector<double> r;
  for (int j = 1; j <= shells; ++j) r.push_back(1.0 - std::ldexp(1.0, -j));
  return r;
}

/// Probe directions (stored at radius 1/2): n = 1 equally spaced angles,
/// n = 2 directions spanning both coordinates.
inline std::vector<Point> probe_rays(int n, int count) {
  Point::check_dim(n);
  if (count < 1) throw DomainError("probe_rays: count must be >= 1");
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) {
    const double ang = 2.0 * kPi * k / count;
    if (n == 1) {
      out.push_back(Point{std::polar(0.5, ang)});
    } else {
      const double phi = count > 1 ? 0.5 * kPi * k / (count - 1) : 0.0;
      out.push_back(Point{std::polar(0.5 * std::cos(phi), ang), cplx(0.5 * std::sin(phi), 0.0)});
    }
  }
  return out;
}

/// Rotation-invariant measures need a single probe ray.
inline bool is_radial(const measures::FlatMeasure& mu) {
  if (!mu.atoms.empty()) return false;
  return std::all_of(mu.densities.begin(), mu.densities.end(),
                     [](const auto& d) { return d.h == measures::Builtin::one; });
}

namespace detail {

/// Slope of log(values) against log(1 - radii) over the positive values of the tail half.
inline double positive_tail_slope(const std::vector<double>& radii, const std::vector<double>& values) {
  std::vector<double> r, v;
  for (std::size_t i = values.size() / 2; i < values.size(); ++i)
    if (values[i] > 0.0) r.push_back(radii[i]), v.push_back(values[i]);
  if (v.size() < 2) return 0.0;
  return spaces::tail_slope(r, v);
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Max over probe rays of F(z) at each dyadic radius.
template <class F>
std::vector<double> shell_maxima(int n, const std::vector<double>& radii, int rays, bool radial, F&& F_) {
  const auto dirs = probe_rays(n, radial ? 1 : rays);
  std::vector<double> out;
  for (double t : radii) {
    double best = 0.0;
    for (const auto& d : dirs) best = std::max(best, F_(Point::on_ray(d.coords(), t)));
    out.push_back(best);
  }
  return out;
}

/// Max of F over the atom locations (the supremum is often attained there).
template <class F>
double atom_maximum(const measures::FlatMeasure& flat, F&& F_) {
  double best = 0.0;
  for (const auto& a : flat.atoms) best = std::max(best, F_(a.point));
  return best;
}

}  // namespace detail

/// Bounded trend: the last three values vanish (sup attained inside), or the tail
/// slope is at least slope_min and the last value is at most median_factor times the median.
inline Verdict bounded_trend(const std::vector<double>& radii, const std::vector<double>& values, const TrendConfig& tc,
                             double* slope_out = nullptr) {
  const double slope = detail::positive_tail_slope(radii, values);
  if (slope_out) *slope_out = slope;
  const std::size_t m = values.size();
  if (m < static_cast<std::size_t>(tc.min_shells)) return Verdict::inconclusive;
  if (values[m - 1] == 0.0 && values[m - 2] == 0.0 && values[m - 3] == 0.0) return Verdict::carleson;
  const bool ok = slope >= tc.slope_min && values.back() <= tc.median_factor * detail::median(values);
  return ok ? Verdict::carleson : Verdict::not_carleson;
}

/// Summable shell series: the last contribution vanishes or the tail decays
/// at rate at least summable_slope in log(1 - radius).
inline Verdict summable_trend(const std::vector<double>& radii, const std::vector<double>& shell_sums,
                              const TrendConfig& tc, double* slope_out = nullptr) {
  const double slope = detail::positive_tail_slope(radii, shell_sums);
  if (slope_out) *slope_out = slope;
  if (shell_sums.size() < static_cast<std::size_t>(tc.min_shells)) return Verdict::inconclusive;
  if (shell_sums.back() == 0.0) return Verdict::carleson;
  return slope >= tc.summable_slope ? Verdict::carleson : Verdict::not_carleson;
}

inline void require_dim(const measures::MeasureSpec& mu, int n, const char* what) {
  if (mu.dim() != n) throw DomainError(std::string(what) + ": dimension mismatch");
}

// ---------------------------------------------------------------------------
// lambda >= 1 routes.

/// sup over dyadic probes of mu(D(z, r)) / (1-|z|^2)^{(n+1+gamma) lambda}.
inline DiagnosticsReport classify_ball(const measures::MeasureSpec& mu, const CarlesonParams& P, double r,
                                       const quad::QuadConfig& cfg, const TrendConfig& tc = {}) {
  if (P.lambda < 1.0) throw DomainError("classify_ball: requires lambda >= 1");
  if (!(r > 0.0)) throw DomainError("classify_ball: r must be > 0");
  const int n = mu.dim();
  const auto flat = measures::flatten(mu);
  auto rep = detail::report("ball", n, P, r);
  rep.radii = dyadic_radii(tc.shells);
  const double e = P.exponent(n);
  rep.values = detail::shell_maxima(n, rep.radii, tc.rays, is_radial(flat), [&](const Point& z) {
    return measures::ball_mass(flat, z, r, cfg) / std::pow(1.0 - z.norm2(), e);
  });
  rep.verdict = bounded_trend(rep.radii, rep.values, tc, &rep.slope);
  rep.norm_estimate = std::max(*std::max_element(rep.values.begin(), rep.values.end()),
                               detail::atom_maximum(flat, [&](const Point& z) {
                                 return measures::ball_mass(flat, z, r, cfg) / std::pow(1.0 - z.norm2(), e);
                               }));
  return rep;
}

/// (1-|a|^2)^t int |1 - <z, a>|^{-(n+1+gamma) lambda - t} dmu(z) at the dyadic probes.
inline std::vector<double> berezin_probe_values(const measures::FlatMeasure& flat, const CarlesonParams& P, double t,
                                                const std::vector<double>& radii, const quad::QuadConfig& cfg,
                                                const TrendConfig& tc) {
  const double power = P.exponent(flat.dim) + t;
  return detail::shell_maxima(flat.dim, radii, tc.rays, is_radial(flat), [&](const Point& a) {
    return std::pow(1.0 - a.norm2(), t) * measures::kernel_integral(flat, a, power, cfg);
  });
}

namespace detail {

/// Equal-weight directions on the unit sphere (stored at radius 1/2) for shell integrals.
inline std::vector<Point> sphere_directions(int n, bool radial) {
  if (radial) return probe_rays(n, 1);
  if (n == 1) return probe_rays(1, 16);
  // x = |zeta_2|^2 is uniform on [0, 1]; midpoints in x, equispaced phases.
  std::vector<Point> out;
  for (int i = 0; i < 4; ++i) {
    const double x = (i + 0.5) / 4.0;
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k)
        out.push_back(Point{std::polar(0.5 * std::sqrt(1 - x), 2 * kPi * j / 8), std::polar(0.5 * std::sqrt(x), 2 * kPi * k / 8)});
  }
  return out;
}

}  // namespace detail

/// Shell integrals c_j = int over 1-2^{-(j-1)} <= |z| < 1-2^{-j} of B_{s,gamma}(mu)^P dv_gamma.
inline std::vector<double> berezin_lp_shells(const measures::FlatMeasure& flat, double s, double gamma, double P,
                                             const std::vector<double>& radii, const quad::QuadConfig& cfg) {
  const int n = flat.dim;
  const auto dirs = detail::sphere_directions(n, is_radial(flat));
  const auto gl = quad::gauss_legendre(6);
  const double c_gamma = quad::normalizing_constant(n, gamma);
  const double power = n + 1 + s + gamma;
  std::vector<double> out;
  double u_lo = 0.0;
  for (double t : radii) {
    const double u_hi = t * t;
    std::vector<double> parts;
    for (std::size_t i = 0; i < gl->x.size(); ++i) {
      const double u = u_lo + (u_hi - u_lo) * gl->x[i];
      const double w = (u_hi - u_lo) * gl->w[i] * c_gamma * n * std::pow(u, n - 1) * std::pow(1.0 - u, gamma);
      std::vector<double> vals;
      for (const auto& d : dirs) {
        const Point z = Point::on_ray(d.coords(), std::sqrt(u));
        const double b = std::pow(1.0 - u, s) * measures::kernel_integral(flat, z, power, cfg);
        vals.push_back(std::pow(b, P));
      }
      parts.push_back(w * pairwise_sum(vals) / static_cast<double>(dirs.size()));
    }
    out.push_back(pairwise_sum(parts));
    u_lo = u_hi;
  }
  return out;
}

/// lambda >= 1: sup of the kernel integral with t (default n+1+gamma).
/// lambda < 1: ||B_{s,gamma}(mu)||_{L^{1/(1-lambda)}(dv_gamma)} with s (default n+1).
inline DiagnosticsReport classify_berezin(const measures::MeasureSpec& mu, const CarlesonParams& P,
                                          std::optional<double> param, const quad::QuadConfig& cfg,
                                          const TrendConfig& tc = {}) {
  const int n = mu.dim();
  const auto flat = measures::flatten(mu);
  auto rep = detail::report("berezin", n, P, 0.0);
  rep.radii = dyadic_radii(tc.shells);
  if (P.lambda >= 1.0) {
    const double t = param.value_or(n + 1 + P.gamma);
    if (!(t > 0.0)) throw DomainError("classify_berezin: t must be > 0");
    rep.parameter = t;
    rep.values = berezin_probe_values(flat, P, t, rep.radii, cfg, tc);
    rep.verdict = bounded_trend(rep.radii, rep.values, tc, &rep.slope);
    const double power = P.exponent(n) + t;
    rep.norm_estimate = std::max(*std::max_element(rep.values.begin(), rep.values.end()),
                                 detail::atom_maximum(flat, [&](const Point& a) {
                                   return std::pow(1.0 - a.norm2(), t) * measures::kernel_integral(flat, a, power, cfg);
                                 }));
  } else {
    const double s = param.value_or(n + 1.0);
    if (!(s > 0.0)) throw DomainError("classify_berezin: s must be > 0");
    rep.parameter = s;
    const double expo = 1.0 / (1.0 - P.lambda);
    rep.radii = dyadic_radii(n == 1 ? tc.series_shells : std::min(tc.series_shells, 4));
    rep.values = berezin_lp_shells(flat, s, P.gamma, expo, rep.radii, cfg);
    rep.verdict = summable_trend(rep.radii, rep.values, tc, &rep.slope);
    rep.norm_estimate = std::pow(pairwise_sum(rep.values), 1.0 - P.lambda);
  }
  if (rep.radii.back() > measures::comfort_radius(cfg))
    rep.warnings.push_back("berezin: outermost probe exceeds the kernel comfort radius");
  return rep;
}

// ---------------------------------------------------------------------------
// lambda < 1 lattice route.

/// mu(D(a_k, r)) for every lattice point.
inline std::vector<double> lattice_ball_masses(const measures::MeasureSpec& mu, const lattice::Lattice& lat,
                                               const quad::QuadConfig& cfg) {
  if (lat.dim != mu.dim()) throw DomainError("lattice_ball_masses: dimension mismatch");
  const auto flat = measures::flatten(mu);
  std::vector<double> out(lat.points.size());
  for (std::size_t k = 0; k < lat.points.size(); ++k) out[k] = measures::ball_mass(flat, lat.points[k], lat.r, cfg);
  return out;
}

/// Number of full dyadic shells covered by a lattice truncated at |a| <= 1 - truncation.
inline int lattice_shells(const lattice::Lattice& lat) {
  return static_cast<int>(std::floor(std::log2(1.0 / lat.truncation) + 1e-9));
}

/// ||{mu(D_k) / (1-|a_k|^2)^{(n+1+gamma) lambda}}||_{l^{1/(1-lambda)}} from precomputed ball masses.
inline DiagnosticsReport classify_lattice(const std::vector<double>& masses, const lattice::Lattice& lat,
                                          const CarlesonParams& P, const TrendConfig& tc = {}) {
  if (!(P.lambda > 0.0 && P.lambda < 1.0)) throw DomainError("classify_lattice: requires 0 < lambda < 1");
  if (masses.size() != lat.points.size()) throw DomainError("classify_lattice: mass count mismatch");
  auto rep = detail::report("lattice", lat.dim, P, lat.r);
  const int J = lattice_shells(lat);
  rep.radii = dyadic_radii(std::max(J, 0));
  rep.values.assign(rep.radii.size(), 0.0);
  if (J < tc.min_shells) {
    rep.verdict = Verdict::inconclusive;
    rep.warnings.push_back("lattice: truncation covers fewer than " + std::to_string(tc.min_shells) + " dyadic shells");
    return rep;
  }
  const double e = P.exponent(lat.dim);
  const double expo = 1.0 / (1.0 - P.lambda);
  std::vector<std::vector<double>> terms(static_cast<std::size_t>(J));
  for (std::size_t k = 0; k < masses.size(); ++k) {
    if (masses[k] == 0.0) continue;
    const Point& a = lat.points[k];
    const double x = -std::log2(1.0 - a.norm());
    if (x > J + 1e-9) continue;  // partial outer shell; the sphere |a| = 1 - 2^-J stays in shell J
    const int j = std::clamp(static_cast<int>(std::floor(x)) + 1, 1, J);
    terms[static_cast<std::size_t>(j - 1)].push_back(std::pow(masses[k] / std::pow(1.0 - a.norm2(), e), expo));
  }
  for (int j = 0; j < J; ++j) rep.values[static_cast<std::size_t>(j)] = pairwise_sum(terms[static_cast<std::size_t>(j)]);
  rep.verdict = summable_trend(rep.radii, rep.values, tc, &rep.slope);
  rep.norm_estimate = std::pow(pairwise_sum(rep.values), 1.0 - P.lambda);
  return rep;
}

inline DiagnosticsReport classify_lattice(const measures::MeasureSpec& mu, const CarlesonParams& P,
                                          const lattice::Lattice& lat, const quad::QuadConfig& cfg,
                                          const TrendConfig& tc = {}) {
  return classify_lattice(lattice_ball_masses(mu, lat, cfg), lat, P, tc);
}

/// Default lattice for the lambda < 1 route: r = 1, truncated after series_shells dyadic shells (n = 1) or 4 (n = 2).
inline lattice::Lattice default_lattice(int n, const TrendConfig& tc = {}) {
  return lattice::build_lattice(1.0, n, std::ldexp(1.0, n == 1 ? -tc.series_shells : -std::min(tc.series_shells, 4)));
}

// ---------------------------------------------------------------------------
// Kernel test functions.

/// ||(1 - <z, a>)^{-sigma}||_{p, alpha} by focused quadrature.
inline double kernel_norm(const Point& a, double sigma, double p, double alpha, const quad::QuadConfig& cfg) {
  return spaces::bergman_norm(spaces::kernel_test_function(a, sigma), p, alpha, cfg);
}

/// sigma with sigma p = 2 (n+1+alpha), so the kernel norm grows like (1-|a|^2)^{-(n+1+alpha)/p}.
inline double battery_sigma(int n, double p, double alpha) { return 2.0 * (n + 1 + alpha) / p; }

/// max over kernels f_a (a on the probe grid) of int |f_a|^lambda dmu / ||f_a||_{1,gamma}^lambda, and f = 1.
inline double direct_lower_bound(const measures::MeasureSpec& mu, const CarlesonParams& P, const quad::QuadConfig& cfg,
                                 const TrendConfig& tc = {}) {
  const int n = mu.dim();
  const auto flat = measures::flatten(mu);
  const double sigma = battery_sigma(n, 1.0, P.gamma);
  double best = measures::integrate<double>(measures::discretize(flat, cfg), [](const Point&, double) { return 1.0; });
  const auto radii = dyadic_radii(tc.shells);
  const auto dirs = probe_rays(n, is_radial(flat) ? 1 : tc.rays);
  for (double t : radii) {
    const Point a0 = Point::on_ray(dirs.front().coords(), t);
    const double norm = kernel_norm(a0, sigma, 1.0, P.gamma, cfg);
    for (const auto& d : dirs) {
      const Point a = Point::on_ray(d.coords(), t);
      best = std::max(best, measures::kernel_integral(flat, a, sigma * P.lambda, cfg) / std::pow(norm, P.lambda));
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Norm with cross-route evidence.

struct NormReport {
  double value = 0.0;
  std::string headline_route;
  Verdict verdict = Verdict::inconclusive;
  std::vector<DiagnosticsReport> routes;
  double direct_lower_bound = 0.0;
  /// Second route estimate over the headline estimate.
  double route_ratio = 1.0;
};

struct NormOptions {
  double r = 0.5;                      // ball route radius
  std::optional<double> berezin_param;
  const lattice::Lattice* lat = nullptr;        // lambda < 1; default_lattice(n) when absent
  const std::vector<double>* masses = nullptr;  // precomputed lattice ball masses
  bool lower_bound = true;
};

inline NormReport carleson_norm(const measures::MeasureSpec& mu, const CarlesonParams& P, const quad::QuadConfig& cfg,
                                const TrendConfig& tc = {}, const NormOptions& opt = {}) {
  NormReport out;
  DiagnosticsReport head;
  if (P.lambda >= 1.0) {
    head = classify_ball(mu, P, opt.r, cfg, tc);
  } else {
    std::optional<lattice::Lattice> own;
    const lattice::Lattice* lat = opt.lat;
    if (!lat) lat = &own.emplace(default_lattice(mu.dim(), tc));
    head = opt.masses ? classify_lattice(*opt.masses, *lat, P, tc) : classify_lattice(mu, P, *lat, cfg, tc);
  }
  auto second = classify_berezin(mu, P, opt.berezin_param, cfg, tc);
  out.value = head.norm_estimate;
  out.headline_route = head.route;
  if (head.verdict != second.verdict) {
    out.verdict = Verdict::inconclusive;
  } else {
    out.verdict = head.verdict;
  }
  if (head.norm_estimate > 0.0) {
    out.route_ratio = second.norm_estimate / head.norm_estimate;
  } else {
    out.route_ratio = second.norm_estimate == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  if (out.verdict == Verdict::carleson &&
      !(out.route_ratio <= tc.route_bracket && out.route_ratio >= 1.0 / tc.route_bracket))
    out.verdict = Verdict::inconclusive;
  if (opt.lower_bound) out.direct_lower_bound = direct_lower_bound(mu, P, cfg, tc);
  out.routes.push_back(std::move(head));
  out.routes.push_back(std::move(second));
  return out;
}

// ---------------------------------------------------------------------------
// Vanishing measures.

struct VanishingReport {
  std::string route;
  std::vector<double> radii;
  std::vector<double> values;
  double slope = 0.0;
  bool vanishing = false;
};

/// lambda >= 1: the kernel integral of classify_berezin at dyadic radii, vanishing iff
/// the tail decreases and ends below vanish_rel of the peak or decays at rate >= vanish_slope.
/// lambda < 1: vanishing iff Carleson (lattice route).
inline VanishingReport vanishing_probe(const measures::MeasureSpec& mu, const CarlesonParams& P,
                                       std::optional<double> t, const quad::QuadConfig& cfg,
                                       const TrendConfig& tc = {}, const NormOptions& opt = {}) {
  VanishingReport rep;
  const int n = mu.dim();
  if (P.lambda >= 1.0) {
    const double tt = t.value_or(n + 1 + P.gamma);
    if (!(tt > 0.0)) throw DomainError("vanishing_probe: t must be > 0");
    rep.route = "berezin";
    rep.radii = dyadic_radii(tc.shells);
    rep.values = berezin_probe_values(measures::flatten(mu), P, tt, rep.radii, cfg, tc);
    rep.slope = spaces::tail_slope(rep.radii, rep.values);
    const double peak = *std::max_element(rep.values.begin(), rep.values.end());
    rep.vanishing = peak == 0.0 || spaces::vanishing_rule(rep.radii, rep.values, tc.vanish_rel, tc.vanish_slope);
  } else {
    std::optional<lattice::Lattice> own;
    const lattice::Lattice* lat = opt.lat;
    if (!lat) lat = &own.emplace(default_lattice(n, tc));
    const auto d = opt.masses ? classify_lattice(*opt.masses, *lat, P, tc) : classify_lattice(mu, P, *lat, cfg, tc);
    rep.route = d.route;
    rep.radii = d.radii;
    rep.values = d.values;
    rep.slope = d.slope;
    rep.vanishing = d.verdict == Verdict::carleson;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Key lemma.

/// S^r_{mu,alpha1} f(z) = (1-|z|^2)^s int |f(w)|^r |1 - <z,w>|^{-(n+1+s+alpha1)} dmu(w).
inline double s_operator(const measures::MeasureSpec& mu, const spaces::AnalyticFn& f, double r_exp, double s,
                         double alpha1, const Point& z, const quad::QuadConfig& cfg) {
  if (!(s > 0.0) || !(r_exp > 0.0)) throw DomainError("s_operator: s and r must be > 0");
  if (!(alpha1 > -1.0)) throw DomainError("s_operator: alpha1 must be > -1");
  require_dim(mu, f.dim, "s_operator");
  require_same_dim(Point::origin(f.dim), z, "s_operator");
  const double power = f.dim + 1 + s + alpha1;
  const double inner_int = measures::integrate<double>(
      mu,
      [&](const Point& w, double) {
        return std::pow(std::abs(f(w)), r_exp) * std::pow(std::norm(1.0 - inner(z, w)), -0.5 * power);
      },
      cfg, measures::KernelHint{z, power});
  return std::pow(1.0 - z.norm2(), s) * inner_int;
}

struct KeyLemmaParams {
  double p = 2.0, q = 2.0, r = 1.0, alpha1 = 0.0, alpha2 = 0.0, s = 1.0;
};

/// lambda = 1 + r/p - 1/q, gamma = (alpha1 + alpha2 r/p - alpha1/q) / lambda.
inline CarlesonParams key_lemma_params(const KeyLemmaParams& k) {
  if (!(k.q > 1.0)) throw DomainError("key_lemma: q must be > 1");
  if (!(k.p > 0.0) || !(k.r > 0.0) || !(k.s > 0.0)) throw DomainError("key_lemma: p, r, s must be > 0");
  if (!(k.alpha1 > -1.0) || !(k.alpha2 > -1.0)) throw DomainError("key_lemma: alpha1, alpha2 must be > -1");
  const double lambda = 1.0 + k.r / k.p - 1.0 / k.q;
  const double gamma = (k.alpha1 + k.alpha2 * k.r / k.p - k.alpha1 / k.q) / lambda;
  return params_from(lambda, gamma);
}

struct KeyLemmaReport {
  double lambda = 0.0, gamma = 0.0;
  double k_est = 0.0;
  std::string argmax;
  double carleson_norm = 0.0;
  double ratio = 0.0;
};

/// K_est = max over the battery of ||S f||_{q,alpha1} / ||f||_{p,alpha2}^r.
inline KeyLemmaReport key_lemma_check(const measures::MeasureSpec& mu, const KeyLemmaParams& k,
                                      const std::vector<spaces::AnalyticFn>& battery, const quad::QuadConfig& cfg,
                                      const TrendConfig& tc = {}) {
  if (battery.empty()) throw DomainError("key_lemma_check: empty function battery");
  const auto P = key_lemma_params(k);
  const int n = mu.dim();
  KeyLemmaReport rep;
  rep.lambda = P.lambda;
  rep.gamma = P.gamma;
  const auto pts = measures::discretize(measures::flatten(mu), cfg.scaled(0.25));
  const auto outer = quad::ball_rule(n, cfg.scaled(0.125), std::nullopt);
  const double power = n + 1 + k.s + k.alpha1;
  for (const auto& f : battery) {
    require_dim(mu, f.dim, "key_lemma_check");
    std::vector<double> fr(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) fr[i] = pts[i].mass * std::pow(std::abs(f(pts[i].z)), k.r);
    std::vector<double> vals(outer.size());
    parallel_for(outer.size(), [&](std::size_t i) {
      const auto& nd = outer[i];
      std::vector<double> terms(pts.size());
      for (std::size_t j = 0; j < pts.size(); ++j)
        terms[j] = fr[j] * std::pow(std::norm(1.0 - inner(nd.z, pts[j].z)), -0.5 * power);
      const double sf = std::pow(nd.omz2, k.s) * pairwise_sum(terms);
      vals[i] = nd.weight * std::pow(nd.omz2, k.alpha1) * std::pow(sf, k.q);
    });
    const double s_norm = std::pow(quad::normalizing_constant(n, k.alpha1) * pairwise_sum(vals), 1.0 / k.q);
    const double f_norm = spaces::bergman_norm(f, k.p, k.alpha2, cfg);
    if (!(f_norm > 0.0)) continue;
    const double ratio = s_norm / std::pow(f_norm, k.r);
    if (ratio > rep.k_est) rep.k_est = ratio, rep.argmax = f.descriptor;
  }
  NormOptions opt;
  opt.lower_bound = false;
  rep.carleson_norm = carleson_norm(mu, P, cfg, tc, opt).value;
  rep.ratio = rep.carleson_norm > 0.0 ? rep.k_est / rep.carleson_norm : (rep.k_est == 0.0 ? 1.0 : 0.0);
  return rep;
}

// ---------------------------------------------------------------------------
// Product inequality.

struct ProductReport {
  double lambda = 0.0, gamma = 0.0;
  double c_est = 0.0;
  std::string argmax;
  int evaluated = 0;
  double carleson_norm = 0.0;
  double ratio = 0.0;
};

/// C_est = max over tuples of kernels (f_1..f_k) of int prod |f_i|^{q_i} dmu / prod ||f_i||_{p_i,alpha_i}^{q_i}.
/// The tuples are: all f_i = 1; coincident base points on every probe and atom; `trials` seeded random base-point choices.
inline ProductReport product_inequality_check(const measures::MeasureSpec& mu, const std::vector<Tuple>& tuples,
                                              int trials, std::uint64_t seed, const quad::QuadConfig& cfg,
                                              const TrendConfig& tc = {}, std::optional<double> norm = std::nullopt,
                                              const NormOptions& opt = {}) {
  const auto P = derive_params(tuples);
  if (trials < 0) throw DomainError("product_inequality_check: trials must be >= 0");
  const int n = mu.dim();
  const auto flat = measures::flatten(mu);
  ProductReport rep;
  rep.lambda = P.lambda;
  rep.gamma = P.gamma;
  const std::size_t k = tuples.size();

  rep.c_est = measures::integrate<double>(measures::discretize(flat, cfg), [](const Point&, double) { return 1.0; });
  rep.argmax = "constants";
  rep.evaluated = 1;

  const auto radii = dyadic_radii(tc.shells);
  const auto dirs = probe_rays(n, is_radial(flat) ? 1 : tc.rays);
  std::vector<Point> probes;
  for (double t : radii)
    for (const auto& d : dirs) probes.push_back(Point::on_ray(d.coords(), t));
  for (const auto& a : flat.atoms) probes.push_back(a.point);

  // Kernel norms depend only on |a|.
  std::vector<std::vector<double>> norms(k, std::vector<double>(probes.size()));
  std::vector<double> sig(k);
  for (std::size_t i = 0; i < k; ++i) {
    sig[i] = battery_sigma(n, tuples[i].p, tuples[i].alpha);
    std::map<double, double> by_radius;
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const double t = probes[j].norm();
      auto it = by_radius.find(t);
      if (it == by_radius.end())
        it = by_radius
                 .emplace(t, std::pow(kernel_norm(Point::on_ray(dirs.front().coords(), t), sig[i],
                                                  tuples[i].p, tuples[i].alpha, cfg),
                                      tuples[i].q))
                 .first;
      norms[i][j] = it->second;
    }
  }
  auto consider = [&](const std::vector<std::size_t>& idx) {
    double rhs = 1.0;
    std::size_t lead = idx.front();
    double total_power = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      rhs *= norms[i][idx[i]];
      total_power += sig[i] * tuples[i].q;
      if (probes[idx[i]].norm() > probes[lead].norm()) lead = idx[i];
    }
    double lhs;
    if (std::all_of(idx.begin(), idx.end(), [&](std::size_t v) { return v == idx.front(); })) {
      lhs = measures::kernel_integral(flat, probes[idx.front()], total_power, cfg);
    } else {
      lhs = measures::integrate<double>(
          measures::discretize(flat, cfg, measures::KernelHint{probes[lead], total_power}), [&](const Point& w, double) {
            double v = 1.0;
            for (std::size_t i = 0; i < k; ++i)
              v *= std::pow(std::norm(1.0 - inner(w, probes[idx[i]])), -0.5 * sig[i] * tuples[i].q);
            return v;
          });
    }
    ++rep.evaluated;
    const double ratio = lhs / rhs;
    if (ratio > rep.c_est) {
      rep.c_est = ratio;
      rep.argmax = "kernels at |a| =";
      for (std::size_t i = 0; i < k; ++i) rep.argmax += " " + spaces::detail::fmt(probes[idx[i]].norm());
    }
  };
  for (std::size_t p = 0; p < probes.size(); ++p) consider(std::vector<std::size_t>(k, p));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, probes.size() - 1);
  for (int trial = 0; trial < trials && k > 1; ++trial) {
    std::vector<std::size_t> idx(k);
    for (auto& v : idx) v = pick(rng);
    consider(idx);
  }
  NormOptions o = opt;
  o.lower_bound = false;
  rep.carleson_norm = norm ? *norm : carleson_norm(mu, P, cfg, tc, o).value;
  rep.ratio = rep.carleson_norm > 0.0 ? rep.c_est / rep.carleson_norm : (rep.c_est == 0.0 ? 1.0 : 0.0);
  return rep;
}

}  // namespace carleson_lab::carleson
