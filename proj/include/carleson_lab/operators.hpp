#pragma once

// Toeplitz operators T_mu^beta between weighted Bergman spaces, and the
// extended Cesaro, companion and multiplication operators J_g, I_g, M_g.

#include <algorithm>
#include <limits>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "carleson_lab/carleson.hpp"
#include "carleson_lab/lattice.hpp"
#include "carleson_lab/measures.hpp"
#include "carleson_lab/quadrature.hpp"
#include "carleson_lab/spaces.hpp"

namespace carleson_lab::operators {

using carleson::TrendConfig;
using carleson::Verdict;
using spaces::AnalyticFn;

// ---------------------------------------------------------------------------
// Toeplitz operators.

struct ToeplitzSpec {
  measures::MeasureSpec mu;
  double beta = 0.0;
  double p1 = 2.0, alpha1 = 0.0;
  double p2 = 2.0, alpha2 = 0.0;
};

/// Empty when the spec is admissible, otherwise the failing condition.
inline std::optional<std::string> toeplitz_violation(const ToeplitzSpec& spec) {
  const int n = spec.mu.dim();
  if (!(spec.beta > -1.0)) return "beta > -1 fails (beta = " + spaces::detail::fmt(spec.beta) + ")";
  const double ps[2] = {spec.p1, spec.p2}, as[2] = {spec.alpha1, spec.alpha2};
  for (int i = 0; i < 2; ++i) {
    const std::string idx = std::to_string(i + 1);
    if (!(ps[i] > 0.0)) return "p" + idx + " > 0 fails";
    if (!(as[i] > -1.0)) return "alpha" + idx + " > -1 fails";
    const double lhs = n + 1 + spec.beta;
    const double rhs = n * std::max(1.0, 1.0 / ps[i]) + (1.0 + as[i]) / ps[i];
    if (!(lhs > rhs))
      return "n+1+beta > n*max(1,1/p" + idx + ") + (1+alpha" + idx + ")/p" + idx + " fails: " +
             spaces::detail::fmt(lhs) + " <= " + spaces::detail::fmt(rhs);
  }
  if (!(1.0 + 1.0 / spec.p1 - 1.0 / spec.p2 > 0.0)) return "lambda = 1 + 1/p1 - 1/p2 > 0 fails";
  return std::nullopt;
}

inline void check_toeplitz(const ToeplitzSpec& spec) {
  if (auto v = toeplitz_violation(spec)) throw DomainError("toeplitz: " + *v);
}

/// lambda = 1 + 1/p1 - 1/p2, gamma = (beta + alpha1/p1 - alpha2/p2) / lambda.
inline carleson::CarlesonParams toeplitz_params(const ToeplitzSpec& spec) {
  check_toeplitz(spec);
  const double lambda = 1.0 + 1.0 / spec.p1 - 1.0 / spec.p2;
  const double gamma = (spec.beta + spec.alpha1 / spec.p1 - spec.alpha2 / spec.p2) / lambda;
  return carleson::params_from(lambda, gamma);
}

namespace detail {

/// base^{-e}, by repeated multiplication when e is a small non-negative integer.
inline cplx inverse_power(cplx base, double e) {
  if (e == std::round(e) && e >= 0.0 && e <= 32.0) {
    const cplx inv = 1.0 / base;
    cplx out = 1.0;
    for (int k = 0; k < static_cast<int>(e); ++k) out *= inv;
    return out;
  }
  return std::pow(base, -e);
}

inline double kernel_order(const ToeplitzSpec& spec) { return spec.mu.dim() + 1 + spec.beta; }

}  // namespace detail

inline constexpr double kAngularReach = 40.0;
inline constexpr int kMaxAngular = 16384;

/// T f(z) = int f(w) (1 - <z,w>)^{-(n+1+beta)} dmu(w); a finite sum for atoms.
inline cplx toeplitz_apply(const ToeplitzSpec& spec, const AnalyticFn& f, const Point& z, const quad::QuadConfig& cfg) {
  check_toeplitz(spec);
  if (f.dim != spec.mu.dim()) throw DomainError("toeplitz_apply: dimension mismatch");
  const double order = detail::kernel_order(spec);
  std::optional<measures::KernelHint> hint;
  const auto pk = f.peak();
  if (pk && !(z.norm() >= 0.95 && z.norm() > pk->norm())) {
    hint = measures::KernelHint{*pk, f.peak_order()};
  } else if (z.norm() >= 0.95) {
    hint = measures::KernelHint{z, order};
  }
  const auto flat = measures::flatten(spec.mu);
  if (flat.dim == 1 && hint && hint->center == z && carleson::is_radial(flat)) {
    // The kernel is analytic in conj(w) with radius 1/|z|: a plain trapezoid with
    // enough angular nodes beats clustering, which loses exactness on f.
    quad::QuadConfig wide = cfg;
    const double need = kAngularReach / (1.0 - z.norm());
    wide.angular_nodes = std::max(cfg.angular_nodes, std::min(kMaxAngular, 64 * static_cast<int>(std::ceil(need / 64.0))));
    return measures::integrate<cplx>(
        spec.mu, [&](const Point& w, double) { return f(w) * detail::inverse_power(1.0 - inner(z, w), order); }, wide,
        std::nullopt);
  }
  if (flat.dim == 2 && carleson::is_radial(flat) && z.norm() > 0.0) {
    // mu is unitarily invariant: integrate f(Uw) against the kernel at U*z = |z| e_1,
    // so the rule only has to resolve the kernel in w_1.
    const double r = z.norm();
    const cplx e1 = z[0] / r, e2 = z[1] / r;
    auto rotate = [&](const Point& w) { return Point{w[0] * e1 - w[1] * std::conj(e2), w[0] * e2 + w[1] * std::conj(e1)}; };
    std::optional<measures::KernelHint> rhint;
    if (hint) {
      const Point& a = hint->center;
      rhint = measures::KernelHint{Point{std::conj(e1) * a[0] + std::conj(e2) * a[1], -e2 * a[0] + e1 * a[1]}, hint->power};
    }
    return measures::integrate<cplx>(
        spec.mu,
        [&](const Point& w, double) { return f(rotate(w)) * detail::inverse_power(1.0 - r * std::conj(w[0]), order); },
        cfg, rhint);
  }
  return measures::integrate<cplx>(
      spec.mu, [&](const Point& w, double) { return f(w) * detail::inverse_power(1.0 - inner(z, w), order); }, cfg, hint);
}

/// Outer rule of the random combinations, as a fraction of the configured node counts.
inline constexpr double kToeplitzRuleScale = 0.25;

namespace detail {

inline constexpr int kMaxHyperTerms = 400;

/// Taylor coefficients of 2F1(n-N, n-N; n; y), finite when N - n is an integer.
struct Hyper {
  int n = 1;
  double N = 2.0;
  std::vector<double> c;
};

inline Hyper hyper(int n, double N) {
  Hyper h{n, N, {1.0}};
  const double a = n - N;
  for (int k = 0; k + 1 < kMaxHyperTerms; ++k) {
    const double next = h.c.back() * (a + k) * (a + k) / ((n + k) * (k + 1.0));
    if (next == 0.0 || std::abs(next) < 1e-17) break;
    h.c.push_back(next);
  }
  return h;
}

/// 2F1(N, N; n; y) = (1-y)^{n-2N} 2F1(n-N, n-N; n; y).
inline cplx hyper_value(const Hyper& h, cplx y) {
  cplx s{};
  for (auto it = h.c.rbegin(); it != h.c.rend(); ++it) s = s * y + *it;
  return s * inverse_power(1.0 - y, 2.0 * h.N - h.n);
}

/// Rotation-invariant densities applied to (1 - <w,a>)^{-N}: a function of x = <z,a>,
/// sum_i W_i 2F1(N, N; n; x u_i), the W_i a rule for the law of u = |w|^2 under mu.
struct RadialPart {
  Hyper h;
  std::vector<double> u, W;
  double min_theta = 0.0;

  cplx operator()(cplx x) const {
    cplx s{};
    for (std::size_t i = 0; i < u.size(); ++i) s += W[i] * hyper_value(h, x * u[i]);
    return s;
  }
};

/// Panels in v = 1 - u grow geometrically by this ratio from the support floor to 1.
inline constexpr double kPanelRatio = 4.0;
inline constexpr int kPanelNodes = 8;

inline RadialPart radial_part(const measures::FlatMeasure& flat, double N, const quad::QuadConfig& cfg) {
  const int n = flat.dim;
  RadialPart rp{hyper(n, N), {}, {}, std::numeric_limits<double>::infinity()};
  std::vector<measures::DensityTerm> terms;
  for (const auto& d : flat.densities)
    if (d.h == measures::Builtin::one) terms.push_back(d), rp.min_theta = std::min(rp.min_theta, d.theta);
  if (terms.empty()) return rp;
  const auto gl = quad::gauss_legendre(kPanelNodes);
  double lo = measures::support_floor(cfg);
  while (lo < 1.0) {
    const double hi = std::min(1.0, lo * kPanelRatio);
    for (std::size_t i = 0; i < gl->x.size(); ++i) {
      const double v = lo + (hi - lo) * gl->x[i];
      const double u = 1.0 - v;
      double w = 0.0;
      for (const auto& d : terms) w += d.coef * std::pow(v, d.theta);
      rp.u.push_back(u);
      rp.W.push_back((hi - lo) * gl->w[i] * n * std::pow(u, n - 1) * w);
    }
    lo = hi;
  }
  return rp;
}

/// Evaluates T on kernels (1 - <w,a>)^{-N}, N = n+1+beta: atoms exactly,
/// rotation-invariant densities by RadialPart, other densities by a fixed discretization.
struct ToeplitzEngine {
  int n = 1;
  double N = 2.0;
  std::vector<measures::Atom> atoms;
  std::optional<RadialPart> radial;
  std::vector<measures::WeightedPoint> other;

  ToeplitzEngine(const ToeplitzSpec& spec, const quad::QuadConfig& cfg) : n(spec.mu.dim()), N(kernel_order(spec)) {
    const auto flat = measures::flatten(spec.mu);
    atoms = flat.atoms;
    measures::FlatMeasure rest{n, {}, {}};
    bool any_radial = false;
    for (const auto& d : flat.densities) {
      if (d.h == measures::Builtin::one) {
        any_radial = true;
      } else {
        rest.densities.push_back(d);
      }
    }
    if (any_radial) radial = radial_part(flat, N, cfg);
    if (!rest.densities.empty()) other = measures::discretize(rest, cfg.scaled(0.5));
  }

  bool empty() const { return atoms.empty() && !radial && other.empty(); }
  bool radial_only() const { return atoms.empty() && other.empty() && radial.has_value(); }

  /// T applied to (1 - <w,a>)^{-N}, at z.
  cplx kernel_image(const Point& a, const Point& z) const {
    cplx s{};
    for (const auto& at : atoms)
      s += at.mass * inverse_power(1.0 - inner(at.point, a), N) * inverse_power(1.0 - inner(z, at.point), N);
    if (radial) s += (*radial)(inner(z, a));
    for (const auto& wp : other)
      s += wp.mass * inverse_power(1.0 - inner(wp.z, a), N) * inverse_power(1.0 - inner(z, wp.z), N);
    return s;
  }
};

/// ||T f||_{p2,alpha2} for f = c (1 - <z,a>)^{-N}.
inline double kernel_image_norm(const ToeplitzSpec& spec, const ToeplitzEngine& eng, const Point& a, double c,
                                const quad::QuadConfig& cfg) {
  const int n = eng.n;
  if (eng.empty()) return 0.0;
  if (eng.radial_only()) {
    // T f depends on <z,a> only; under dv_alpha, <z, a/|a|> has law dv_{alpha+n-1} on the disk.
    const double r = a.norm();
    const double alpha = spec.alpha2 + n - 1;
    const double order = std::max(0.0, 2.0 * eng.N - n - 1 - eng.radial->min_theta);
    std::optional<quad::Focus> focus;
    if (r >= measures::kFocusRadius) focus = quad::Focus{Point{cplx(r, 0.0)}, spec.p2 * order > 2 + alpha};
    const auto rule = quad::ball_rule(1, cfg.scaled(0.5), focus);
    const double integral = quad::integrate_nodes<double>(rule, [&](const quad::BallNode& nd) {
      return nd.weight * std::pow(nd.omz2, alpha) * std::pow(std::abs(c * (*eng.radial)(r * nd.z[0])), spec.p2);
    });
    return std::pow(quad::normalizing_constant(1, alpha) * integral, 1.0 / spec.p2);
  }
  // T f concentrates at a for densities and at the heaviest atom otherwise.
  std::optional<Point> center = a;
  quad::QuadConfig outer_cfg = cfg.scaled(0.5);
  if (!eng.radial && eng.other.empty()) {
    outer_cfg = cfg;
    double best = -1.0;
    for (const auto& at : eng.atoms) {
      const double w = at.mass * std::abs(inverse_power(1.0 - inner(at.point, a), eng.N)) *
                       std::pow(1.0 - at.point.norm2(), -(eng.N - (n + 1 + spec.alpha2) / spec.p2));
      if (w > best) best = w, center = at.point;
    }
  }
  std::optional<quad::Focus> focus;
  if (center && center->norm() >= measures::kFocusRadius)
    focus = quad::Focus{*center, spec.p2 * eng.N > n + 1 + spec.alpha2};
  const auto rule = quad::ball_rule(n, outer_cfg, focus);
  const double integral = quad::integrate_nodes<double>(rule, [&](const quad::BallNode& nd) {
    return nd.weight * std::pow(nd.omz2, spec.alpha2) * std::pow(std::abs(c * eng.kernel_image(a, nd.z)), spec.p2);
  });
  return std::pow(quad::normalizing_constant(n, spec.alpha2) * integral, 1.0 / spec.p2);
}

/// Normalization of the test kernel at a: (1-|a|^2)^{N - (n+1+alpha1)/p1}.
inline double test_scale(const ToeplitzSpec& spec, const Point& a) {
  const int n = spec.mu.dim();
  return std::pow(1.0 - a.norm2(), kernel_order(spec) - (n + 1 + spec.alpha1) / spec.p1);
}

}  // namespace detail

/// f_a(z) = (1-|a|^2)^{(n+1+beta) - (n+1+alpha1)/p1} (1 - <z,a>)^{-(n+1+beta)}.
inline AnalyticFn toeplitz_test_function(const ToeplitzSpec& spec, const Point& a) {
  return spaces::kernel_test_function(a, detail::kernel_order(spec), detail::test_scale(spec, a));
}

/// ||T f_a||_{p2,alpha2} / ||f_a||_{p1,alpha1} along dyadic radii; max over probe rays.
struct FamilyTrend {
  std::vector<double> radii;
  std::vector<double> values;
  double best = 0.0;
  std::string maximizer;
};

inline FamilyTrend toeplitz_family(const ToeplitzSpec& spec, const quad::QuadConfig& cfg, const TrendConfig& tc = {}) {
  check_toeplitz(spec);
  const int n = spec.mu.dim();
  const detail::ToeplitzEngine eng(spec, cfg);
  FamilyTrend out;
  out.radii = carleson::dyadic_radii(tc.shells);
  const auto dirs = carleson::probe_rays(n, carleson::is_radial(measures::flatten(spec.mu)) ? 1 : tc.rays);
  for (double t : out.radii) {
    double shell = 0.0;
    for (const auto& d : dirs) {
      const Point a = Point::on_ray(d.coords(), t);
      const auto f = toeplitz_test_function(spec, a);
      const double fn = spaces::bergman_norm(f, spec.p1, spec.alpha1, cfg);
      if (!(fn > 0.0) || !std::isfinite(fn)) continue;
      const double v = detail::kernel_image_norm(spec, eng, a, detail::test_scale(spec, a), cfg) / fn;
      shell = std::max(shell, v);
      if (v > out.best) out.best = v, out.maximizer = f.descriptor;
    }
    out.values.push_back(shell);
  }
  return out;
}

struct ToeplitzNormEstimate {
  double value = 0.0;
  std::string maximizer;
  int evaluated = 0;
  std::uint64_t seed = 0;
};

/// Lattice points used by the random combinations lie within 1 - 2^{-kComboShells}.
inline constexpr int kComboShells = 4;
inline constexpr std::size_t kComboPoints = 48;

/// Lower-bound estimate of ||T||: single normalized kernels at the probe points,
/// then seeded random +-1 combinations of normalized kernels at lattice points.
inline ToeplitzNormEstimate toeplitz_norm_estimate(const ToeplitzSpec& spec, const lattice::Lattice& lat, int trials,
                                                   std::uint64_t seed, const quad::QuadConfig& cfg,
                                                   const TrendConfig& tc = {},
                                                   const FamilyTrend* family = nullptr) {
  check_toeplitz(spec);
  const int n = spec.mu.dim();
  if (lat.dim != n) throw DomainError("toeplitz_norm_estimate: lattice dimension mismatch");
  if (trials < 0) throw DomainError("toeplitz_norm_estimate: trials must be >= 0");
  ToeplitzNormEstimate out;
  out.seed = seed;
  const detail::ToeplitzEngine eng(spec, cfg);
  if (eng.empty()) return out;

  std::optional<FamilyTrend> own;
  if (!family) family = &own.emplace(toeplitz_family(spec, cfg, tc));
  out.value = family->best;
  out.maximizer = family->maximizer;
  out.evaluated = static_cast<int>(family->values.size());
  for (const auto& at : eng.atoms) {
    const auto f = toeplitz_test_function(spec, at.point);
    const double fn = spaces::bergman_norm(f, spec.p1, spec.alpha1, cfg);
    ++out.evaluated;
    if (!(fn > 0.0) || !std::isfinite(fn)) continue;
    const double v = detail::kernel_image_norm(spec, eng, at.point, detail::test_scale(spec, at.point), cfg) / fn;
    if (v > out.value) out.value = v, out.maximizer = f.descriptor;
  }
  if (trials == 0) return out;

  std::vector<Point> base;
  const double rmax = 1.0 - std::ldexp(1.0, -kComboShells);
  for (const auto& a : lat.points)
    if (a.norm() <= rmax && base.size() < kComboPoints) base.push_back(a);
  if (base.empty()) return out;
  const std::size_t J = base.size();
  std::vector<double> scale(J);
  for (std::size_t j = 0; j < J; ++j) scale[j] = detail::test_scale(spec, base[j]);

  // T and the identity on the kernels, sampled on one outer rule.
  const auto outer = quad::cached_ball_rule(n, cfg.scaled(kToeplitzRuleScale));
  const std::size_t M = outer->size();
  std::vector<cplx> tcol(M * J), fcol(M * J);
  parallel_for(M, [&](std::size_t i) {
    const Point& z = (*outer)[i].z;
    for (std::size_t j = 0; j < J; ++j) {
      tcol[i * J + j] = scale[j] * eng.kernel_image(base[j], z);
      fcol[i * J + j] = scale[j] * detail::inverse_power(1.0 - inner(z, base[j]), eng.N);
    }
  });

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  const double c1 = quad::normalizing_constant(n, spec.alpha1), c2 = quad::normalizing_constant(n, spec.alpha2);
  std::vector<double> eps(J);
  for (int trial = 0; trial < trials; ++trial) {
    for (auto& e : eps) e = coin(rng) ? 1.0 : -1.0;
    auto norm_of = [&](const std::vector<cplx>& col, double p, double alpha) {
      return quad::integrate_nodes<double>(*outer, [&](const quad::BallNode& nd) {
        const std::size_t i = static_cast<std::size_t>(&nd - outer->data());
        cplx s{};
        for (std::size_t j = 0; j < J; ++j) s += eps[j] * col[i * J + j];
        return nd.weight * std::pow(nd.omz2, alpha) * std::pow(std::abs(s), p);
      });
    };
    const double tn = norm_of(tcol, spec.p2, spec.alpha2);
    const double fn = norm_of(fcol, spec.p1, spec.alpha1);
    ++out.evaluated;
    if (!(fn > 0.0)) continue;
    const double ratio = std::pow(c2 * tn, 1.0 / spec.p2) / std::pow(c1 * fn, 1.0 / spec.p1);
    if (ratio > out.value) {
      out.value = ratio;
      out.maximizer = "random_combination(trial=" + std::to_string(trial) + ",points=" + std::to_string(J) + ")";
    }
  }
  return out;
}

struct ToeplitzReport {
  double lambda = 1.0, gamma = 0.0;
  carleson::NormReport carleson;
  ToeplitzNormEstimate estimate;
  FamilyTrend family;
  double slope = 0.0;
  Verdict operator_verdict = Verdict::inconclusive;  // carleson = bounded
  double ratio = 1.0;
  bool consistent = false;
};

struct ToeplitzOptions {
  const lattice::Lattice* lat = nullptr;  // combination points and the lambda < 1 route
  int trials = 64;
  std::uint64_t seed = 20140101;
  carleson::NormOptions norm;
};

/// Boundedness of T against the (lambda, gamma)-Carleson property of mu.
/// The operator verdict is the bounded-trend rule on the normalized kernel family.
inline ToeplitzReport toeplitz_equivalence_check(const ToeplitzSpec& spec, const quad::QuadConfig& cfg,
                                                 const TrendConfig& tc = {}, const ToeplitzOptions& opt = {}) {
  ToeplitzReport rep;
  const auto P = toeplitz_params(spec);
  rep.lambda = P.lambda;
  rep.gamma = P.gamma;
  const int n = spec.mu.dim();
  std::optional<lattice::Lattice> own;
  const lattice::Lattice* lat = opt.lat;
  if (!lat) lat = &own.emplace(carleson::default_lattice(n, tc));
  carleson::NormOptions no = opt.norm;
  if (!no.lat) no.lat = lat;
  no.lower_bound = false;
  rep.carleson = carleson::carleson_norm(spec.mu, P, cfg, tc, no);
  rep.family = toeplitz_family(spec, cfg, tc);
  rep.operator_verdict = carleson::bounded_trend(rep.family.radii, rep.family.values, tc, &rep.slope);
  rep.estimate = toeplitz_norm_estimate(spec, *lat, opt.trials, opt.seed, cfg, tc, &rep.family);
  const double a = rep.estimate.value, b = rep.carleson.value;
  if (a == 0.0 && b == 0.0) {
    rep.ratio = 1.0;
  } else {
    rep.ratio = b > 0.0 ? a / b : std::numeric_limits<double>::infinity();
  }
  const bool agree = rep.operator_verdict == rep.carleson.verdict && rep.operator_verdict != Verdict::inconclusive;
  const bool in_bracket = rep.ratio <= tc.route_bracket && rep.ratio >= 1.0 / tc.route_bracket;
  rep.consistent = agree && (rep.operator_verdict != Verdict::carleson || in_bracket);
  return rep;
}

struct CompactnessReport {
  std::vector<double> radii;
  std::vector<double> values;
  double slope = 0.0;
  bool compact = false;
  carleson::VanishingReport vanishing;
  bool agrees = false;
};

/// ||T f_k|| for the normalized family along dyadic radii; compact iff the sequence
/// trends to 0 under the vanishing rule. Cross-checked with vanishing_probe.
inline CompactnessReport toeplitz_compactness_probe(const ToeplitzSpec& spec, const quad::QuadConfig& cfg,
                                                    const TrendConfig& tc = {}, const carleson::NormOptions& opt = {},
                                                    const FamilyTrend* family = nullptr) {
  CompactnessReport rep;
  const auto P = toeplitz_params(spec);
  std::optional<FamilyTrend> own;
  if (!family) family = &own.emplace(toeplitz_family(spec, cfg, tc));
  rep.radii = family->radii;
  rep.values = family->values;
  rep.slope = spaces::tail_slope(rep.radii, rep.values);
  const double peak = rep.values.empty() ? 0.0 : *std::max_element(rep.values.begin(), rep.values.end());
  rep.compact = peak == 0.0 || spaces::vanishing_rule(rep.radii, rep.values, tc.vanish_rel, tc.vanish_slope);
  rep.vanishing = carleson::vanishing_probe(spec.mu, P, std::nullopt, cfg, tc, opt);
  rep.agrees = rep.compact == rep.vanishing.vanishing;
  return rep;
}

// ---------------------------------------------------------------------------
// J_g, I_g, M_g.

inline constexpr int kRayNodes = 64;

inline void check_symbol(const AnalyticFn& g) {
  const cplx r0 = g.R(Point::origin(g.dim));
  if (std::abs(r0) > 1e-12) throw DomainError("symbol " + g.descriptor + ": Rg(0) must vanish");
}

/// J_g f(z) = int_0^1 f(tz) Rg(tz) dt / t. Rg(tz) / t stays bounded as t -> 0, so the
/// Gauss nodes never see a singularity.
inline cplx cesaro_apply(const AnalyticFn& g, const AnalyticFn& f, const Point& z, int nodes = kRayNodes) {
  const auto gl = quad::gauss_legendre(nodes);
  cplx s{};
  for (std::size_t i = 0; i < gl->x.size(); ++i) {
    const double t = gl->x[i];
    const Point tz = spaces::detail::scale_point(z, t);
    s += gl->w[i] * f(tz) * g.R(tz) / t;
  }
  return s;
}

/// I_g f(z) = int_0^1 Rf(tz) g(tz) dt / t.
inline cplx companion_apply(const AnalyticFn& g, const AnalyticFn& f, const Point& z, int nodes = kRayNodes) {
  const auto gl = quad::gauss_legendre(nodes);
  cplx s{};
  for (std::size_t i = 0; i < gl->x.size(); ++i) {
    const double t = gl->x[i];
    const Point tz = spaces::detail::scale_point(z, t);
    s += gl->w[i] * f.R(tz) * g(tz) / t;
  }
  return s;
}

inline cplx multiplier_apply(const AnalyticFn& g, const AnalyticFn& f, const Point& z) { return g(z) * f(z); }

enum class OperatorKind { cesaro, companion, multiplier };

inline const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::cesaro: return "J_g";
    case OperatorKind::companion: return "I_g";
    case OperatorKind::multiplier: return "M_g";
  }
  return "?";
}

/// The image function, with its radial derivative from R(J_g f) = f Rg,
/// R(I_g f) = g Rf and R(M_g f) = f Rg + g Rf.
inline AnalyticFn apply_operator(OperatorKind kind, const AnalyticFn& g, const AnalyticFn& f) {
  if (g.dim != f.dim) throw DomainError("apply_operator: dimension mismatch");
  AnalyticFn h;
  h.dim = f.dim;
  switch (kind) {
    case OperatorKind::cesaro:
      check_symbol(g);
      h.value = [g, f](const Point& z) { return cesaro_apply(g, f, z); };
      h.radial = [g, f](const Point& z) { return f(z) * g.R(z); };
      break;
    case OperatorKind::companion:
      h.value = [g, f](const Point& z) { return companion_apply(g, f, z); };
      h.radial = [g, f](const Point& z) { return g(z) * f.R(z); };
      break;
    case OperatorKind::multiplier:
      h.value = [g, f](const Point& z) { return g(z) * f(z); };
      h.radial = [g, f](const Point& z) { return f(z) * g.R(z) + g(z) * f.R(z); };
      break;
  }
  h.descriptor = std::string(to_string(kind)) + "[" + g.descriptor + "](" + f.descriptor + ")";
  if (f.peak()) h.hint = spaces::Peak{*f.peak(), f.peak_order()};
  return h;
}

inline constexpr int kCauchyNodes = 64;

struct IdentityReport {
  double cesaro = 0.0, companion = 0.0, multiplier = 0.0;
  /// |R(M_g f - J_g f - I_g f)|: the difference is constant along rays.
  double ray_constant = 0.0;
  int probes = 0;
};

/// Largest |R(T f) - identity| / max(1, |identity|) over seeded probes |z| <= rmax,
/// with R(T f) from the Cauchy integral of the ray-quadrature values.
inline IdentityReport operator_identities(const AnalyticFn& g, const AnalyticFn& f, int probes, std::uint64_t seed,
                                          double rmax = 0.9) {
  check_symbol(g);
  IdentityReport rep;
  rep.probes = probes;
  const int n = f.dim;
  std::vector<Point> zs;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < probes; ++i) {
    std::array<cplx, kMaxDim> c{};
    for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = cplx(gauss(rng), gauss(rng));
    const Point dir = Point::on_ray(std::span<const cplx>(c.data(), static_cast<std::size_t>(n)), 0.5);
    zs.push_back(Point::on_ray(dir.coords(), rmax * std::pow(unif(rng), 1.0 / (2.0 * n)) + 1e-3));
  }
  const AnalyticFn J = apply_operator(OperatorKind::cesaro, g, f);
  const AnalyticFn I = apply_operator(OperatorKind::companion, g, f);
  const AnalyticFn M = apply_operator(OperatorKind::multiplier, g, f);
  std::vector<std::array<double, 4>> errs(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) {
    const Point& z = zs[i];
    auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    const cplx rj = spaces::radial_derivative_cauchy(J.value, z, kCauchyNodes);
    const cplx ri = spaces::radial_derivative_cauchy(I.value, z, kCauchyNodes);
    const cplx rm = spaces::radial_derivative_cauchy(M.value, z, kCauchyNodes);
    errs[i] = {rel(rj, J.R(z)), rel(ri, I.R(z)), rel(rm, M.R(z)),
               std::abs(rm - rj - ri) / std::max(1.0, std::abs(rm))};
  });
  for (const auto& e : errs) {
    rep.cesaro = std::max(rep.cesaro, e[0]);
    rep.companion = std::max(rep.companion, e[1]);
    rep.multiplier = std::max(rep.multiplier, e[2]);
    rep.ray_constant = std::max(rep.ray_constant, e[3]);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Boundedness from A^t_alpha into F(p, p beta - n - 1, s).

struct Section5Params {
  double t = 2.0;
  double alpha = 1.0;
  double p = 2.0;
  double beta = 2.5;
  double s = 2.0;
};

/// Regimes of I_g and M_g: beta against 1 + (n+1+alpha)/t.
enum class Regime { bloch, bounded_analytic, zero };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::bloch: return "bloch";
    case Regime::bounded_analytic: return "h_infinity";
    case Regime::zero: return "zero";
  }
  return "?";
}

inline Regime regime_for(int n, const Section5Params& sp) {
  const double crit = 1.0 + (n + 1 + sp.alpha) / sp.t;
  if (std::abs(sp.beta - crit) <= 1e-12 * crit) return Regime::bounded_analytic;
  return sp.beta > crit ? Regime::bloch : Regime::zero;
}

/// Empty when the hypotheses hold, otherwise the failing inequality.
inline std::optional<std::string> section5_violation(int n, OperatorKind kind, const Section5Params& sp) {
  if (!(sp.p > 0.0)) return "p > 0 fails";
  if (!(sp.t > 0.0)) return "t > 0 fails";
  if (!(sp.s >= 0.0)) return "s >= 0 fails";
  if (!(sp.alpha > -1.0)) return "alpha > -1 fails";
  if (kind == OperatorKind::cesaro) {
    if (!(sp.alpha > 0.0)) return "alpha > 0 fails";
    if (!(sp.beta > -1.0)) return "beta > -1 fails";
    if (!(sp.beta - (n + 1 + sp.alpha) / sp.t > 0.0))
      return "beta - (n+1+alpha)/t > 0 fails: " + spaces::detail::fmt(sp.beta - (n + 1 + sp.alpha) / sp.t) + " <= 0";
  } else if (!(sp.beta > 0.0)) {
    return "beta > 0 fails";
  }
  if (!(sp.p * sp.beta + sp.s > n))
    return "p*beta + s > n fails: " + spaces::detail::fmt(sp.p * sp.beta + sp.s) + " <= " + std::to_string(n);
  // Some delta > -1 with p/t + s/(n+1+delta) >= 1: s/(n+1+delta) has supremum s/n, not attained.
  const double pt = sp.p / sp.t;
  if (!(pt >= 1.0 || pt + sp.s / n > 1.0)) return "p/t + s/(n+1+delta) >= 1 fails for every delta > -1";
  return std::nullopt;
}

struct Side {
  double value = 0.0;
  std::vector<double> values;
  double slope = 0.0;
  bool bounded = false;
  bool compact = false;
};

struct OperatorReport {
  std::string op;
  std::string symbol;
  std::string regime;  // symbol condition: bloch, h_infinity or zero
  Section5Params params;
  std::vector<double> radii;
  Side operator_side;   // value: max over the battery of ||T f||_F / ||f||_{t,alpha}
  Side symbol_side;     // value: the symbol norm of the regime
  std::string maximizer;
  double ratio = 1.0;
  bool consistent = false;
};

struct Section5Options {
  double eta = 1.0;          // extremal family exponent
  int battery_shells = 6;    // fpqs probes for the battery maximum
  bool battery = true;
  spaces::ProbeConfig probes;
};

namespace detail {

/// f_a = (1-|a|^2)^eta (1 - <z,a>)^{-(eta + (n+1+alpha)/t)}.
inline AnalyticFn extremal_function(const Point& a, double eta, double alpha, double t) {
  const int n = a.dim();
  return spaces::kernel_test_function(a, eta + (n + 1 + alpha) / t, std::pow(1.0 - a.norm2(), eta));
}

/// Max over directions of F at radii 1 - 2^{-j}.
template <class F>
std::vector<double> shell_sup(int n, const std::vector<double>& radii, int angles, F&& F_) {
  const auto dirs = spaces::probe_directions(n, angles);
  std::vector<double> out;
  for (double r : radii) {
    std::vector<double> v(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t i) { v[i] = F_(Point::on_ray(dirs[i].coords(), r)); });
    out.push_back(*std::max_element(v.begin(), v.end()));
  }
  return out;
}

inline bool is_identically_zero(const AnalyticFn& g, const spaces::ProbeConfig& pc) {
  const auto sup = spaces::sup_on_grid(g.dim, [&](const Point& z) { return std::abs(g(z)); }, pc);
  return sup.value == 0.0;
}

}  // namespace detail

/// Operator side against the symbol condition for J_g (kind = cesaro) or the
/// I_g / M_g trichotomy. Boundedness uses the bounded-trend rule on the
/// extremal family and on the symbol's shell maxima; compactness the vanishing rule.
inline OperatorReport operator_check(OperatorKind kind, const AnalyticFn& g, const Section5Params& sp,
                                     const quad::QuadConfig& cfg, const TrendConfig& tc = {},
                                     const Section5Options& opt = {}) {
  const int n = g.dim;
  if (auto v = section5_violation(n, kind, sp)) throw DomainError(std::string(to_string(kind)) + ": " + *v);
  if (kind == OperatorKind::cesaro) check_symbol(g);
  OperatorReport rep;
  rep.op = to_string(kind);
  rep.symbol = g.descriptor;
  rep.params = sp;
  const double sigma = sp.beta - (n + 1 + sp.alpha) / sp.t;
  const Regime regime = kind == OperatorKind::cesaro ? Regime::bloch : regime_for(n, sp);
  rep.regime = to_string(regime);
  rep.radii = carleson::dyadic_radii(tc.shells);
  const double q = sp.p * sp.beta - n - 1;

  // Symbol side.
  Side& S = rep.symbol_side;
  Point dir = Point::on_ray(carleson::probe_rays(n, 1).front().coords(), 0.5);
  const bool zero = detail::is_identically_zero(g, opt.probes);
  if (regime == Regime::bloch) {
    const auto sup = spaces::bloch_norm(g, sigma, opt.probes);
    // I_g and M_g see g itself, so their symbol norm carries |g(0)|.
    S.value = sup.value + (kind == OperatorKind::cesaro ? 0.0 : std::abs(g(Point::origin(n))));
    if (sup.value > 0.0) dir = sup.argmax;
    S.values = detail::shell_sup(n, rep.radii, opt.probes.angles,
                                 [&](const Point& z) { return std::abs(g.R(z)) * std::pow(1.0 - z.norm2(), sigma); });
    const auto little = spaces::little_bloch_probe(g, sigma, opt.probes);
    S.compact = little.verdict == "vanishing" || zero;
  } else if (regime == Regime::bounded_analytic) {
    const auto sup = spaces::sup_on_grid(n, [&](const Point& z) { return std::abs(g(z)); }, opt.probes);
    S.value = sup.value;
    if (sup.value > 0.0 && sup.argmax.norm() > 0.0) dir = sup.argmax;
    S.values = detail::shell_sup(n, rep.radii, opt.probes.angles, [&](const Point& z) { return std::abs(g(z)); });
    S.compact = zero;
  } else {
    S.value = zero ? 0.0 : spaces::sup_on_grid(n, [&](const Point& z) { return std::abs(g(z)); }, opt.probes).value;
    S.values.assign(rep.radii.size(), S.value);
    S.compact = zero;
  }
  S.slope = carleson::detail::positive_tail_slope(rep.radii, S.values);
  if (regime == Regime::zero) {
    S.bounded = zero;
  } else {
    S.bounded = zero || carleson::bounded_trend(rep.radii, S.values, tc) == Verdict::carleson;
  }

  // Operator side: the extremal family along the ray of the symbol's maximizer.
  Side& O = rep.operator_side;
  std::vector<Point> ray;
  for (double t : rep.radii) ray.push_back(Point::on_ray(dir.coords(), t));
  for (std::size_t j = 0; j < ray.size(); ++j) {
    const auto f = detail::extremal_function(ray[j], opt.eta, sp.alpha, sp.t);
    const auto h = apply_operator(kind, g, f);
    std::vector<Point> probes{Point::origin(n), ray[j]};
    if (j > 0) probes.push_back(ray[j - 1]);
    if (j + 1 < ray.size()) probes.push_back(ray[j + 1]);
    const double num = spaces::fpqs_norm(h, sp.p, q, sp.s, probes, cfg).value;
    const double den = spaces::bergman_norm(f, sp.t, sp.alpha, cfg);
    O.values.push_back(num / den);
  }
  O.slope = carleson::detail::positive_tail_slope(rep.radii, O.values);
  O.bounded = carleson::bounded_trend(rep.radii, O.values, tc) == Verdict::carleson;
  const double peak = *std::max_element(O.values.begin(), O.values.end());
  O.compact = peak == 0.0 || spaces::vanishing_rule(rep.radii, O.values, tc.vanish_rel, tc.vanish_slope);
  O.value = *std::max_element(O.values.begin(), O.values.end());
  rep.maximizer = "extremal family";

  if (opt.battery) {
    const auto fprobes = spaces::fpqs_default_probes(n, opt.battery_shells);
    for (const auto& f : spaces::function_battery(n)) {
      const double den = spaces::bergman_norm(f, sp.t, sp.alpha, cfg);
      if (!(den > 0.0)) continue;
      const double v = spaces::fpqs_norm(apply_operator(kind, g, f), sp.p, q, sp.s, fprobes, cfg).value / den;
      if (v > O.value) O.value = v, rep.maximizer = f.descriptor;
    }
  }

  if (O.value == 0.0 && S.value == 0.0) {
    rep.ratio = 1.0;
  } else {
    rep.ratio = S.value > 0.0 ? O.value / S.value : std::numeric_limits<double>::infinity();
  }
  rep.consistent = O.bounded == S.bounded && O.compact == S.compact;
  return rep;
}

inline OperatorReport jg_boundedness_check(const AnalyticFn& g, const Section5Params& sp, const quad::QuadConfig& cfg,
                                           const TrendConfig& tc = {}, const Section5Options& opt = {}) {
  return operator_check(OperatorKind::cesaro, g, sp, cfg, tc, opt);
}

inline OperatorReport ig_trichotomy_check(const AnalyticFn& g, const Section5Params& sp, const quad::QuadConfig& cfg,
                                          const TrendConfig& tc = {}, const Section5Options& opt = {}) {
  return operator_check(OperatorKind::companion, g, sp, cfg, tc, opt);
}

inline OperatorReport mg_trichotomy_check(const AnalyticFn& g, const Section5Params& sp, const quad::QuadConfig& cfg,
                                          const TrendConfig& tc = {}, const Section5Options& opt = {}) {
  return operator_check(OperatorKind::multiplier, g, sp, cfg, tc, opt);
}

/// ||f||_{F(p,q,s)} / ||f||_{B^{(n+1+q)/p}} (seminorms; constants skipped).
struct SpaceRatio {
  std::string function;
  double fpqs = 0.0, bloch = 0.0, ratio = 0.0;
};

inline std::vector<SpaceRatio> fpqs_bloch_ratios(int n, double p, double q, double s, const quad::QuadConfig& cfg,
                                                 int shells = 6) {
  spaces::check_fpqs_params(n, p, q, s);
  const double a = (n + 1 + q) / p;
  std::vector<SpaceRatio> out;
  const auto probes = spaces::fpqs_default_probes(n, shells);
  for (const auto& f : spaces::function_battery(n)) {
    const double b = spaces::bloch_norm(f, a).value;
    if (b == 0.0) continue;
    const double fn = spaces::fpqs_norm(f, p, q, s, probes, cfg).value;
    out.push_back({f.descriptor, fn, b, fn / b});
  }
  return out;
}

}  // namespace carleson_lab::operators
