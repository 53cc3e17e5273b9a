#pragma once

// Holomorphic test functions with radial derivatives, and the norms of the
// weighted Bergman, Bloch and F(p,q,s) spaces.

#include <functional>
#include <memory>
#include <random>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "carleson_lab/core.hpp"
#include "carleson_lab/geometry.hpp"
#include "carleson_lab/quadrature.hpp"

namespace carleson_lab::spaces {

/// f(z) = sum_j c_j (1 - <z, a_j>)^{-sigma}.
struct KernelData {
  std::vector<Point> base;
  double sigma = 0.0;
  std::vector<cplx> coefs;
};

/// |f| grows like |1 - <z, center>|^{-order} near the boundary point in the direction of center.
struct Peak {
  Point center;
  double order = 0.0;
};

/// A holomorphic function on B_n with its radial derivative Rf = sum z_k df/dz_k.
struct AnalyticFn {
  int dim = 1;
  std::function<cplx(const Point&)> value;
  std::function<cplx(const Point&)> radial;
  std::string descriptor;
  /// Set for kernel families; lets integrators focus on the base points.
  std::optional<KernelData> kernel;
  /// Growth hint for functions built from others (operator images, products).
  std::optional<Peak> hint;

  cplx operator()(const Point& z) const { return value(z); }
  cplx R(const Point& z) const { return radial(z); }

  /// Point toward which |f| concentrates, if any (largest base point of a kernel family).
  std::optional<Point> peak() const {
    if (hint) return hint->center;
    if (!kernel || kernel->base.empty()) return std::nullopt;
    const Point* best = &kernel->base.front();
    for (const auto& a : kernel->base)
      if (a.norm2() > best->norm2()) best = &a;
    return *best;
  }

  double peak_order() const { return hint ? hint->order : kernel ? kernel->sigma : 0.0; }
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline Point scale_point(const Point& z, cplx t) {
  std::array<cplx, kMaxDim> c{};
  for (int i = 0; i < z.dim(); ++i) c[static_cast<std::size_t>(i)] = t * z[i];
  return Point::from_coords(std::span<const cplx>(c.data(), static_cast<std::size_t>(z.dim())));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Families.

inline AnalyticFn constant(int n, cplx c) {
  Point::check_dim(n);
  return {n, [c](const Point&) { return c; }, [](const Point&) { return cplx{}; },
          "constant(" + detail::fmt(c.real()) + (c.imag() != 0.0 ? "+" + detail::fmt(c.imag()) + "i" : "") + ")",
          std::nullopt, std::nullopt};
}

/// z_1^k (R z_1^k = k z_1^k).
inline AnalyticFn monomial(int n, int k) {
  Point::check_dim(n);
  if (k < 0) throw DomainError("monomial: degree must be >= 0");
  return {n, [k](const Point& z) { return std::pow(z[0], k); },
          [k](const Point& z) { return static_cast<double>(k) * std::pow(z[0], k); }, "z1^" + std::to_string(k),
          std::nullopt, std::nullopt};
}

/// sum_j c_j (1 - <z, a_j>)^{-sigma}, with Rf = sum_j c_j sigma <z,a_j> (1 - <z,a_j>)^{-sigma-1}.
inline AnalyticFn kernel_sum(KernelData data) {
  if (data.base.empty()) throw DomainError("kernel_sum: no base points");
  if (data.coefs.size() != data.base.size()) throw DomainError("kernel_sum: coefficient count mismatch");
  if (!(data.sigma > 0.0)) throw DomainError("kernel_sum: sigma must be > 0");
  const int n = data.base.front().dim();
  for (const auto& a : data.base) require_same_dim(data.base.front(), a, "kernel_sum");
  auto shared = std::make_shared<const KernelData>(data);
  AnalyticFn f;
  f.dim = n;
  f.value = [shared](const Point& z) {
    cplx s{};
    for (std::size_t j = 0; j < shared->base.size(); ++j)
      s += shared->coefs[j] * std::pow(1.0 - inner(z, shared->base[j]), -shared->sigma);
    return s;
  };
  f.radial = [shared](const Point& z) {
    cplx s{};
    for (std::size_t j = 0; j < shared->base.size(); ++j) {
      const cplx za = inner(z, shared->base[j]);
      s += shared->coefs[j] * shared->sigma * za * std::pow(1.0 - za, -shared->sigma - 1.0);
    }
    return s;
  };
  f.descriptor = data.base.size() == 1 ? "kernel(|a|=" + detail::fmt(data.base.front().norm()) + ",sigma=" +
                                             detail::fmt(data.sigma) + ")"
                                       : "kernel_sum(" + std::to_string(data.base.size()) + " points,sigma=" +
                                             detail::fmt(data.sigma) + ")";
  f.kernel = std::move(data);
  return f;
}

/// normalization * (1 - <z, a>)^{-sigma}.
inline AnalyticFn kernel_test_function(const Point& a, double sigma, double normalization = 1.0) {
  return kernel_sum(KernelData{{a}, sigma, {cplx(normalization, 0.0)}});
}

/// g(z) = -log(1 - z_1), Rg = z_1 / (1 - z_1).
inline AnalyticFn g_log(int n) {
  Point::check_dim(n);
  return {n, [](const Point& z) { return -std::log(1.0 - z[0]); }, [](const Point& z) { return z[0] / (1.0 - z[0]); },
          "g_log", std::nullopt, std::nullopt};
}

/// g with Rg = z_1 (1 - z_1)^{-sigma}: g = (1 - (1-z_1)^{1-sigma}) / (1 - sigma), or g_log at sigma = 1.
inline AnalyticFn power_growth(int n, double sigma) {
  if (sigma == 1.0) return g_log(n);
  Point::check_dim(n);
  return {n, [sigma](const Point& z) { return (1.0 - std::pow(1.0 - z[0], 1.0 - sigma)) / (1.0 - sigma); },
          [sigma](const Point& z) { return z[0] * std::pow(1.0 - z[0], -sigma); },
          "power_growth(sigma=" + detail::fmt(sigma) + ")", std::nullopt, std::nullopt};
}

/// Growth hint for an expression whose size is |f| |g|: the outer peak, with the orders added.
inline std::optional<Peak> combine_peaks(const AnalyticFn& f, const AnalyticFn& g) {
  const auto pf = f.peak(), pg = g.peak();
  if (!pf && !pg) return std::nullopt;
  const Point c = !pg || (pf && pf->norm2() >= pg->norm2()) ? *pf : *pg;
  return Peak{c, f.peak_order() + g.peak_order()};
}

/// f * g with R(fg) = f Rg + g Rf.
inline AnalyticFn product(const AnalyticFn& f, const AnalyticFn& g) {
  if (f.dim != g.dim) throw DomainError("product: dimension mismatch");
  AnalyticFn h;
  h.dim = f.dim;
  h.value = [f, g](const Point& z) { return f(z) * g(z); };
  h.radial = [f, g](const Point& z) { return f(z) * g.R(z) + g(z) * f.R(z); };
  h.descriptor = f.descriptor + "*" + g.descriptor;
  h.hint = combine_peaks(f, g);
  return h;
}

/// The function battery "default-v1": 1, z_1, z_1^2, kernels at a e_1 for
/// |a| in {0.5, 0.9, 0.99} and sigma in {1, 2, 4}, and g_log.
inline std::vector<AnalyticFn> function_battery(int n, const std::string& name = "default-v1") {
  if (name != "default-v1") throw DomainError("unknown function battery '" + name + "'");
  std::vector<AnalyticFn> out{constant(n, 1.0), monomial(n, 1), monomial(n, 2)};
  for (double t : {0.5, 0.9, 0.99}) {
    std::array<cplx, kMaxDim> c{cplx(t, 0.0), cplx(0.0, 0.0)};
    const Point a = Point::from_coords(std::span<const cplx>(c.data(), static_cast<std::size_t>(n)));
    for (double sigma : {1.0, 2.0, 4.0}) out.push_back(kernel_test_function(a, sigma));
  }
  out.push_back(g_log(n));
  return out;
}

// ---------------------------------------------------------------------------
// Radial derivative checks.

/// d/dt f(t z) at t = 1 by a five-point central difference.
inline cplx radial_derivative_fd(const std::function<cplx(const Point&)>& f, const Point& z) {
  const double h = 1e-3 * std::min(1.0, (1.0 - z.norm()) / std::max(z.norm(), 1e-300));
  auto ft = [&](double t) { return f(detail::scale_point(z, t)); };
  return (-ft(1 + 2 * h) + 8.0 * ft(1 + h) - 8.0 * ft(1 - h) + ft(1 - 2 * h)) / (12.0 * h);
}

/// d/dt f(t z) at t = 1 by the Cauchy integral over a circle around t = 1.
inline cplx radial_derivative_cauchy(const std::function<cplx(const Point&)>& f, const Point& z, int nodes = 32) {
  const double r = z.norm();
  if (r == 0.0) return {};
  const double rho = std::min(0.5, 0.5 * (1.0 - r) / r);
  cplx s{};
  for (int k = 0; k < nodes; ++k) {
    const cplx e = std::polar(1.0, 2.0 * kPi * k / nodes);
    s += f(detail::scale_point(z, 1.0 + rho * e)) / e;
  }
  return s / (rho * nodes);
}

/// Largest |Rf - FD| / max(1, |Rf|) over seeded probes with |z| <= rmax.
inline double radial_consistency(const AnalyticFn& f, int probes, std::uint64_t seed, double rmax = 0.95) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    std::array<cplx, kMaxDim> c{};
    for (int k = 0; k < f.dim; ++k) c[static_cast<std::size_t>(k)] = cplx(gauss(rng), gauss(rng));
    const Point dir = Point::on_ray(std::span<const cplx>(c.data(), static_cast<std::size_t>(f.dim)), 0.5);
    const Point z = Point::on_ray(dir.coords(), rmax * std::pow(unif(rng), 1.0 / (2.0 * f.dim)) + 1e-3);
    const cplx exact = f.R(z);
    const cplx fd = radial_derivative_fd(f.value, z);
    worst = std::max(worst, std::abs(exact - fd) / std::max(1.0, std::abs(exact)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Bergman norms.

namespace detail {

inline std::optional<quad::Focus> focus_for(const AnalyticFn& f, double p, double alpha) {
  const auto a = f.peak();
  if (!a || a->norm() < 0.5) return std::nullopt;
  const int n = a->dim();
  return quad::Focus{*a, p * f.peak_order() > n + 1 + alpha};
}

}  // namespace detail

inline void check_bergman_params(double p, double alpha) {
  if (!(p > 0.0)) throw DomainError("bergman_norm: p must be > 0");
  if (!(alpha > -1.0)) throw DomainError("bergman_norm: alpha must be > -1");
}

/// ||f||_{p,alpha} = (int |f|^p dv_alpha)^{1/p}.
inline double bergman_norm(const AnalyticFn& f, double p, double alpha, const quad::QuadConfig& cfg) {
  check_bergman_params(p, alpha);
  const double integral =
      quad::integrate_ball([&](const Point& z) { return std::pow(std::abs(f(z)), p); }, alpha, cfg, f.dim,
                           detail::focus_for(f, p, alpha));
  return std::pow(integral, 1.0 / p);
}

struct NormEstimate {
  double value = 0.0;
  bool numerically_infinite = false;
};

/// Evaluates at cfg and at doubled node counts; flags when int |f|^p grows by 10x or more.
inline NormEstimate bergman_norm_checked(const AnalyticFn& f, double p, double alpha, const quad::QuadConfig& cfg) {
  const double coarse = bergman_norm(f, p, alpha, cfg);
  const double fine = bergman_norm(f, p, alpha, cfg.scaled(2.0));
  return {fine, !std::isfinite(fine) || std::pow(fine / coarse, p) >= 10.0};
}

// ---------------------------------------------------------------------------
// Sup norms on probe grids.

struct ProbeConfig {
  int shells = 12;       // dyadic radii 1 - 2^{-j}, j = 1..shells
  int interior = 32;     // extra uniform radii k / interior
  int angles = 64;       // angular resolution (n = 1); n = 2 uses a Hopf grid of similar spacing
  bool refine = true;    // golden-section refinement along the best ray
};

/// Unit directions of C^n used by the probe grids.
inline std::vector<Point> probe_directions(int n, int angles) {
  Point::check_dim(n);
  std::vector<Point> dirs;
  const double r = 0.5;  // directions are stored at radius 1/2
  if (n == 1) {
    for (int k = 0; k < angles; ++k) dirs.push_back(Point{std::polar(r, 2.0 * kPi * k / angles)});
    return dirs;
  }
  const int rings = std::max(2, angles / 8);
  for (int i = 0; i <= rings; ++i) {
    const double phi = 0.5 * kPi * i / rings;
    const int m = std::max(1, static_cast<int>(std::lround(angles / 4 * std::sin(2 * phi))));
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < angles / 4; ++l) {
        const cplx rot = std::polar(r, 2.0 * kPi * l / (angles / 4));
        dirs.push_back(Point{rot * std::cos(phi), rot * std::sin(phi) * std::polar(1.0, 2.0 * kPi * j / m)});
      }
  }
  return dirs;
}

inline std::vector<double> probe_radii(const ProbeConfig& pc) {
  std::vector<double> radii;
  for (int k = 0; k < pc.interior; ++k) radii.push_back(static_cast<double>(k) / pc.interior);
  for (int j = 1; j <= pc.shells; ++j) radii.push_back(1.0 - std::ldexp(1.0, -j));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

struct SupResult {
  double value = 0.0;
  Point argmax;
  /// The maximizer sits on the outermost shell, so the supremum may be unattained.
  bool saturated = false;
};

/// sup over B_n of F(z), F evaluated on the probe grid and refined along the best ray.
template <class F>
SupResult sup_on_grid(int n, F&& F_, const ProbeConfig& pc) {
  const auto dirs = probe_directions(n, pc.angles);
  const auto radii = probe_radii(pc);
  std::vector<double> vals(dirs.size() * radii.size());
  parallel_for(vals.size(), [&](std::size_t i) {
    const auto& d = dirs[i / radii.size()];
    vals[i] = F_(Point::on_ray(d.coords(), radii[i % radii.size()]));
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] > vals[best]) best = i;
  const auto& d = dirs[best / radii.size()];
  const std::size_t ri = best % radii.size();
  SupResult out{vals[best], Point::on_ray(d.coords(), radii[ri]), ri + 1 == radii.size()};
  if (pc.refine && !out.saturated) {
    double lo = ri > 0 ? radii[ri - 1] : 0.0, hi = radii[ri + 1];
    auto g = [&](double t) { return F_(Point::on_ray(d.coords(), t)); };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
      if (f1 > f2) {
        hi = x2, x2 = x1, f2 = f1;
        x1 = hi - inv_phi * (hi - lo), f1 = g(x1);
      } else {
        lo = x1, x1 = x2, f1 = f2;
        x2 = lo + inv_phi * (hi - lo), f2 = g(x2);
      }
    }
    const double t = f1 > f2 ? x1 : x2;
    const double v = std::max(f1, f2);
    if (v > out.value) out = {v, Point::on_ray(d.coords(), t), false};
  }
  return out;
}

/// ||f||_{B^alpha} = sup |Rf(z)| (1-|z|^2)^alpha.
inline SupResult bloch_norm(const AnalyticFn& f, double alpha, const ProbeConfig& pc = {}) {
  if (!(alpha > 0.0)) throw DomainError("bloch_norm: alpha must be > 0");
  return sup_on_grid(f.dim, [&](const Point& z) { return std::abs(f.R(z)) * std::pow(1.0 - z.norm2(), alpha); }, pc);
}

/// sup |f(z)| (1-|z|^2)^beta.
inline SupResult growth_norm(const AnalyticFn& f, double beta, const ProbeConfig& pc = {}) {
  return sup_on_grid(f.dim, [&](const Point& z) { return std::abs(f(z)) * std::pow(1.0 - z.norm2(), beta); }, pc);
}

// ---------------------------------------------------------------------------
// Radial trends.

/// Least-squares slope of log(values) against log(1 - radii) over the tail half.
inline double tail_slope(const std::vector<double>& radii, const std::vector<double>& values) {
  const std::size_t m = values.size();
  const std::size_t start = m / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double cnt = 0;
  for (std::size_t i = start; i < m; ++i) {
    const double x = std::log(1.0 - radii[i]);
    const double y = std::log(std::max(values[i], 1e-300));
    sx += x, sy += y, sxx += x * x, sxy += x * y, cnt += 1;
  }
  const double den = cnt * sxx - sx * sx;
  return den > 0 ? (cnt * sxy - sx * sy) / den : 0.0;
}

struct TrendReport {
  std::vector<double> radii;
  std::vector<double> values;
  double slope = 0.0;
  std::string verdict;
};

/// Vanishing: the last three values decrease, and the final value is below
/// rel_tol times the peak or the tail still decays at rate >= min_slope.
inline bool vanishing_rule(const std::vector<double>& radii, const std::vector<double>& values, double rel_tol = 1e-2,
                           double min_slope = 0.05) {
  const std::size_t m = values.size();
  if (m < 3) return false;
  const double peak = *std::max_element(values.begin(), values.end());
  if (peak == 0.0) return true;
  const bool decreasing = values[m - 1] < values[m - 2] && values[m - 2] < values[m - 3];
  return decreasing && (values[m - 1] < rel_tol * peak || tail_slope(radii, values) >= min_slope);
}

/// max over directions of |Rf| (1-|z|^2)^alpha at radii 1 - 2^{-j}.
inline TrendReport little_bloch_probe(const AnalyticFn& f, double alpha, const ProbeConfig& pc = {}) {
  TrendReport rep;
  const auto dirs = probe_directions(f.dim, pc.angles);
  for (int j = 1; j <= pc.shells; ++j) {
    const double t = 1.0 - std::ldexp(1.0, -j);
    std::vector<double> vals(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t i) {
      const Point z = Point::on_ray(dirs[i].coords(), t);
      vals[i] = std::abs(f.R(z)) * std::pow(1.0 - z.norm2(), alpha);
    });
    rep.radii.push_back(t);
    rep.values.push_back(*std::max_element(vals.begin(), vals.end()));
  }
  rep.slope = tail_slope(rep.radii, rep.values);
  rep.verdict = vanishing_rule(rep.radii, rep.values) ? "vanishing" : "not_vanishing";
  return rep;
}

// ---------------------------------------------------------------------------
// F(p, q, s).

inline void check_fpqs_params(int n, double p, double q, double s) {
  if (!(p > 0.0)) throw DomainError("fpqs_norm: p must be > 0");
  if (!(q > -n - 1.0)) throw DomainError("fpqs_norm: q must be > -n-1");
  if (!(s >= 0.0)) throw DomainError("fpqs_norm: s must be >= 0");
  if (!(q + s > -1.0)) throw DomainError("fpqs_norm: q + s must be > -1");
}

/// Default a-probes: radii 1 - 2^{-j}, j = 0..shells, on the coordinate rays.
inline std::vector<Point> fpqs_default_probes(int n, int shells = 12) {
  std::vector<Point> out{Point::origin(n)};
  for (int axis = 0; axis < n; ++axis) {
    for (int j = 1; j <= shells; ++j) {
      std::array<cplx, kMaxDim> c{};
      c[static_cast<std::size_t>(axis)] = 1.0 - std::ldexp(1.0, -j);
      out.push_back(Point::from_coords(std::span<const cplx>(c.data(), static_cast<std::size_t>(n))));
    }
  }
  return out;
}

struct FpqsResult {
  double value = 0.0;
  Point argmax;
};

/// The integral int |Rf|^p (1-|z|^2)^q (1-|phi_a(z)|^2)^s dv at one probe a.
inline double fpqs_integral(const AnalyticFn& f, double p, double q, double s, const Point& a, const quad::QuadConfig& cfg) {
  const int n = f.dim;
  std::optional<quad::Focus> focus;
  if (const auto pk = f.peak(); pk && pk->norm() >= 0.5) {
    // A probe near the peak stacks the Mobius factor |1 - <z,a>|^{-2s} on Rf.
    const double extra = s > 0.0 && geometry::pseudo_hyperbolic(*pk, a) < 0.9 ? 2.0 * s : 0.0;
    focus = quad::Focus{*pk, p * (f.peak_order() + 1.0) + extra > n + 1 + q + s};
  } else if (s > 0.0 && a.norm() >= 0.5) {
    focus = quad::Focus{a, 2.0 * s > n + 1 + q + s};
  }
  const double oa = 1.0 - a.norm2();
  // Weight (1-|z|^2)^{q+s}; the remaining factor is ((1-|a|^2) / |1 - <z,a>|^2)^s.
  const double w = q + s;
  const double integral = quad::integrate_ball(
      [&](const Point& z) {
        const double ker = s > 0.0 ? std::pow(oa / std::norm(1.0 - inner(z, a)), s) : 1.0;
        return std::pow(std::abs(f.R(z)), p) * ker;
      },
      w, cfg, n, focus);
  const double c = quad::normalizing_constant(n, w);
  return integral / c;
}

/// ||f||_{F(p,q,s)} = sup_a (fpqs_integral)^{1/p} over the probes.
inline FpqsResult fpqs_norm(const AnalyticFn& f, double p, double q, double s, const std::vector<Point>& probes,
                            const quad::QuadConfig& cfg) {
  check_fpqs_params(f.dim, p, q, s);
  if (probes.empty()) throw DomainError("fpqs_norm: no probes");
  FpqsResult out{0.0, probes.front()};
  for (const auto& a : probes) {
    const double v = std::pow(fpqs_integral(f, p, q, s, a, cfg), 1.0 / p);
    if (v > out.value) out = {v, a};
  }
  return out;
}

}  // namespace carleson_lab::spaces
