#pragma once

// Positive Borel measures on B_n: declarative specs, discretization, and the
// derived quantities used by the classifiers (ball masses, averaging
// function, lattice sequences, Berezin-type transforms).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "carleson_lab/core.hpp"
#include "carleson_lab/geometry.hpp"
#include "carleson_lab/lattice.hpp"
#include "carleson_lab/quadrature.hpp"

namespace carleson_lab::measures {

enum class Builtin { one, half_plane_bump, angular_cos2 };

inline const char* builtin_name(Builtin h) {
  switch (h) {
    case Builtin::one: return "one";
    case Builtin::half_plane_bump: return "half_plane_bump";
    case Builtin::angular_cos2: return "angular_cos2";
  }
  return "?";
}

inline Builtin parse_builtin(const std::string& name) {
  for (Builtin h : {Builtin::one, Builtin::half_plane_bump, Builtin::angular_cos2})
    if (name == builtin_name(h)) return h;
  throw DomainError("unknown density builtin '" + name + "' (expected one, half_plane_bump, angular_cos2)");
}

/// one: 1; half_plane_bump: max(Re z1, 0); angular_cos2: (Re z1)^2 / |z1|^2 (1 at z1 = 0).
inline double builtin_value(Builtin h, const Point& z) {
  switch (h) {
    case Builtin::one: return 1.0;
    case Builtin::half_plane_bump: return std::max(0.0, z[0].real());
    case Builtin::angular_cos2: {
      const double m = std::norm(z[0]);
      return m > 0.0 ? z[0].real() * z[0].real() / m : 1.0;
    }
  }
  return 0.0;
}

/// coef (1-|z|^2)^theta dv
struct RadialPower {
  double theta = 0.0;
  double coef = 1.0;
};

/// coef h(z) (1-|z|^2)^theta dv
struct WeightedDensity {
  Builtin h = Builtin::one;
  double theta = 0.0;
  double coef = 1.0;
};

struct Atom {
  Point point;
  double mass = 0.0;
};

struct Atomic {
  std::vector<Atom> atoms;
};

class MeasureSpec;

struct Sum {
  std::vector<MeasureSpec> parts;
};

class MeasureSpec {
 public:
  using Variant = std::variant<RadialPower, WeightedDensity, Atomic, Sum>;

  MeasureSpec(int n, Variant v) : dim_(n), v_(std::move(v)) { validate(); }

  static MeasureSpec radial_power(int n, double theta, double coef = 1.0) { return {n, RadialPower{theta, coef}}; }
  static MeasureSpec weighted_density(int n, Builtin h, double theta, double coef = 1.0) {
    return {n, WeightedDensity{h, theta, coef}};
  }
  static MeasureSpec atomic(int n, std::vector<Atom> atoms) { return {n, Atomic{std::move(atoms)}}; }
  static MeasureSpec sum(int n, std::vector<MeasureSpec> parts) { return {n, Sum{std::move(parts)}}; }
  static MeasureSpec zero(int n) { return sum(n, {}); }

  int dim() const { return dim_; }
  const Variant& variant() const { return v_; }

 private:
  void validate() const {
    Point::check_dim(dim_);
    const double theta_min = -(dim_ + 1.0);
    std::visit(
        [&](const auto& m) {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, RadialPower> || std::is_same_v<T, WeightedDensity>) {
            if (!(m.theta > theta_min) || !std::isfinite(m.theta))
              throw DomainError("measure: theta must be > -(n+1), got " + std::to_string(m.theta));
            if (!(m.coef >= 0.0) || !std::isfinite(m.coef)) throw DomainError("measure: coef must be >= 0");
          } else if constexpr (std::is_same_v<T, Atomic>) {
            for (const auto& a : m.atoms) {
              if (a.point.dim() != dim_) throw DomainError("measure: atom dimension mismatch");
              if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw DomainError("measure: atom mass must be > 0");
            }
          } else {
            for (const auto& p : m.parts)
              if (p.dim() != dim_) throw DomainError("measure: sum part dimension mismatch");
          }
        },
        v_);
  }

  int dim_;
  Variant v_;
};

/// c * mu.
inline MeasureSpec scaled(const MeasureSpec& mu, double c) {
  if (!(c >= 0.0)) throw DomainError("scaled: factor must be >= 0");
  return std::visit(
      [&](const auto& m) -> MeasureSpec {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RadialPower>) {
          return MeasureSpec::radial_power(mu.dim(), m.theta, m.coef * c);
        } else if constexpr (std::is_same_v<T, WeightedDensity>) {
          return MeasureSpec::weighted_density(mu.dim(), m.h, m.theta, m.coef * c);
        } else if constexpr (std::is_same_v<T, Atomic>) {
          if (c == 0.0) return MeasureSpec::zero(mu.dim());
          auto atoms = m.atoms;
          for (auto& a : atoms) a.mass *= c;
          return MeasureSpec::atomic(mu.dim(), std::move(atoms));
        } else {
          std::vector<MeasureSpec> parts;
          for (const auto& p : m.parts) parts.push_back(scaled(p, c));
          return MeasureSpec::sum(mu.dim(), std::move(parts));
        }
      },
      mu.variant());
}

// ---------------------------------------------------------------------------
// Flattened form: every spec is a finite sum of density terms and atoms.

struct DensityTerm {
  Builtin h = Builtin::one;
  double theta = 0.0;
  double coef = 1.0;
};

struct FlatMeasure {
  int dim = 1;
  std::vector<DensityTerm> densities;
  std::vector<Atom> atoms;
};

inline void flatten_into(const MeasureSpec& mu, FlatMeasure& out) {
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RadialPower>) {
          if (m.coef > 0.0) out.densities.push_back({Builtin::one, m.theta, m.coef});
        } else if constexpr (std::is_same_v<T, WeightedDensity>) {
          if (m.coef > 0.0) out.densities.push_back({m.h, m.theta, m.coef});
        } else if constexpr (std::is_same_v<T, Atomic>) {
          out.atoms.insert(out.atoms.end(), m.atoms.begin(), m.atoms.end());
        } else {
          for (const auto& p : m.parts) flatten_into(p, out);
        }
      },
      mu.variant());
}

inline FlatMeasure flatten(const MeasureSpec& mu) {
  FlatMeasure f;
  f.dim = mu.dim();
  flatten_into(mu, f);
  return f;
}

/// True when mu is the zero measure.
inline bool is_zero(const MeasureSpec& mu) {
  const auto f = flatten(mu);
  return f.densities.empty() && f.atoms.empty();
}

/// Densities vanish where 1 - |w|^2 falls below this (support |w| <= 1 - cutoff).
inline double support_floor(const quad::QuadConfig& cfg) { return cfg.outer_cutoff * (2.0 - cfg.outer_cutoff); }

inline double density_value(const DensityTerm& d, const Point& w, double omz2, double floor) {
  if (omz2 < floor * (1.0 - 1e-12)) return 0.0;
  return d.coef * builtin_value(d.h, w) * std::pow(omz2, d.theta);
}

// ---------------------------------------------------------------------------
// Discretization.

/// A point mass of the discretized measure, with accurate 1 - |z|^2.
struct WeightedPoint {
  Point z;
  double omz2 = 1.0;
  double mass = 0.0;
};

/// Singular kernel |1 - <w, center>|^{-power} that an integrand will carry;
/// used to place quadrature nodes.
struct KernelHint {
  Point center;
  double power = 0.0;
};

/// Kernels centered closer to the origin than this are smooth enough for the plain rule.
inline constexpr double kFocusRadius = 0.5;

/// Replaces mu by finitely many weighted points: atoms exactly, densities by
/// the ball rule (focused on the hint's center when given).
inline std::vector<WeightedPoint> discretize(const FlatMeasure& mu, const quad::QuadConfig& cfg,
                                             const std::optional<KernelHint>& hint = std::nullopt) {
  std::vector<WeightedPoint> out;
  for (const auto& a : mu.atoms) out.push_back({a.point, 1.0 - a.point.norm2(), a.mass});
  const double floor = support_floor(cfg);
  for (const auto& d : mu.densities) {
    std::optional<quad::Focus> focus;
    if (hint && hint->center.norm() >= kFocusRadius)
      focus = quad::Focus{hint->center, hint->power - (mu.dim + 1) - d.theta > 0.0};
    // Unless transported, the rule covers exactly the support |w| <= 1 - cutoff.
    quad::RadialMap map{quad::grading_for_weight(cfg.boundary_grading, d.theta),
                        focus && focus->pullback ? 1.0 : std::pow(1.0 - cfg.outer_cutoff, 2)};
    const auto rule = focus ? std::make_shared<const std::vector<quad::BallNode>>(quad::ball_rule(mu.dim, cfg, focus, map))
                            : quad::cached_ball_rule(mu.dim, cfg, map);
    for (const auto& nd : *rule) {
      const double m = nd.weight * density_value(d, nd.z, nd.omz2, floor);
      if (m > 0.0) out.push_back({nd.z, nd.omz2, m});
    }
  }
  return out;
}

/// Sum of mass * f(point, 1 - |point|^2) with fixed-order reduction.
template <class T, class F>
T integrate(const std::vector<WeightedPoint>& pts, F&& f) {
  return parallel_sum<T>(pts.size(), [&](std::size_t i) { return T(pts[i].mass * f(pts[i].z, pts[i].omz2)); });
}

template <class T, class F>
T integrate(const MeasureSpec& mu, F&& f, const quad::QuadConfig& cfg, const std::optional<KernelHint>& hint = std::nullopt) {
  return integrate<T>(discretize(flatten(mu), cfg, hint), std::forward<F>(f));
}

inline double total_mass(const MeasureSpec& mu, const quad::QuadConfig& cfg) {
  return integrate<double>(mu, [](const Point&, double) { return 1.0; }, cfg);
}

// ---------------------------------------------------------------------------
// Ball masses.

/// Node count factor for the ball-mass rule relative to cfg.
inline constexpr double kBallRuleScale = 0.25;

/// mu(D(z, r)). Atoms are counted exactly. Densities use
///   int_{D(z,r)} F dv = R^{2n} int_B F(phi_z(R u)) ((1-|z|^2) / |1 - <Ru, z>|^2)^{n+1} dv(u),
/// R = tanh r, with a tensor rule in u.
inline double ball_mass(const FlatMeasure& mu, const Point& z, double r, const quad::QuadConfig& cfg) {
  require_same_dim(Point::origin(mu.dim), z, "ball_mass");
  if (!(r > 0.0)) throw DomainError("ball_mass: r must be > 0");
  std::vector<double> parts;
  for (const auto& a : mu.atoms)
    if (geometry::bergman_dist(z, a.point) < r) parts.push_back(a.mass);
  if (!mu.densities.empty()) {
    const int n = mu.dim;
    const double R = std::tanh(r);
    const double R2n = std::pow(R, 2 * n);
    const double oz = 1.0 - z.norm2();
    const double floor = support_floor(cfg);
    // The Jacobian peaks toward the direction of z; focus the rule on R z.
    const auto small = cfg.scaled(kBallRuleScale);
    std::shared_ptr<const std::vector<quad::BallNode>> rule;
    if (z.norm2() > 0.0) {
      double theta_min = mu.densities.front().theta;
      for (const auto& d : mu.densities) theta_min = std::min(theta_min, d.theta);
      std::array<cplx, kMaxDim> c{};
      for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = R * z[k];
      const Point b = Point::from_coords(std::span<const cplx>(c.data(), static_cast<std::size_t>(n)));
      rule = std::make_shared<const std::vector<quad::BallNode>>(
          quad::ball_rule(n, small, quad::Focus{b, n + 1 + 2.0 * theta_min > 0.0}));
    } else {
      rule = quad::cached_ball_rule(n, small);
    }
    const auto& nodes = *rule;
    std::vector<double> vals(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
      const auto& nd = nodes[i];
      std::array<cplx, kMaxDim> c{};
      for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = R * nd.z[k];
      const Point v = Point::from_coords(std::span<const cplx>(c.data(), static_cast<std::size_t>(n)));
      const double d2 = std::norm(1.0 - inner(v, z));
      const double omw = oz * (1.0 - R * R + R * R * nd.omz2) / d2;
      const double jac = std::pow(oz / d2, n + 1);
      const Point w = geometry::mobius(z, v);
      double dens = 0.0;
      for (const auto& d : mu.densities) dens += density_value(d, w, omw, floor);
      vals[i] = nd.weight * jac * dens;
    });
    parts.push_back(R2n * pairwise_sum(vals));
  }
  return pairwise_sum(parts);
}

inline double ball_mass(const MeasureSpec& mu, const Point& z, double r, const quad::QuadConfig& cfg) {
  return ball_mass(flatten(mu), z, r, cfg);
}

/// mu(D(z, r)) for the density part by quasi-Monte Carlo over the ball's
/// bounding box (atoms exact). Slower; kept as an independent cross-check.
inline quad::RegionEstimate ball_mass_qmc(const MeasureSpec& mu, const Point& z, double r, const quad::QuadConfig& cfg) {
  const auto flat = flatten(mu);
  const geometry::MetricBall ball(z, r);
  const double floor = support_floor(cfg);
  auto est = quad::integrate_region(
      [&](const Point& w) {
        double s = 0.0;
        const double omw = 1.0 - w.norm2();
        for (const auto& d : flat.densities) s += density_value(d, w, omw, floor);
        return s;
      },
      [&](const Point& w) { return geometry::ball_membership(ball, w); }, geometry::ball_euclidean_hull(ball), cfg);
  for (const auto& a : flat.atoms)
    if (geometry::bergman_dist(z, a.point) < r) est.value += a.mass;
  return est;
}

/// mu(D(z, r)) / (1-|z|^2)^{n+1+alpha}.
inline double khat(const MeasureSpec& mu, double r, double alpha, const Point& z, const quad::QuadConfig& cfg) {
  return ball_mass(mu, z, r, cfg) / std::pow(1.0 - z.norm2(), mu.dim() + 1 + alpha);
}

// ---------------------------------------------------------------------------
// Kernel transforms.

/// int |1 - <w, a>|^{-power} dmu(w).
inline double kernel_integral(const FlatMeasure& mu, const Point& a, double power, const quad::QuadConfig& cfg) {
  require_same_dim(Point::origin(mu.dim), a, "kernel_integral");
  const auto pts = discretize(mu, cfg, KernelHint{a, power});
  return integrate<double>(pts, [&](const Point& w, double) { return std::pow(std::norm(1.0 - inner(w, a)), -0.5 * power); });
}

inline double kernel_integral(const MeasureSpec& mu, const Point& a, double power, const quad::QuadConfig& cfg) {
  return kernel_integral(flatten(mu), a, power, cfg);
}

/// Probe points beyond this radius are closer to the boundary than the
/// density support and kernel rules resolve reliably.
inline double comfort_radius(const quad::QuadConfig& cfg) { return 1.0 - 100.0 * cfg.outer_cutoff; }

struct Checked {
  double value = 0.0;
  std::optional<std::string> warning;
};

/// B_{s,alpha}(mu)(z) = (1-|z|^2)^s int |1 - <z,w>|^{-(n+1+s+alpha)} dmu(w).
inline Checked berezin_checked(const MeasureSpec& mu, double s, double alpha, const Point& z, const quad::QuadConfig& cfg) {
  if (!(s > 0.0)) throw DomainError("berezin: s must be > 0");
  Checked out;
  out.value = std::pow(1.0 - z.norm2(), s) * kernel_integral(mu, z, mu.dim() + 1 + s + alpha, cfg);
  if (z.norm() > comfort_radius(cfg))
    out.warning = "berezin: probe |z| = " + std::to_string(z.norm()) + " exceeds the kernel comfort radius " +
                  std::to_string(comfort_radius(cfg));
  return out;
}

inline double berezin(const MeasureSpec& mu, double s, double alpha, const Point& z, const quad::QuadConfig& cfg) {
  return berezin_checked(mu, s, alpha, z, cfg).value;
}

// ---------------------------------------------------------------------------
// Lattice sequences.

struct LatticeSequence {
  std::vector<double> values;
  double exponent = 0.0;
  double r = 0.0;
  double truncation = 0.0;
};

/// mu(D(a_k, r)) / (1-|a_k|^2)^exponent over the lattice points.
inline LatticeSequence lattice_sequence(const MeasureSpec& mu, const lattice::Lattice& lat, double exponent,
                                        const quad::QuadConfig& cfg) {
  if (lat.dim != mu.dim()) throw DomainError("lattice_sequence: dimension mismatch");
  const auto flat = flatten(mu);
  LatticeSequence seq;
  seq.exponent = exponent;
  seq.r = lat.r;
  seq.truncation = lat.truncation;
  seq.values.resize(lat.points.size());
  // Ball masses parallelize internally over nodes; the outer loop stays serial.
  for (std::size_t k = 0; k < lat.points.size(); ++k) {
    const auto& a = lat.points[k];
    seq.values[k] = ball_mass(flat, a, lat.r, cfg) / std::pow(1.0 - a.norm2(), exponent);
  }
  return seq;
}

}  // namespace carleson_lab::measures
