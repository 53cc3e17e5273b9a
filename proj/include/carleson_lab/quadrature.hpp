#pragma once

// Integration over B_n against dv and dv_alpha.
//
// The tensor rule uses Gauss-Legendre in u = |z|^2 after the grading
// substitution 1 - u = (1 - y)^g, uniform (trapezoid) nodes in the angles,
// and for n = 2 the chart
//   z = (sqrt(u (1-x)) e^{i t1}, sqrt(u x) e^{i t2}),  dv = 2u du dx dt1 dt2 / (4 pi^2).
// A rule may be focused on a point b: the chart is rotated so b lies on the
// first axis and the angle t1 is clustered toward arg b with the circle map
// of the disk automorphism. With pullback enabled the rule is additionally
// transported by phi_b, which turns kernels peaked at b into bulk integrands.

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "carleson_lab/core.hpp"
#include "carleson_lab/geometry.hpp"

namespace carleson_lab::quad {

struct QuadConfig {
  int radial_nodes = 128;
  int angular_nodes = 256;
  int mc_samples = 1 << 16;
  std::uint64_t seed = 20140101;
  double boundary_grading = 2.0;
  double outer_cutoff = 1e-6;

  void validate() const {
    if (radial_nodes < 1 || angular_nodes < 1 || mc_samples < 1)
      throw DomainError("QuadConfig: node counts must be >= 1");
    if (!(boundary_grading >= 1.0)) throw DomainError("QuadConfig: boundary_grading must be >= 1");
    if (!(outer_cutoff > 0.0 && outer_cutoff < 1.0)) throw DomainError("QuadConfig: outer_cutoff must be in (0,1)");
  }

  /// Same configuration with node counts multiplied by `factor` (at least 4 each).
  QuadConfig scaled(double factor) const {
    QuadConfig c = *this;
    c.radial_nodes = std::max(4, static_cast<int>(std::lround(radial_nodes * factor)));
    c.angular_nodes = std::max(4, static_cast<int>(std::lround(angular_nodes * factor)));
    return c;
  }

  friend bool operator==(const QuadConfig&, const QuadConfig&) = default;
};

/// c_alpha with c_alpha * integral of (1-|z|^2)^alpha dv = 1, i.e.
/// Gamma(n+alpha+1) / (n! Gamma(alpha+1)).
inline double normalizing_constant(int n, double alpha) {
  Point::check_dim(n);
  if (!(alpha > -1.0)) throw DomainError("normalizing_constant: alpha must be > -1");
  return std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0) - std::lgamma(alpha + 1.0));
}

// ---------------------------------------------------------------------------
// One-dimensional rules.

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre on [0, 1] (Newton iteration on P_N), cached per N.
inline std::shared_ptr<const Rule1D> gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Rule1D>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  auto rule = std::make_shared<Rule1D>();
  rule->x.resize(static_cast<std::size_t>(n));
  rule->w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (t * p1 - p0) / (t * t - 1.0);
    }
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule->x[lo] = 0.5 * (1.0 - t);
    rule->x[hi] = 0.5 * (1.0 + t);
    rule->w[lo] = 0.5 * w;
    rule->w[hi] = 0.5 * w;
  }
  cache.emplace(n, rule);
  return rule;
}

/// Gauss-Legendre integral of f over [a, b].
template <class F>
double integrate_interval(F&& f, double a, double b, int nodes = 64) {
  const auto rule = gauss_legendre(nodes);
  std::vector<double> vals(rule->x.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = rule->w[i] * f(a + (b - a) * rule->x[i]);
  return (b - a) * pairwise_sum(vals);
}

// ---------------------------------------------------------------------------
// Ball rules.

/// A quadrature node: point, accurate 1 - |z|^2, and weight for the normalized volume dv.
struct BallNode {
  Point z;
  double omz2 = 1.0;
  double weight = 0.0;
};

/// Where a rule concentrates its nodes.
struct Focus {
  Point center;
  bool pullback = false;
};

struct RuleShape {
  int radial = 0;
  int x = 1;
  int theta1 = 0;
  int theta2 = 1;
};

inline RuleShape rule_shape(int n, const QuadConfig& cfg) {
  Point::check_dim(n);
  if (n == 1) return {cfg.radial_nodes, 1, cfg.angular_nodes, 1};
  // Kernels focused on a boundary point vary fastest in t1, so t1 gets most of the budget.
  return {std::max(8, cfg.radial_nodes * 3 / 16), std::max(4, cfg.radial_nodes / 16), std::max(8, cfg.angular_nodes / 2),
          std::max(4, cfg.angular_nodes / 64)};
}

namespace detail {

// Circle map of the disk automorphism: theta = 2 atan(eps tan(psi / 2)).
inline void cluster_angle(double psi, double eps, double& theta, double& jac) {
  const double c = std::cos(0.5 * psi), s = std::sin(0.5 * psi);
  theta = 2.0 * std::atan2(eps * s, c);
  jac = eps / (c * c + eps * eps * s * s);
}

inline double cluster_eps(double rho) { return (1.0 - rho) / (1.0 + rho); }

}  // namespace detail

/// Radial substitution of the ball rule: u runs over [0, u_max] with 1 - u a
/// power `grading` of an affine function of the Gauss variable.
struct RadialMap {
  double grading = 2.0;
  double u_max = 1.0;

  friend bool operator==(const RadialMap&, const RadialMap&) = default;
};

/// Grading that turns the weight (1-u)^theta du into a polynomial in y:
/// grading * (1 + theta) is the smallest integer >= base * (1 + theta).
inline double grading_for_weight(double base, double theta) {
  if (!(theta > -1.0)) return base;
  const double k = std::max(1.0, std::ceil(base * (1.0 + theta) - 1e-9));
  return k / (1.0 + theta);
}

/// Builds the tensor rule for the normalized volume measure on B_n
/// (restricted to |z|^2 <= map.u_max).
inline std::vector<BallNode> ball_rule(int n, const QuadConfig& cfg, const std::optional<Focus>& focus = std::nullopt,
                                       std::optional<RadialMap> map = std::nullopt) {
  cfg.validate();
  if (!map) map = RadialMap{cfg.boundary_grading, 1.0};
  const RuleShape shape = rule_shape(n, cfg);
  const double g = map->grading;
  // 1 - u = (sig + (1 - sig)(1 - y))^g with sig^g = 1 - u_max.
  const double sig = std::pow(1.0 - map->u_max, 1.0 / g);
  const auto radial = gauss_legendre(shape.radial);
  const auto xs = gauss_legendre(shape.x);

  double b_abs = 0.0;
  std::array<cplx, kMaxDim> e1{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
  std::array<cplx, kMaxDim> e2{cplx{0.0, 0.0}, cplx{1.0, 0.0}};
  if (focus) {
    if (focus->center.dim() != n) throw DomainError("ball_rule: focus dimension mismatch");
    b_abs = focus->center.norm();
    if (b_abs > 0.0) {
      for (int i = 0; i < n; ++i) e1[static_cast<std::size_t>(i)] = focus->center[i] / b_abs;
      if (n == 2) e2 = {-std::conj(e1[1]), std::conj(e1[0])};
    }
  }
  const bool pullback = focus && focus->pullback && b_abs > 0.0;
  const double b2 = b_abs * b_abs;

  std::vector<BallNode> nodes;
  nodes.reserve(static_cast<std::size_t>(shape.radial) * shape.x * shape.theta1 * shape.theta2);

  for (std::size_t ir = 0; ir < radial->x.size(); ++ir) {
    const double y = radial->x[ir];
    const double sv = sig + (1.0 - sig) * (1.0 - y);
    const double omu = std::pow(sv, g);  // 1 - u
    const double u = 1.0 - omu;
    const double du = radial->w[ir] * g * std::pow(sv, g - 1.0) * (1.0 - sig);
    const double radial_w = du * (n == 1 ? 1.0 : 2.0 * u);
    for (std::size_t ix = 0; ix < (n == 1 ? 1 : xs->x.size()); ++ix) {
      double x = 0.0, xw = 1.0;
      if (n == 2) {
        x = std::pow(xs->x[ix], g);
        xw = xs->w[ix] * g * std::pow(xs->x[ix], g - 1.0);
      }
      const double r1 = std::sqrt(u * (1.0 - x));
      const double r2 = std::sqrt(u * x);
      // Trapezoid sums of the clustering Jacobian converge like exp(-2 eps M), so eps is floored at 12 / M.
      const double eps = b_abs > 0.0 ? std::max(detail::cluster_eps(r1 * b_abs), std::min(1.0, 12.0 / shape.theta1)) : 1.0;
      for (int j1 = 0; j1 < shape.theta1; ++j1) {
        const double psi = -kPi + 2.0 * kPi * (j1 + 0.5) / shape.theta1;
        double t1 = psi, jac1 = 1.0;
        if (eps != 1.0) detail::cluster_angle(psi, eps, t1, jac1);
        const cplx c1 = std::polar(r1, t1);
        for (int j2 = 0; j2 < shape.theta2; ++j2) {
          const double w = radial_w * xw * jac1 / shape.theta1 / shape.theta2;
          std::array<cplx, kMaxDim> local{};
          if (n == 1) {
            local[0] = c1 * e1[0];
          } else {
            const cplx c2 = std::polar(r2, 2.0 * kPi * (j2 + 0.5) / shape.theta2);
            local[0] = c1 * e1[0] + c2 * e2[0];
            local[1] = c1 * e1[1] + c2 * e2[1];
          }
          if (!pullback) {
            if (omu < 1e-13) continue;
            BallNode node{Point::from_coords(std::span<const cplx>(local.data(), static_cast<std::size_t>(n))), omu, w};
            nodes.push_back(node);
            continue;
          }
          // w = phi_b(local); <local, b> = r1 e^{i t1} |b| by construction of the chart.
          const cplx ub = c1 * b_abs;
          const double d2 = std::norm(1.0 - ub);
          const double omw = (1.0 - b2) * omu / d2;
          if (omu < 1e-13 || omw < 1e-13) continue;
          const double jac = std::pow((1.0 - b2) / d2, n + 1);
          std::array<cplx, kMaxDim> img{};
          const double s = std::sqrt(1.0 - b2);
          for (int i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const cplx pz = (ub / b2) * focus->center[i];
            img[k] = (focus->center[i] - pz - s * (local[k] - pz)) / (1.0 - ub);
          }
          double img2 = 0.0;
          for (int i = 0; i < n; ++i) img2 += std::norm(img[static_cast<std::size_t>(i)]);
          if (img2 >= 1.0 - 1e-13) continue;
          nodes.push_back(
              BallNode{Point::from_coords(std::span<const cplx>(img.data(), static_cast<std::size_t>(n))), omw, w * jac});
        }
      }
    }
  }
  return nodes;
}

/// Unfocused rule, built once per (n, cfg, map).
inline std::shared_ptr<const std::vector<BallNode>> cached_ball_rule(int n, const QuadConfig& cfg,
                                                                     std::optional<RadialMap> map = std::nullopt) {
  struct Entry {
    int n;
    QuadConfig cfg;
    RadialMap map;
    std::shared_ptr<const std::vector<BallNode>> rule;
  };
  static std::mutex mu;
  static std::vector<Entry> cache;
  if (!map) map = RadialMap{cfg.boundary_grading, 1.0};
  std::lock_guard<std::mutex> lock(mu);
  for (const auto& e : cache)
    if (e.n == n && e.cfg == cfg && e.map == *map) return e.rule;
  auto rule = std::make_shared<const std::vector<BallNode>>(ball_rule(n, cfg, std::nullopt, map));
  if (cache.size() > 64) cache.erase(cache.begin());
  cache.push_back({n, cfg, *map, rule});
  return rule;
}

/// Sums g(node) over a rule with fixed-order reduction.
template <class T, class G>
T integrate_nodes(const std::vector<BallNode>& nodes, G&& g) {
  return parallel_sum<T>(nodes.size(), [&](std::size_t i) { return g(nodes[i]); });
}

/// Integral of f against dv_alpha. NaN values raise NumericalError naming the node.
template <class F>
double integrate_ball(F&& f, double alpha, const QuadConfig& cfg, int n, const std::optional<Focus>& focus = std::nullopt) {
  const double c_alpha = normalizing_constant(n, alpha);
  const auto nodes = ball_rule(n, cfg, focus);
  std::vector<double> vals(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    const auto& nd = nodes[i];
    vals[i] = nd.weight * std::pow(nd.omz2, alpha) * f(nd.z);
  });
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (std::isnan(vals[i])) {
      std::ostringstream os;
      os << "integrate_ball: integrand is NaN at node " << i << " (";
      for (int k = 0; k < nodes[i].z.dim(); ++k) os << (k ? ", " : "") << nodes[i].z[k];
      os << ")";
      throw NumericalError(os.str());
    }
  }
  return c_alpha * pairwise_sum(vals);
}

// ---------------------------------------------------------------------------
// Quasi-Monte Carlo over a region given by a membership predicate.

struct RegionEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Integral of f dv over {w in box : |w| < 1, member(w)} using a Kronecker
/// (R_d) sequence with seeded random shifts. The spread across shifts gives
/// the standard error.
template <class F, class Member>
RegionEstimate integrate_region(F&& f, Member&& member, const geometry::Box& box, const QuadConfig& cfg) {
  cfg.validate();
  const std::size_t d = box.lo.size();
  const int n = static_cast<int>(d / 2);
  Point::check_dim(n);
  constexpr int kShifts = 8;
  const int per_shift = std::max(1, cfg.mc_samples / kShifts);

  // Generalized golden ratio: the root of x^{d+1} = x + 1.
  double phi = 2.0;
  for (int i = 0; i < 64; ++i) phi = std::pow(1.0 + phi, 1.0 / (static_cast<double>(d) + 1.0));
  std::vector<double> step(d);
  for (std::size_t k = 0; k < d; ++k) step[k] = std::fmod(1.0 / std::pow(phi, static_cast<double>(k + 1)), 1.0);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<double>> shifts(kShifts, std::vector<double>(d));
  for (auto& s : shifts)
    for (auto& v : s) v = unif(rng);

  const double ball_volume = std::pow(kPi, n) / std::tgamma(n + 1.0);
  const double scale = box.volume() / ball_volume;
  std::vector<double> est(kShifts, 0.0);
  parallel_for(kShifts, [&](std::size_t s) {
    std::vector<double> vals(static_cast<std::size_t>(per_shift), 0.0);
    std::array<cplx, kMaxDim> c{};
    for (int i = 0; i < per_shift; ++i) {
      double r2 = 0.0;
      std::array<double, 2 * kMaxDim> x{};
      for (std::size_t k = 0; k < d; ++k) {
        const double t = std::fmod(shifts[s][k] + (i + 1) * step[k], 1.0);
        x[k] = box.lo[k] + t * (box.hi[k] - box.lo[k]);
        r2 += x[k] * x[k];
      }
      if (r2 >= 1.0 - 1e-12) continue;
      for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = cplx(x[2 * k], x[2 * k + 1]);
      const Point w = Point::from_coords(std::span<const cplx>(c.data(), static_cast<std::size_t>(n)));
      if (!member(w)) continue;
      vals[static_cast<std::size_t>(i)] = f(w);
    }
    est[s] = scale * pairwise_sum(vals) / per_shift;
  });
  RegionEstimate out;
  out.value = pairwise_sum(est) / kShifts;
  double var = 0.0;
  for (double e : est) var += (e - out.value) * (e - out.value);
  out.std_error = std::sqrt(var / (kShifts - 1) / kShifts);
  return out;
}

}  // namespace carleson_lab::quad
