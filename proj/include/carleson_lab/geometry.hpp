#pragma once

// Automorphisms and invariant distances of the unit ball.

#include <array>
#include <cmath>
#include <vector>

#include "carleson_lab/core.hpp"

namespace carleson_lab::geometry {

namespace detail {

using Coords = std::array<cplx, kMaxDim>;

// phi_a(z) without the domain check on the result.
inline Coords mobius_raw(const Point& a, const Point& z) {
  const int n = a.dim();
  Coords out{};
  const double a2 = a.norm2();
  const cplx za = inner(z, a);
  if (a2 == 0.0) {
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = -z[i];
    return out;
  }
  const double s = std::sqrt(1.0 - a2);
  const cplx denom = 1.0 - za;
  const cplx proj = za / a2;  // P_a z = proj * a
  for (int i = 0; i < n; ++i) {
    const cplx pz = proj * a[i];
    const cplx qz = z[i] - pz;
    out[static_cast<std::size_t>(i)] = (a[i] - pz - s * qz) / denom;
  }
  return out;
}

}  // namespace detail

/// (1 - |a|^2)(1 - |z|^2) / |1 - <z,a>|^2, which equals 1 - |phi_a(z)|^2.
inline double one_minus_norm2_mobius(const Point& a, const Point& z) {
  require_same_dim(a, z, "one_minus_norm2_mobius");
  return (1.0 - a.norm2()) * (1.0 - z.norm2()) / std::norm(1.0 - inner(z, a));
}

/// The involutive automorphism of B_n exchanging 0 and a.
inline Point mobius(const Point& a, const Point& z) {
  require_same_dim(a, z, "mobius");
  const auto raw = detail::mobius_raw(a, z);
  return Point::from_coords(std::span<const cplx>(raw.data(), static_cast<std::size_t>(a.dim())));
}

/// rho(z, w) = |phi_z(w)|.
inline double pseudo_hyperbolic(const Point& z, const Point& w) {
  require_same_dim(z, w, "pseudo_hyperbolic");
  if (z == w) return 0.0;
  const auto raw = detail::mobius_raw(z, w);
  double direct = 0.0;
  for (int i = 0; i < z.dim(); ++i) direct += std::norm(raw[static_cast<std::size_t>(i)]);
  direct = std::sqrt(direct);
  if (direct < 0.5) return direct;
  // Near the boundary the identity for 1 - rho^2 is the accurate route.
  const double x = std::clamp(one_minus_norm2_mobius(z, w), 0.0, 1.0);
  return std::sqrt(1.0 - x);
}

struct Distance {
  double value = 0.0;
  bool saturated = false;
};

/// Bergman distance with a saturation flag for rho numerically equal to 1.
inline Distance bergman_dist_checked(const Point& z, const Point& w) {
  const double rho = pseudo_hyperbolic(z, w);
  if (rho < 0.5) return {std::atanh(rho), false};
  double x = one_minus_norm2_mobius(z, w);  // 1 - rho^2
  bool saturated = false;
  if (!(x > 1e-300)) {
    x = 1e-300;
    saturated = true;
  }
  return {std::log1p(rho) - 0.5 * std::log(x), saturated};
}

/// beta(z, w) = (1/2) log((1 + rho) / (1 - rho)).
inline double bergman_dist(const Point& z, const Point& w) { return bergman_dist_checked(z, w).value; }

/// Bergman distance from the origin for a point of Euclidean norm t.
inline double bergman_radius(double t) { return std::atanh(t); }

struct MetricBall {
  Point center;
  double radius = 0.0;

  MetricBall(Point c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("MetricBall: radius must be positive and finite");
  }
};

inline bool ball_membership(const MetricBall& ball, const Point& w) {
  require_same_dim(ball.center, w, "ball_membership");
  return bergman_dist(ball.center, w) < ball.radius;
}

/// Axis-aligned box in R^{2n}, coordinates ordered (Re z1, Im z1, Re z2, ...).
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  bool contains(const Point& w) const {
    for (int i = 0; i < w.dim(); ++i) {
      const auto k = static_cast<std::size_t>(2 * i);
      if (w[i].real() < lo[k] || w[i].real() > hi[k]) return false;
      if (w[i].imag() < lo[k + 1] || w[i].imag() > hi[k + 1]) return false;
    }
    return true;
  }

  double volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < lo.size(); ++k) v *= std::max(0.0, hi[k] - lo[k]);
    return v;
  }
};

/// Exact bounding box of D(a, r). D(a, r) is the ellipsoid with center
/// (1-R^2) a / (1-R^2|a|^2), semi-axis R s along the complex line through a
/// and R sqrt(s) orthogonal to it, where R = tanh r and s = (1-|a|^2)/(1-R^2|a|^2).
inline Box ball_euclidean_hull(const MetricBall& ball) {
  const Point& a = ball.center;
  const int n = a.dim();
  const double R = std::tanh(ball.radius);
  const double a2 = a.norm2();
  const double denom = 1.0 - R * R * a2;
  const double s = (1.0 - a2) / denom;
  const double shift = (1.0 - R * R) / denom;
  Box box;
  box.lo.resize(static_cast<std::size_t>(2 * n));
  box.hi.resize(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    const double along = a2 > 0.0 ? std::norm(a[i]) / a2 : 0.0;
    const double h = R * std::sqrt(s * s * along + s * (1.0 - along));
    const cplx c = shift * a[i];
    const auto k = static_cast<std::size_t>(2 * i);
    box.lo[k] = c.real() - h;
    box.hi[k] = c.real() + h;
    box.lo[k + 1] = c.imag() - h;
    box.hi[k + 1] = c.imag() + h;
  }
  return box;
}

}  // namespace carleson_lab::geometry
