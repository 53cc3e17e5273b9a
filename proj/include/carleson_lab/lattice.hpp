#pragma once

// r-lattices in the Bergman metric, truncated to |a| <= 1 - truncation.
//
// Construction: candidates on a hyperbolic shell grid (spacing `grid_step`
// in the Bergman metric, radial shells ordered by beta(0, .)) are swept in
// order and accepted when they keep Bergman distance >= `accept_distance`
// from every accepted point. Any point of the truncated ball is within the
// grid covering radius of a candidate, and every candidate is within
// accept_distance of an accepted point, so covering with radius r holds as
// long as accept_distance + covering radius < r.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <unordered_map>
#include <vector>

#include "carleson_lab/core.hpp"
#include "carleson_lab/geometry.hpp"

namespace carleson_lab::lattice {

struct Lattice {
  double r = 0.0;
  int dim = 1;
  double truncation = 0.0;
  std::vector<Point> points;
  /// Packing bound on how many D(a_k, 4r) can contain one point.
  int overlap_bound = 0;
};

struct LatticeReport {
  bool separation_ok = true;
  double min_separation = 0.0;
  std::size_t covering_misses = 0;
  int max_overlap = 0;
};

class LatticeBudgetError : public std::runtime_error {
 public:
  LatticeBudgetError(const std::string& msg, double achieved_radius)
      : std::runtime_error(msg), achieved_radius_(achieved_radius) {}
  /// Euclidean radius up to which the sweep completed.
  double achieved_radius() const { return achieved_radius_; }

 private:
  double achieved_radius_;
};

struct BuildOptions {
  std::size_t max_candidates = 20'000'000;
};

/// Grid spacing and acceptance distance, as fractions of r.
inline double grid_step(double r, int n) { return (n == 1 ? 0.4 : 0.25) * r; }
inline double accept_distance(double r, int n) { return (n == 1 ? 0.6 : 0.55) * r; }

/// Volume of D(0, rho) for the invariant measure dv / (1-|z|^2)^{n+1}, up to a constant.
inline double invariant_ball_volume(double rho, int n) { return std::pow(std::sinh(rho), 2 * n); }

inline int packing_overlap_bound(double r, int n) {
  const double half_sep = 0.5 * accept_distance(r, n);
  return static_cast<int>(
      std::ceil(invariant_ball_volume(4.0 * r + half_sep, n) / invariant_ball_volume(half_sep, n)));
}

/// Index for "which stored points may lie within Bergman distance `radius` of q".
/// Points are bucketed by beta(0, .) shell and by the cell of their direction.
class SpatialIndex {
 public:
  SpatialIndex(int n, double radius, double shell_width) : n_(n), radius_(radius), width_(shell_width) {
    R_ = std::tanh(radius);
  }

  void insert(std::size_t id, const Point& p) {
    const int k = shell_of(p);
    if (k >= static_cast<int>(shells_.size())) shells_.resize(static_cast<std::size_t>(k) + 1);
    auto& sh = shells_[static_cast<std::size_t>(k)];
    if (sh.cell <= 0.0) sh.cell = direction_extent(shell_mid_radius(k));
    sh.all.push_back(id);
    sh.cells[key(cell_coords(p, sh.cell))].push_back(id);
  }

  template <class Fn>
  void for_each_candidate(const Point& q, Fn&& fn) const {
    const double b0 = geometry::bergman_radius(q.norm());
    const int k_lo = std::max(0, static_cast<int>(std::floor((b0 - radius_) / width_)));
    const int k_hi = std::min(static_cast<int>(shells_.size()) - 1, static_cast<int>(std::floor((b0 + radius_) / width_)));
    const double ext = direction_extent(q.norm());
    for (int k = k_lo; k <= k_hi; ++k) {
      const auto& sh = shells_[static_cast<std::size_t>(k)];
      if (sh.all.empty()) continue;
      if (ext >= 2.0 || sh.cell >= 2.0) {
        for (auto id : sh.all) fn(id);
        continue;
      }
      std::array<int, 2 * kMaxDim> lo{}, hi{};
      const auto dir = direction(q);
      double cells = 1.0;
      for (int d = 0; d < 2 * n_; ++d) {
        lo[static_cast<std::size_t>(d)] = static_cast<int>(std::floor((dir[static_cast<std::size_t>(d)] - ext) / sh.cell));
        hi[static_cast<std::size_t>(d)] = static_cast<int>(std::floor((dir[static_cast<std::size_t>(d)] + ext) / sh.cell));
        cells *= hi[static_cast<std::size_t>(d)] - lo[static_cast<std::size_t>(d)] + 1;
      }
      if (cells > static_cast<double>(sh.cells.size()) || cells > 4096.0) {
        for (auto id : sh.all) fn(id);
        continue;
      }
      std::array<int, 2 * kMaxDim> cur = lo;
      while (true) {
        if (auto it = sh.cells.find(key(cur)); it != sh.cells.end())
          for (auto id : it->second) fn(id);
        int d = 0;
        for (; d < 2 * n_; ++d) {
          auto& c = cur[static_cast<std::size_t>(d)];
          if (++c <= hi[static_cast<std::size_t>(d)]) break;
          c = lo[static_cast<std::size_t>(d)];
        }
        if (d == 2 * n_) break;
      }
    }
  }

 private:
  struct Shell {
    double cell = 0.0;
    std::vector<std::size_t> all;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells;
  };

  int shell_of(const Point& p) const {
    return static_cast<int>(std::floor(geometry::bergman_radius(p.norm()) / width_));
  }
  double shell_mid_radius(int k) const { return std::tanh((k + 0.5) * width_); }

  // Bound on |w/|w| - q/|q|| over w in D(q, radius), from the ellipsoid
  // semi-axes of D(q, radius).
  double direction_extent(double t) const {
    if (t < 1e-3) return 2.0;
    const double s = (1.0 - t * t) / (1.0 - R_ * R_ * t * t);
    const double euclid = n_ == 1 ? 2.0 * R_ * s : R_ * R_ * s + R_ * std::sqrt(s);
    return std::min(2.0, 2.0 * euclid / t);
  }

  std::array<double, 2 * kMaxDim> direction(const Point& p) const {
    std::array<double, 2 * kMaxDim> d{};
    const double len = p.norm();
    for (int i = 0; i < n_; ++i) {
      d[static_cast<std::size_t>(2 * i)] = len > 0 ? p[i].real() / len : 0.0;
      d[static_cast<std::size_t>(2 * i + 1)] = len > 0 ? p[i].imag() / len : 0.0;
    }
    return d;
  }

  std::array<int, 2 * kMaxDim> cell_coords(const Point& p, double cell) const {
    std::array<int, 2 * kMaxDim> c{};
    const auto d = direction(p);
    for (int i = 0; i < 2 * n_; ++i)
      c[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(d[static_cast<std::size_t>(i)] / cell));
    return c;
  }

  static std::uint64_t key(const std::array<int, 2 * kMaxDim>& c) {
    std::uint64_t k = 0;
    for (int v : c) k = (k << 16) | static_cast<std::uint16_t>(v + 32768);
    return k;
  }

  int n_;
  double radius_;
  double width_;
  double R_;
  std::vector<Shell> shells_;
};

namespace detail {

// Candidate points on shell `t` (Euclidean radius), spacing <= step in the Bergman metric.
inline void shell_candidates(int n, double t, double step, int parity, std::vector<Point>& out) {
  out.clear();
  if (t == 0.0) {
    out.push_back(Point::origin(n));
    return;
  }
  const double om = 1.0 - t * t;
  if (n == 1) {
    const int m = std::max(1, static_cast<int>(std::ceil(2.0 * kPi * t / (om * step))));
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * (j + 0.5 * parity) / m;
      out.push_back(Point{std::polar(t, th)});
    }
    return;
  }
  // Hopf coordinates zeta = e^{i psi} (cos phi, sin phi e^{i chi}): psi runs
  // along the complex normal (scale t / (1-t^2)), phi and chi span the
  // complex tangential directions (scale t / sqrt(1-t^2)).
  const int q = std::max(1, static_cast<int>(std::ceil(2.0 * kPi * t / (om * step))));
  const int p = std::max(1, static_cast<int>(std::ceil(0.5 * kPi * t / (std::sqrt(om) * step))));
  for (int i = 0; i < p; ++i) {
    const double phi = 0.5 * kPi * (i + 0.5) / p;
    const int c = std::max(1, static_cast<int>(std::ceil(2.0 * kPi * std::sin(phi) * std::cos(phi) * t /
                                                          (std::sqrt(om) * step))));
    for (int j = 0; j < c; ++j) {
      const double chi = 2.0 * kPi * (j + 0.5 * parity) / c;
      for (int l = 0; l < q; ++l) {
        const double psi = 2.0 * kPi * (l + 0.5 * ((i + j) % 2)) / q;
        const cplx rot = std::polar(t, psi);
        out.push_back(Point{rot * std::cos(phi), rot * std::sin(phi) * std::polar(1.0, chi)});
      }
    }
  }
}

}  // namespace detail

/// Greedy r-lattice of the ball |z| <= 1 - truncation.
inline Lattice build_lattice(double r, int n, double truncation, const BuildOptions& opt = {}) {
  Point::check_dim(n);
  if (!(r > 0.0 && r <= 5.0)) throw DomainError("build_lattice: r must be in (0, 5]");
  if (!(truncation > 0.0 && truncation < 1.0)) throw DomainError("build_lattice: truncation must be in (0, 1)");

  const double step = grid_step(r, n);
  const double accept = accept_distance(r, n);
  const double beta_max = geometry::bergman_radius(1.0 - truncation);
  const int shells = std::max(1, static_cast<int>(std::ceil(beta_max / step)));

  Lattice lat;
  lat.r = r;
  lat.dim = n;
  lat.truncation = truncation;
  lat.overlap_bound = packing_overlap_bound(r, n);

  SpatialIndex index(n, accept, step);
  std::vector<Point> cand;
  std::size_t visited = 0;
  for (int k = 0; k <= shells; ++k) {
    const double t = std::min(std::tanh(beta_max * k / shells), 1.0 - truncation);
    detail::shell_candidates(n, t, step, k % 2, cand);
    visited += cand.size();
    if (visited > opt.max_candidates) {
      throw LatticeBudgetError("build_lattice: candidate budget exceeded", std::tanh(beta_max * (k - 1) / shells));
    }
    for (const auto& c : cand) {
      bool ok = true;
      index.for_each_candidate(c, [&](std::size_t id) {
        if (ok && geometry::bergman_dist(c, lat.points[id]) < accept) ok = false;
      });
      if (!ok) continue;
      index.insert(lat.points.size(), c);
      lat.points.push_back(c);
    }
  }
  return lat;
}

/// Uniform (Euclidean volume) random point of |z| <= rmax.
inline Point uniform_ball_point(int n, double rmax, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::array<cplx, kMaxDim> c{};
  double len = 0.0;
  for (int i = 0; i < n; ++i) {
    c[static_cast<std::size_t>(i)] = cplx(gauss(rng), gauss(rng));
    len += std::norm(c[static_cast<std::size_t>(i)]);
  }
  len = std::sqrt(len);
  const double rad = rmax * std::pow(unif(rng), 1.0 / (2.0 * n));
  for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] *= rad / len;
  return Point::from_coords(std::span<const cplx>(c.data(), static_cast<std::size_t>(n)));
}

/// Separation is checked over all pairs (pairs that the index skips are
/// provably farther apart than r/2); covering and overlap use seeded probes.
inline LatticeReport verify_lattice(const Lattice& lat, int probes, std::uint64_t seed, int overlap_probes = -1) {
  if (probes < 1) throw DomainError("verify_lattice: probes must be >= 1");
  LatticeReport rep;
  const int n = lat.dim;
  const double r = lat.r;
  const double step = std::max(0.05, r / 4.0);

  SpatialIndex sep_index(n, r / 2.0, step);
  for (std::size_t i = 0; i < lat.points.size(); ++i) sep_index.insert(i, lat.points[i]);
  rep.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lat.points.size(); ++i) {
    sep_index.for_each_candidate(lat.points[i], [&](std::size_t j) {
      if (j <= i) return;
      const double d = geometry::bergman_dist(lat.points[i], lat.points[j]);
      rep.min_separation = std::min(rep.min_separation, d);
      if (d < r / 2.0) rep.separation_ok = false;
    });
  }

  SpatialIndex cover_index(n, r, step);
  SpatialIndex overlap_index(n, 4.0 * r, step);
  for (std::size_t i = 0; i < lat.points.size(); ++i) {
    cover_index.insert(i, lat.points[i]);
    overlap_index.insert(i, lat.points[i]);
  }
  std::mt19937_64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(probes));
  for (int i = 0; i < probes; ++i) pts.push_back(uniform_ball_point(n, 1.0 - lat.truncation, rng));

  std::vector<char> covered(pts.size(), 0);
  const std::size_t n_overlap = overlap_probes < 0 ? pts.size() : std::min<std::size_t>(pts.size(), overlap_probes);
  std::vector<int> overlap(n_overlap, 0);
  parallel_for(pts.size(), [&](std::size_t i) {
    bool hit = false;
    cover_index.for_each_candidate(pts[i], [&](std::size_t id) {
      if (!hit && geometry::bergman_dist(pts[i], lat.points[id]) < r) hit = true;
    });
    covered[i] = hit ? 1 : 0;
    if (i < n_overlap) {
      int count = 0;
      overlap_index.for_each_candidate(pts[i], [&](std::size_t id) {
        if (geometry::bergman_dist(pts[i], lat.points[id]) < 4.0 * r) ++count;
      });
      overlap[i] = count;
    }
  });
  for (char c : covered)
    if (!c) ++rep.covering_misses;
  for (int c : overlap) rep.max_overlap = std::max(rep.max_overlap, c);
  return rep;
}

}  // namespace carleson_lab::lattice
