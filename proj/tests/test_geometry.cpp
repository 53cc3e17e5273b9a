#include <gtest/gtest.h>

#include <random>

#include "carleson_lab/geometry.hpp"
#include "carleson_lab/lattice.hpp"
#include "oracles.hpp"

using namespace carleson_lab;
using namespace carleson_lab::geometry;

namespace {

std::vector<Point> random_points(int n, int count, std::uint64_t seed, double rmax = 0.999) {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts;
  for (int i = 0; i < count; ++i) pts.push_back(lattice::uniform_ball_point(n, rmax, rng));
  return pts;
}

double dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST(Point, RejectsBoundaryAndBadDimension) {
  EXPECT_THROW((Point{cplx(1.0, 0.0)}), DomainError);
  EXPECT_THROW((Point{cplx(0.6, 0.0), cplx(0.0, 0.8)}), DomainError);
  EXPECT_THROW(Point::origin(3), DomainError);
  EXPECT_THROW(Point::origin(0), DomainError);
  EXPECT_NO_THROW((Point{cplx(0.999999, 0.0)}));
}

TEST(Mobius, IdentityAndInvolution) {
  for (int n = 1; n <= 2; ++n) {
    const auto as = random_points(n, 40, 11 + n);
    const auto zs = random_points(n, 40, 21 + n);
    for (const auto& a : as) {
      for (const auto& z : zs) {
        const Point w = mobius(a, z);
        const double lhs = 1.0 - w.norm2();
        EXPECT_NEAR(lhs, one_minus_norm2_mobius(a, z), 1e-10);
        EXPECT_LT(dist(mobius(a, w), z), 1e-10);
      }
      EXPECT_LT(dist(mobius(a, Point::origin(n)), a), 1e-14);
      EXPECT_LT(mobius(a, a).norm(), 1e-12);
    }
  }
}

TEST(Mobius, DiskFormulaAgrees) {
  const auto pts = random_points(1, 60, 5);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const double expect = oracle::disk_rho(pts[i][0], pts[i + 1][0]);
    EXPECT_NEAR(pseudo_hyperbolic(pts[i], pts[i + 1]), expect, 1e-12);
  }
}

TEST(Bergman, MetricProperties) {
  for (int n = 1; n <= 2; ++n) {
    const auto pts = random_points(n, 30, 100 + n, 0.99);
    const auto as = random_points(n, 5, 200 + n, 0.9);
    for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
      const auto &x = pts[i], &y = pts[i + 1], &z = pts[i + 2];
      EXPECT_NEAR(bergman_dist(x, y), bergman_dist(y, x), 1e-10);
      EXPECT_LE(bergman_dist(x, z), bergman_dist(x, y) + bergman_dist(y, z) + 1e-10);
      for (const auto& a : as)
        EXPECT_NEAR(bergman_dist(mobius(a, x), mobius(a, y)), bergman_dist(x, y), 1e-8 * (1 + bergman_dist(x, y)));
    }
  }
}

TEST(Bergman, RadialValues) {
  for (double t : {0.0, 0.1, 0.5, 0.9, 0.999, 1.0 - 1e-9}) {
    const Point p{cplx(0.0, t)};
    EXPECT_NEAR(bergman_dist(Point::origin(1), p), std::atanh(t), 1e-7 * (1 + std::atanh(t)));
  }
  EXPECT_EQ(bergman_dist(Point{cplx(0.3, 0.1)}, Point{cplx(0.3, 0.1)}), 0.0);
}

TEST(Bergman, SaturationFlag) {
  const Point z{cplx(1.0 - 2e-14, 0.0)};
  const Point w{cplx(-(1.0 - 2e-14), 0.0)};
  const auto d = bergman_dist_checked(z, w);
  EXPECT_TRUE(std::isfinite(d.value));
  EXPECT_GT(d.value, 15.0);
  EXPECT_FALSE(bergman_dist_checked(Point{cplx(0.1, 0.0)}, Point{cplx(0.2, 0.0)}).saturated);
}

TEST(Bergman, DimensionMismatchThrows) {
  EXPECT_THROW(bergman_dist(Point::origin(1), Point::origin(2)), DomainError);
  EXPECT_THROW(mobius(Point::origin(2), Point::origin(1)), DomainError);
}

TEST(Hull, ContainsBallAndIsTight) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n = 1; n <= 2; ++n) {
    for (double r : {0.25, 1.0, 2.0}) {
      const double R = std::tanh(r) * (1 - 1e-12);
      for (double t : {0.0, 0.5, 0.95}) {
        std::array<cplx, 2> dir{cplx(0.6, 0.3), cplx(-0.2, 0.7)};
        const Point a = t == 0.0 ? Point::origin(n) : Point::on_ray(std::span<const cplx>(dir.data(), n), t);
        const MetricBall ball(a, r);
        const Box box = ball_euclidean_hull(ball);
        // phi_a maps the sphere |u| = tanh r onto the boundary of D(a, r).
        auto coord = [&](const Point& u, int k) {
          const Point w = mobius(a, u);
          return k % 2 == 0 ? w[k / 2].real() : w[k / 2].imag();
        };
        for (int k = 0; k < 2 * n; ++k) {
          for (double sign : {1.0, -1.0}) {
            Point best = lattice::uniform_ball_point(n, R, rng);
            best = Point::on_ray(best.coords(), R);
            double best_val = sign * coord(best, k);
            for (int it = 0; it < 4000; ++it) {
              const double step = 0.5 * std::pow(0.998, it);
              std::array<cplx, 2> c{};
              for (int i = 0; i < n; ++i) c[i] = best[i] + step * cplx(gauss(rng), gauss(rng));
              const Point cand = Point::on_ray(std::span<const cplx>(c.data(), n), R);
              EXPECT_TRUE(box.contains(mobius(a, cand)));
              const double v = sign * coord(cand, k);
              if (v > best_val) {
                best_val = v;
                best = cand;
              }
            }
            const double edge = sign > 0 ? box.hi[k] : -box.lo[k];
            EXPECT_LT(edge - best_val, 1e-6 * (box.hi[k] - box.lo[k]) + 1e-12) << "n=" << n << " r=" << r << " t=" << t;
          }
        }
      }
    }
  }
}
