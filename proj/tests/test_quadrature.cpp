#include <gtest/gtest.h>

#include "carleson_lab/quadrature.hpp"
#include "oracles.hpp"

using namespace carleson_lab;
using namespace carleson_lab::quad;

TEST(GaussLegendre, ExactForPolynomials) {
  for (int nodes : {1, 2, 5, 16, 64}) {
    for (int deg = 0; deg < 2 * nodes; ++deg) {
      const double got = integrate_interval([&](double x) { return std::pow(x, deg); }, 0.0, 1.0, nodes);
      EXPECT_NEAR(got, 1.0 / (deg + 1), 1e-13) << nodes << " nodes, degree " << deg;
    }
  }
}

TEST(NormalizingConstant, KnownValues) {
  EXPECT_NEAR(normalizing_constant(1, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(normalizing_constant(1, 1.0), 2.0, 1e-14);
  EXPECT_NEAR(normalizing_constant(2, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(normalizing_constant(2, 1.0), 3.0, 1e-13);
  EXPECT_THROW(normalizing_constant(1, -1.0), DomainError);
}

TEST(BallRule, WeightedMeasuresAreProbability) {
  const QuadConfig cfg;
  for (int n = 1; n <= 2; ++n) {
    for (double alpha : {-0.5, 0.0, 1.0, 2.5}) {
      const double total = integrate_ball([](const Point&) { return 1.0; }, alpha, cfg, n);
      EXPECT_NEAR(total, 1.0, 1e-8) << "n=" << n << " alpha=" << alpha;
    }
  }
}

TEST(BallRule, RadialMoments) {
  const QuadConfig cfg;
  EXPECT_NEAR(integrate_ball([](const Point& z) { return z.norm2(); }, 0.0, cfg, 1), 0.5, 1e-12);
  for (int n = 1; n <= 2; ++n) {
    for (double t : {0.0, 0.5, 3.0}) {
      const double expect = oracle::radial_integral(n, [&](double u) { return u * u * std::pow(1 - u, t); });
      const double got = integrate_ball([](const Point& z) { return z.norm2() * z.norm2(); }, t, cfg, n) /
                         normalizing_constant(n, t);
      EXPECT_NEAR(got, expect, 1e-9 * expect);
    }
  }
}

TEST(BallRule, CoordinateMoments) {
  // int |z_1|^{2k} (1-|z|^2)^t dv = n! k! Gamma(t+1) / Gamma(n+k+t+1)
  const QuadConfig cfg;
  for (int n = 1; n <= 2; ++n) {
    for (int k : {1, 3}) {
      const double t = 0.5;
      const double expect = oracle::kernel_moment(n, t, 0.0, 0.0) *
                            std::exp(std::lgamma(k + 1.0) + std::lgamma(n + t + 1.0) - std::lgamma(n + k + t + 1.0));
      const double got =
          integrate_ball([&](const Point& z) { return std::pow(std::norm(z[0]), k); }, t, cfg, n) / normalizing_constant(n, t);
      EXPECT_NEAR(got, expect, 1e-9 * expect);
    }
  }
}

struct KernelCase {
  int n;
  double t;
  double sigma;
  double a;
};

class KernelMoment : public ::testing::TestWithParam<KernelCase> {};

TEST_P(KernelMoment, FocusedRuleMatchesSeries) {
  const auto c = GetParam();
  std::array<cplx, 2> dir{cplx(0.3, 0.4), cplx(-0.5, 0.2)};
  const Point a = Point::on_ray(std::span<const cplx>(dir.data(), c.n), c.a);
  const double expect = oracle::kernel_moment(c.n, c.t, c.sigma, c.a);
  const bool pull = 2.0 * c.sigma - (c.n + 1) - c.t > 0.0;
  const QuadConfig cfg;
  const double got = integrate_ball([&](const Point& w) { return std::pow(std::norm(1.0 - inner(w, a)), -c.sigma); }, c.t,
                                    cfg, c.n, Focus{a, pull}) /
                     normalizing_constant(c.n, c.t);
  EXPECT_NEAR(got / expect, 1.0, 2e-3) << "got " << got << " expect " << expect;
}

INSTANTIATE_TEST_SUITE_P(Kernels, KernelMoment,
                         ::testing::Values(KernelCase{1, 0.0, 1.0, 0.9}, KernelCase{1, 0.0, 2.0, 0.99},
                                           KernelCase{1, 1.0, 2.5, 0.999}, KernelCase{1, -0.5, 1.5, 0.995},
                                           KernelCase{1, 0.5, 0.75, 0.999}, KernelCase{2, 0.0, 1.5, 0.9},
                                           KernelCase{2, 0.0, 3.0, 0.99}, KernelCase{2, 1.0, 2.5, 0.999},
                                           KernelCase{2, 0.5, 1.0, 0.99}));

TEST(BallRule, RefinementReducesKernelError) {
  // Critical power: the integral grows like log(1/(1-|a|)) and converges slowly.
  const Point a = Point::on_ray(std::array<cplx, 2>{cplx(0.3, 0.4), cplx(-0.5, 0.2)}, 0.999);
  const double expect = oracle::kernel_moment(2, 1.0, 2.0, 0.999);
  double prev = 1.0;
  for (double f : {0.5, 1.0, 2.0}) {
    const double got = integrate_ball([&](const Point& w) { return std::pow(std::norm(1.0 - inner(w, a)), -2.0); }, 1.0,
                                      QuadConfig{}.scaled(f), 2, Focus{a, false}) /
                       normalizing_constant(2, 1.0);
    const double err = std::abs(got / expect - 1.0);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 5e-2);
}

TEST(BallRule, NanIsReported) {
  const QuadConfig cfg = QuadConfig{}.scaled(0.125);
  EXPECT_THROW(integrate_ball([](const Point&) { return std::nan(""); }, 0.0, cfg, 1), NumericalError);
}

TEST(Config, Validation) {
  QuadConfig cfg;
  cfg.radial_nodes = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = QuadConfig{};
  cfg.outer_cutoff = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Region, MetricBallVolume) {
  QuadConfig cfg;
  cfg.mc_samples = 1 << 15;
  for (int n = 1; n <= 2; ++n) {
    for (double t : {0.0, 0.6, 0.9}) {
      std::array<cplx, 2> dir{cplx(1.0, 0.0), cplx(0.0, 1.0)};
      const Point a = t == 0.0 ? Point::origin(n) : Point::on_ray(std::span<const cplx>(dir.data(), n), t);
      const geometry::MetricBall ball(a, 0.5);
      const auto est = integrate_region([](const Point&) { return 1.0; },
                                        [&](const Point& w) { return geometry::ball_membership(ball, w); },
                                        geometry::ball_euclidean_hull(ball), cfg);
      const double expect = oracle::metric_ball_volume(n, t, 0.5);
      EXPECT_NEAR(est.value, expect, 4.0 * est.std_error + 1e-3 * expect);
      EXPECT_LT(est.std_error, 0.02 * expect);
    }
  }
}
