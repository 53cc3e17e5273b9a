#include <gtest/gtest.h>

#include "carleson_lab/measures.hpp"
#include "oracles.hpp"

using namespace carleson_lab;
using namespace carleson_lab::measures;

namespace {

const quad::QuadConfig kCfg{};

Point real_point(double x) { return Point{cplx(x, 0.0)}; }

Point diag_point(int n, double t) {
  std::array<cplx, 2> dir{cplx(0.8, 0.1), cplx(0.3, -0.5)};
  return Point::on_ray(std::span<const cplx>(dir.data(), n), t);
}

}  // namespace

TEST(BallMass, VolumeOfMetricBalls) {
  EXPECT_NEAR(ball_mass(MeasureSpec::radial_power(1, 0.0), Point::origin(1), 1.0, kCfg), 0.5800256583859738, 1e-12);
  for (int n = 1; n <= 2; ++n) {
    for (double t : {0.0, 0.5, 0.9, 0.999}) {
      for (double r : {0.25, 0.5, 2.0}) {
        const double got = ball_mass(MeasureSpec::radial_power(n, 0.0), diag_point(n, t == 0.0 ? 1e-300 : t), r, kCfg);
        const double expect = oracle::metric_ball_volume(n, t, r);
        EXPECT_NEAR(got / expect, 1.0, 1e-10) << "n=" << n << " t=" << t << " r=" << r;
      }
    }
  }
}

TEST(BallMass, RadialPowerAtOrigin) {
  for (int n = 1; n <= 2; ++n) {
    for (double theta : {-0.75, 0.5, 2.0}) {
      const double R = std::tanh(0.8);
      const double expect = oracle::simpson([&](double u) { return std::pow(1 - u, theta) * n * std::pow(u, n - 1); }, 0.0, R * R);
      const double got = ball_mass(MeasureSpec::radial_power(n, theta), Point::origin(n), 0.8, kCfg);
      EXPECT_NEAR(got / expect, 1.0, 1e-8) << "n=" << n << " theta=" << theta;
    }
  }
}

TEST(BallMass, AgreesWithQmc) {
  quad::QuadConfig cfg = kCfg;
  cfg.mc_samples = 1 << 15;
  const auto mu = MeasureSpec::sum(1, {MeasureSpec::radial_power(1, -0.5),
                                       MeasureSpec::weighted_density(1, Builtin::half_plane_bump, 1.0)});
  for (double t : {0.3, 0.8}) {
    const Point z{std::polar(t, 0.4)};
    const double got = ball_mass(mu, z, 0.5, cfg);
    const auto est = ball_mass_qmc(mu, z, 0.5, cfg);
    EXPECT_NEAR(got, est.value, 4 * est.std_error + 2e-3 * got);
  }
}

TEST(BallMass, Atoms) {
  const auto d05 = MeasureSpec::atomic(1, {{real_point(0.5), 1.0}});
  EXPECT_EQ(ball_mass(d05, real_point(0.5), 0.01, kCfg), 1.0);
  const auto d09 = MeasureSpec::atomic(1, {{real_point(0.9), 1.0}});
  EXPECT_EQ(ball_mass(d09, Point::origin(1), 1.0, kCfg), 0.0);
  EXPECT_EQ(ball_mass(d09, Point::origin(1), 1.5, kCfg), 1.0);
}

TEST(Khat, Examples) {
  EXPECT_NEAR(khat(MeasureSpec::radial_power(1, 0.0), 1.0, 0.0, Point::origin(1), kCfg), 0.5800256583859738, 1e-12);
  EXPECT_EQ(khat(MeasureSpec::zero(1), 1.0, 0.0, real_point(0.3), kCfg), 0.0);
  const auto d05 = MeasureSpec::atomic(1, {{real_point(0.5), 1.0}});
  EXPECT_NEAR(khat(d05, 0.1, 0.0, real_point(0.5), kCfg), 1.0 / (0.75 * 0.75), 1e-14);
}

TEST(Measure, AdditivityAndScaling) {
  const auto m1 = MeasureSpec::radial_power(2, 0.5);
  const auto m2 = MeasureSpec::weighted_density(2, Builtin::angular_cos2, -0.25, 2.0);
  const auto both = MeasureSpec::sum(2, {m1, m2});
  const Point z = diag_point(2, 0.7);
  EXPECT_NEAR(ball_mass(both, z, 0.5, kCfg), ball_mass(m1, z, 0.5, kCfg) + ball_mass(m2, z, 0.5, kCfg), 1e-10);

  const auto atoms = MeasureSpec::atomic(1, {{real_point(0.5), 0.25}, {Point{cplx(0.1, 0.7)}, 2.0}});
  const Point w{cplx(0.3, 0.3)};
  EXPECT_EQ(berezin(scaled(atoms, 3.0), 1.0, 0.0, w, kCfg), 3.0 * berezin(atoms, 1.0, 0.0, w, kCfg));
  const double b = berezin(m1, 1.0, 0.0, z, kCfg);
  EXPECT_NEAR(berezin(scaled(m1, 3.0), 1.0, 0.0, z, kCfg), 3.0 * b, 1e-10 * b);
}

TEST(Berezin, AtOriginIsTotalMass) {
  // Densities are supported on |w| <= 1 - outer_cutoff.
  const double u_max = std::pow(1.0 - kCfg.outer_cutoff, 2);
  for (int n = 1; n <= 2; ++n) {
    for (double theta : {-0.5, 0.0, 1.5}) {
      const auto mu = MeasureSpec::radial_power(n, theta);
      const double mass = oracle::simpson([&](double u) { return std::pow(1 - u, theta) * n * std::pow(u, n - 1); }, 0.0, u_max);
      EXPECT_NEAR(berezin(mu, 1.0, 0.0, Point::origin(n), kCfg) / mass, 1.0, 2e-4);
      EXPECT_NEAR(total_mass(mu, kCfg) / mass, 1.0, 2e-4);
    }
  }
}

TEST(Berezin, SingleAtom) {
  const Point w{cplx(0.4, -0.7)};
  const Point z{cplx(0.2, 0.5)};
  const auto mu = MeasureSpec::atomic(1, {{w, 1.0}});
  const double s = 1.5, alpha = 0.5;
  const double expect = std::pow(1 - z.norm2(), s) / std::pow(std::abs(1.0 - z[0] * std::conj(w[0])), 2 + s + alpha);
  EXPECT_NEAR(berezin(mu, s, alpha, z, kCfg), expect, 1e-13 * expect);
}

TEST(Berezin, RadialPowerMatchesSeries) {
  struct Case {
    double theta, t, cutoff;
  };
  // The series is for the untruncated measure; the cutoff keeps the neglected mass below the tolerance.
  const std::vector<Case> cases{{0.0, 0.9, 1e-6}, {0.0, 0.99, 1e-6},
                                {1.5, 0.999, 1e-6}, {-0.75, 0.9, 1e-14}, {-0.75, 0.99, 1e-14}, {0.5, 0.999, 1e-12}};
  for (int n = 1; n <= 2; ++n) {
    for (const auto& c : cases) {
      quad::QuadConfig cfg = kCfg;
      cfg.outer_cutoff = c.cutoff;
      const double s = 1.0, alpha = 0.0;
      const double expect =
          std::pow(1 - c.t * c.t, s) * oracle::kernel_moment(n, c.theta, 0.5 * (n + 1 + s + alpha), c.t);
      const double got = berezin(MeasureSpec::radial_power(n, c.theta), s, alpha, diag_point(n, c.t), cfg);
      EXPECT_NEAR(got / expect, 1.0, n == 1 ? 3e-3 : 1e-2) << "n=" << n << " theta=" << c.theta << " t=" << c.t;
    }
  }
}

TEST(Berezin, ComfortWarning) {
  const auto mu = MeasureSpec::radial_power(1, 0.0);
  EXPECT_FALSE(berezin_checked(mu, 1.0, 0.0, real_point(0.99), kCfg).warning);
  EXPECT_TRUE(berezin_checked(mu, 1.0, 0.0, real_point(0.99999), kCfg).warning);
  EXPECT_THROW(berezin(mu, 0.0, 0.0, real_point(0.5), kCfg), DomainError);
}

TEST(Density, BuiltinTotalMasses) {
  // Over |z| <= rho: int max(Re z, 0) dv = 2 rho^3 / (3 pi); the mean of cos^2 over angles is 1/2.
  const double rho = 1.0 - kCfg.outer_cutoff;
  EXPECT_NEAR(total_mass(MeasureSpec::weighted_density(1, Builtin::half_plane_bump, 0.0), kCfg),
              2.0 * std::pow(rho, 3) / (3.0 * kPi), 1e-5);
  EXPECT_NEAR(total_mass(MeasureSpec::weighted_density(1, Builtin::angular_cos2, 0.0), kCfg), 0.5 * rho * rho, 1e-12);
  EXPECT_NEAR(total_mass(MeasureSpec::weighted_density(2, Builtin::one, 0.0, 2.5), kCfg), 2.5 * std::pow(rho, 4), 1e-12);
}

TEST(Measure, Validation) {
  EXPECT_THROW(MeasureSpec::radial_power(1, -2.0), DomainError);
  EXPECT_NO_THROW(MeasureSpec::radial_power(1, -1.5));
  EXPECT_THROW(MeasureSpec::atomic(1, {{real_point(0.5), 0.0}}), DomainError);
  EXPECT_THROW(MeasureSpec::atomic(2, {{real_point(0.5), 1.0}}), DomainError);
  EXPECT_THROW(MeasureSpec::sum(2, {MeasureSpec::zero(1)}), DomainError);
  EXPECT_THROW(parse_builtin("gaussian"), DomainError);
  EXPECT_TRUE(is_zero(MeasureSpec::zero(1)));
  EXPECT_TRUE(is_zero(scaled(MeasureSpec::radial_power(1, 0.0), 0.0)));
  EXPECT_FALSE(is_zero(MeasureSpec::radial_power(1, 0.0)));
}

TEST(LatticeSequence, Examples) {
  const auto lat = lattice::build_lattice(0.5, 1, 0.02);
  const auto zero = lattice_sequence(MeasureSpec::zero(1), lat, 2.0, kCfg);
  for (double v : zero.values) EXPECT_EQ(v, 0.0);

  // v(D(a, r)) / (1-|a|^2)^2 = R^2 / (1 - R^2 |a|^2)^2, between tanh^2 r and sinh^2 r cosh^2 r.
  const auto dv = lattice_sequence(MeasureSpec::radial_power(1, 0.0), lat, 2.0, kCfg);
  const double R = std::tanh(0.5);
  for (std::size_t k = 0; k < dv.values.size(); ++k) {
    const double expect = R * R / std::pow(1 - R * R * lat.points[k].norm2(), 2);
    EXPECT_NEAR(dv.values[k] / expect, 1.0, 1e-10);
  }

  const Point a = lat.points[1];
  const auto atom = lattice_sequence(MeasureSpec::atomic(1, {{a, 2.0}}), lat, 2.0, kCfg);
  EXPECT_NEAR(atom.values[1], 2.0 / std::pow(1 - a.norm2(), 2.0), 1e-12);
}
