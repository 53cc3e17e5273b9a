#include <gtest/gtest.h>

#include "carleson_lab/operators.hpp"

using namespace carleson_lab;
using namespace carleson_lab::operators;
using measures::MeasureSpec;

namespace {

const quad::QuadConfig kCfg{};

Point slanted_point(int n, double t) {
  std::array<cplx, 2> dir{cplx(0.6, 0.2), cplx(-0.3, 0.5)};
  return Point::on_ray(std::span<const cplx>(dir.data(), n), t);
}

}  // namespace

TEST(Toeplitz, Hypotheses) {
  ToeplitzSpec ok{MeasureSpec::radial_power(1, 0.0), 1.0};
  EXPECT_FALSE(toeplitz_violation(ok));
  ToeplitzSpec bad{MeasureSpec::radial_power(1, 0.0), -0.5, 1.0, 0.0, 2.0, 0.0};
  const auto v = toeplitz_violation(bad);
  ASSERT_TRUE(v.has_value());
  EXPECT_NE(v->find("n+1+beta"), std::string::npos) << *v;
  EXPECT_THROW(toeplitz_params(bad), DomainError);
  EXPECT_THROW(toeplitz_apply(bad, spaces::constant(1, 1.0), Point::origin(1), kCfg), DomainError);
}

TEST(Toeplitz, Params) {
  ToeplitzSpec s{MeasureSpec::radial_power(1, 0.0), 1.0, 2.0, 1.0, 4.0, 0.0};
  const auto P = toeplitz_params(s);
  EXPECT_DOUBLE_EQ(P.lambda, 1.25);
  EXPECT_DOUBLE_EQ(P.gamma, 1.5 / 1.25);
}

TEST(Toeplitz, ReproducingDisk) {
  // mu = (1-|w|^2)^beta dv makes T the identity over c_beta.
  quad::QuadConfig cfg = kCfg;
  cfg.outer_cutoff = 1e-12;
  for (double beta : {0.0, 0.5, 1.0, 2.5}) {
    const ToeplitzSpec spec{MeasureSpec::radial_power(1, beta), beta};
    const double c = quad::normalizing_constant(1, beta);
    std::vector<spaces::AnalyticFn> fns{spaces::kernel_test_function(Point{cplx(0.3, 0.6)}, 2.0)};
    for (int k = 0; k <= 6; ++k) fns.push_back(spaces::monomial(1, k));
    for (const auto& f : fns) {
      for (double t : {0.0, 0.5, 0.9, 0.97}) {
        const Point z{std::polar(t, 0.4)};
        const cplx got = toeplitz_apply(spec, f, z, cfg) * c;
        EXPECT_LT(std::abs(got - f(z)), 1e-8 * std::max(1.0, std::abs(f(z)))) << std::abs(got - f(z)) << " " << beta << " " << f.descriptor << " " << t;
      }
    }
  }
}

TEST(Toeplitz, ReproducingNearBoundary) {
  quad::QuadConfig cfg = kCfg;
  cfg.outer_cutoff = 1e-12;
  const ToeplitzSpec spec{MeasureSpec::radial_power(1, 0.0), 0.0};
  for (int k : {2, 6}) {
    const auto f = spaces::monomial(1, k);
    const Point z{std::polar(0.995, -2.0)};
    EXPECT_LT(std::abs(toeplitz_apply(spec, f, z, cfg) - f(z)), 1e-8) << k;
  }
}

TEST(Toeplitz, ReproducingBall) {
  quad::QuadConfig cfg = kCfg;
  cfg.outer_cutoff = 1e-12;
  cfg.angular_nodes = 512;
  const ToeplitzSpec spec{MeasureSpec::radial_power(2, 1.0), 1.0};
  const double c = quad::normalizing_constant(2, 1.0);
  std::vector<spaces::AnalyticFn> fns{spaces::kernel_test_function(slanted_point(2, 0.5), 1.5)};
  for (int k = 0; k <= 6; k += 2) fns.push_back(spaces::monomial(2, k));
  for (const auto& f : fns) {
    for (double t : {0.3, 0.9}) {
      const Point z = slanted_point(2, t);
      const cplx got = toeplitz_apply(spec, f, z, cfg) * c;
      EXPECT_LT(std::abs(got - f(z)), 1e-6 * std::max(1.0, std::abs(f(z)))) << f.descriptor << " " << t;
    }
  }
}

TEST(Toeplitz, Atoms) {
  const auto f = spaces::kernel_test_function(Point{cplx(0.2, -0.4)}, 1.5);
  const ToeplitzSpec at0{MeasureSpec::atomic(1, {{Point::origin(1), 2.5}}), 0.5};
  for (double t : {0.0, 0.7}) EXPECT_LT(std::abs(toeplitz_apply(at0, f, Point{std::polar(t, 2.0)}, kCfg) - 2.5 * f(Point::origin(1))), 1e-14);

  const Point a{cplx(0.5, 0.1)}, b{cplx(-0.2, 0.7)}, z{cplx(0.3, 0.3)};
  const ToeplitzSpec two{MeasureSpec::atomic(1, {{a, 1.0}, {b, 0.25}}), 1.0};
  auto term = [&](const Point& w) { return f(w) * std::pow(1.0 - inner(z, w), -3.0); };
  const cplx expect = term(a) + 0.25 * term(b);
  EXPECT_LT(std::abs(toeplitz_apply(two, f, z, kCfg) - expect), 1e-13 * std::abs(expect));
  const ToeplitzSpec tripled{measures::scaled(two.mu, 3.0), 1.0};
  EXPECT_LT(std::abs(toeplitz_apply(tripled, f, z, kCfg) - 3.0 * expect), 1e-13 * std::abs(expect));
}

TEST(Toeplitz, TotalMassAtOrigin) {
  const ToeplitzSpec spec{MeasureSpec::radial_power(2, 0.5, 1.5), 1.0};
  const double mass = 1.5 / quad::normalizing_constant(2, 0.5);
  EXPECT_NEAR(std::abs(toeplitz_apply(spec, spaces::constant(2, 1.0), Point::origin(2), kCfg)), mass, 1e-5 * mass);
}

TEST(Toeplitz, KernelFamilyOfWeightedVolume) {
  const ToeplitzSpec spec{MeasureSpec::radial_power(1, 1.0), 1.0};
  const auto fam = toeplitz_family(spec, kCfg);
  for (double v : fam.values) EXPECT_NEAR(v, 0.5, 5e-3);
  ToeplitzOptions opt;
  const auto rep = toeplitz_equivalence_check(spec, kCfg, {}, opt);
  EXPECT_EQ(rep.operator_verdict, carleson::Verdict::carleson);
  EXPECT_TRUE(rep.consistent);
  EXPECT_GE(rep.estimate.value, 0.5 * (1 - 5e-3));
  EXPECT_LE(rep.estimate.value, 1.0);
}

TEST(Toeplitz, ZeroMeasure) {
  const ToeplitzSpec spec{MeasureSpec::zero(1), 1.0};
  EXPECT_EQ(toeplitz_apply(spec, spaces::constant(1, 1.0), Point{cplx(0.5, 0.0)}, kCfg), cplx(0.0));
  const auto fam = toeplitz_family(spec, kCfg);
  EXPECT_EQ(fam.best, 0.0);
}

TEST(Toeplitz, UnboundedMeasure) {
  // lambda = 1, gamma = 1: threshold theta = 1.
  const ToeplitzSpec spec{MeasureSpec::radial_power(1, 0.5), 1.0};
  const auto rep = toeplitz_equivalence_check(spec, kCfg, {}, {});
  EXPECT_EQ(rep.operator_verdict, carleson::Verdict::not_carleson);
  EXPECT_TRUE(rep.consistent);
}

TEST(Section5, SimpleImages) {
  const auto z1 = spaces::monomial(1, 1), one = spaces::constant(1, 1.0);
  for (double t : {0.3, 0.8}) {
    const Point z{std::polar(t, 1.1)};
    EXPECT_LT(std::abs(cesaro_apply(z1, one, z) - z[0]), 1e-14);
    EXPECT_LT(std::abs(companion_apply(z1, one, z)), 1e-14);
    const auto m = apply_operator(OperatorKind::multiplier, spaces::monomial(1, 2), z1);
    EXPECT_LT(std::abs(m(z) - std::pow(z[0], 3)), 1e-14);
    EXPECT_LT(std::abs(m.R(z) - 3.0 * std::pow(z[0], 3)), 1e-14);
  }
}

TEST(Section5, RadialIdentities) {
  for (int n = 1; n <= 2; ++n) {
    const auto g = spaces::monomial(n, 2);
    const auto f = spaces::kernel_test_function(slanted_point(n, 0.6), 1.5);
    const auto rep = operator_identities(g, f, 16, 7);
    EXPECT_LT(rep.cesaro, 1e-10);
    EXPECT_LT(rep.companion, 1e-10);
    EXPECT_LT(rep.multiplier, 1e-10);
    EXPECT_LT(rep.ray_constant, 1e-10);
  }
  const auto rep = operator_identities(spaces::g_log(1), spaces::monomial(1, 1), 16, 11);
  EXPECT_LT(rep.cesaro, 1e-10);
}

TEST(Section5, Regimes) {
  Section5Params sp;  // n = 1: critical beta = 1 + 3/2
  sp.beta = 3.0;
  EXPECT_EQ(regime_for(1, sp), Regime::bloch);
  sp.beta = 2.5;
  EXPECT_EQ(regime_for(1, sp), Regime::bounded_analytic);
  sp.beta = 2.0;
  EXPECT_EQ(regime_for(1, sp), Regime::zero);
  EXPECT_EQ(regime_for(2, sp), Regime::zero);
}

TEST(Section5, Hypotheses) {
  Section5Params sp;
  EXPECT_FALSE(section5_violation(1, OperatorKind::cesaro, sp));
  sp.alpha = 0.0;
  EXPECT_EQ(section5_violation(1, OperatorKind::cesaro, sp).value_or(""), "alpha > 0 fails");
  EXPECT_FALSE(section5_violation(1, OperatorKind::companion, sp));
  sp = {};
  sp.beta = 1.0;
  EXPECT_NE(section5_violation(1, OperatorKind::cesaro, sp).value_or("").find("beta - (n+1+alpha)/t"), std::string::npos);
  sp = {};
  sp.t = 8.0;
  sp.s = 0.0;
  sp.p = 0.5;
  EXPECT_TRUE(section5_violation(1, OperatorKind::multiplier, sp).has_value());
}

TEST(Section5, CesaroBoundedSymbol) {
  Section5Params sp;  // sigma = beta - (n+1+alpha)/t = 1
  const auto rep = jg_boundedness_check(spaces::monomial(1, 1), sp, kCfg);
  EXPECT_EQ(rep.regime, "bloch");
  EXPECT_NEAR(rep.symbol_side.value, 0.384900, 1e-5);  // sup |z| (1-|z|^2)
  EXPECT_TRUE(rep.symbol_side.bounded);
  EXPECT_TRUE(rep.operator_side.bounded);
  EXPECT_TRUE(rep.consistent);
}
