#pragma once

// Reference values computed independently of the library's quadrature.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

/// Integral over B_n of (1-|w|^2)^t |1 - <w,a>|^{-2 sigma} dv(w), |a| = a_abs,
/// by the power series of the kernel and orthogonality of monomials:
///   sum_k [(sigma)_k / k!]^2 |a|^{2k} n! k! Gamma(t+1) / Gamma(n+k+t+1).
inline double kernel_moment(int n, double t, double sigma, double a_abs) {
  const double a2 = a_abs * a_abs;
  double coef = 1.0;  // (sigma)_k / k!
  double log_tail = std::lgamma(n + 1.0) + std::lgamma(t + 1.0);
  double sum = 0.0;
  for (int k = 0; k < 2'000'000; ++k) {
    const double log_pow = k == 0 ? 0.0 : k * std::log(a2);
    const double term = coef * coef * std::exp(log_pow + log_tail + std::lgamma(k + 1.0) - std::lgamma(n + k + t + 1.0));
    sum += term;
    if (a2 == 0.0) break;
    if (k > 50 && term < 1e-17 * sum) break;
    coef *= (sigma + k) / (k + 1.0);
  }
  return sum;
}

/// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12, int depth = 50) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

/// Integral over B_n of F(|z|^2) dv = int_0^1 F(u) n u^{n-1} du.
inline double radial_integral(int n, const std::function<double(double)>& F, double tol = 1e-12) {
  return simpson([&](double u) { return F(u) * n * std::pow(u, n - 1); }, 0.0, 1.0, tol);
}

/// Normalized volume of D(a, r): R^{2n} ((1-|a|^2) / (1 - R^2 |a|^2))^{n+1}, R = tanh r.
inline double metric_ball_volume(int n, double a_abs, double r) {
  const double R = std::tanh(r), a2 = a_abs * a_abs;
  return std::pow(R, 2 * n) * std::pow((1.0 - a2) / (1.0 - R * R * a2), n + 1);
}

/// n = 1 pseudo-hyperbolic distance |z - w| / |1 - z conj(w)|.
inline double disk_rho(std::complex<double> z, std::complex<double> w) {
  return std::abs(z - w) / std::abs(1.0 - z * std::conj(w));
}

}  // namespace oracle
