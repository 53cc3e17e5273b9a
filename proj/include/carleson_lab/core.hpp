#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace carleson_lab {

using cplx = std::complex<double>;

/// Largest complex dimension with a dedicated quadrature chart.
inline constexpr int kMaxDim = 2;

/// Points with |z| >= 1 - kDomainGuard are rejected.
inline constexpr double kDomainGuard = 1e-14;

inline constexpr double kPi = 3.14159265358979323846;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point of the unit ball B_n, n <= kMaxDim.
class Point {
 public:
  Point() = default;

  Point(std::initializer_list<cplx> coords) {
    if (coords.size() < 1 || coords.size() > static_cast<std::size_t>(kMaxDim)) {
      throw DomainError("Point: dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
    dim_ = static_cast<int>(coords.size());
    std::copy(coords.begin(), coords.end(), c_.begin());
    validate();
  }

  static Point origin(int n) {
    check_dim(n);
    Point p;
    p.dim_ = n;
    return p;
  }

  static Point from_coords(std::span<const cplx> coords) {
    if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxDim)) {
      throw DomainError("Point: dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    }
    Point p;
    p.dim_ = static_cast<int>(coords.size());
    std::copy(coords.begin(), coords.end(), p.c_.begin());
    p.validate();
    return p;
  }

  /// Point on the ray through `direction` (any nonzero vector) with Euclidean norm `radius`.
  static Point on_ray(std::span<const cplx> direction, double radius) {
    double len = 0.0;
    for (const auto& v : direction) len += std::norm(v);
    len = std::sqrt(len);
    if (!(len > 0.0)) throw DomainError("Point::on_ray: zero direction");
    std::array<cplx, kMaxDim> buf{};
    for (std::size_t i = 0; i < direction.size() && i < buf.size(); ++i) buf[i] = direction[i] * (radius / len);
    return from_coords(std::span<const cplx>(buf.data(), direction.size()));
  }

  static void check_dim(int n) {
    if (n < 1 || n > kMaxDim) {
      throw DomainError("dimension n=" + std::to_string(n) + " unsupported (1 <= n <= " +
                        std::to_string(kMaxDim) + ")");
    }
  }

  int dim() const { return dim_; }
  const cplx& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::span<const cplx> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += std::norm(c_[static_cast<std::size_t>(i)]);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }

 private:
  void validate() const {
    for (int i = 0; i < dim_; ++i) {
      if (!std::isfinite(c_[static_cast<std::size_t>(i)].real()) ||
          !std::isfinite(c_[static_cast<std::size_t>(i)].imag()))
        throw DomainError("Point: non-finite coordinate");
    }
    if (norm() >= 1.0 - kDomainGuard) throw DomainError("Point: |z| >= 1 - 1e-14 (outside the unit ball)");
  }

  std::array<cplx, kMaxDim> c_{};
  int dim_ = 1;
};

/// <z, w> = sum z_i conj(w_i).
inline cplx inner(const Point& z, const Point& w) {
  cplx s{0.0, 0.0};
  for (int i = 0; i < z.dim(); ++i) s += z[i] * std::conj(w[i]);
  return s;
}

inline void require_same_dim(const Point& a, const Point& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DomainError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()) + ")");
  }
}

// ---------------------------------------------------------------------------
// Deterministic reduction and parallel evaluation.

/// Pairwise (tree) summation; the result depends only on the input order.
template <class T>
T pairwise_sum(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() <= 8) {
    T s = v[0];
    for (std::size_t i = 1; i < v.size(); ++i) s += v[i];
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(std::span<const T>(v.data(), v.size()));
}

namespace detail {
inline int& thread_override() {
  static int n = 0;
  return n;
}
}  // namespace detail

/// Worker count: explicit override, then CARLESON_LAB_THREADS, then 1.
inline int thread_count() {
  if (detail::thread_override() > 0) return detail::thread_override();
  if (const char* env = std::getenv("CARLESON_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

inline void set_thread_count(int n) { detail::thread_override() = n < 0 ? 0 : n; }

/// Calls fn(i) for i in [0, count). Each index is handled by exactly one
/// worker, so results stored per index are independent of the thread count.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int workers = std::min<int>(thread_count(), static_cast<int>(std::max<std::size_t>(count / 64, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  const std::size_t chunk = (count + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Evaluates fn(i) into a vector, then reduces pairwise.
template <class T, class Fn>
T parallel_sum(std::size_t count, Fn&& fn) {
  std::vector<T> vals(count);
  parallel_for(count, [&](std::size_t i) { vals[i] = fn(i); });
  return pairwise_sum(vals);
}

}  // namespace carleson_lab
