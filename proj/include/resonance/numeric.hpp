#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "resonance/error.hpp"

namespace resonance {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kE = std::numbers::e;

/// A value together with an estimate of its absolute error.
template <class T>
struct Estimate {
  T value{};
  double error = 0.0;
};

/// Neumaier-compensated accumulator. Works for double and Complex.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, Complex>) {
      double re = sum_.real(), im = sum_.imag();
      double cr = comp_.real(), ci = comp_.imag();
      step(re, cr, x.real());
      step(im, ci, x.imag());
      sum_ = {re, im};
      comp_ = {cr, ci};
    } else {
      step(sum_, comp_, x);
    }
  }
  T value() const { return sum_ + comp_; }

 private:
  static void step(double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  T sum_{};
  T comp_{};
};

/// log applied `depth` times; log_1 = log.
inline double iterated_log(double x, int depth) {
  for (int i = 0; i < depth; ++i) {
    if (!(x > 0.0)) throw InvalidArgument("iterated log of a non-positive value");
    x = std::log(x);
  }
  return x;
}

/// log N, log_2 N, log_3 N for the asymptotic formulas. Every iterated
/// log must exceed 1, i.e. N > e^(e^e).
struct IteratedLogs {
  double l1, l2, l3;

  static IteratedLogs of(double n) {
    if (!(n > 0.0)) throw InvalidArgument("iterated logs need a positive argument");
    IteratedLogs r{};
    r.l1 = std::log(n);
    r.l2 = r.l1 > 0 ? std::log(r.l1) : -1.0;
    r.l3 = r.l2 > 0 ? std::log(r.l2) : -1.0;
    if (!(r.l3 > 1.0))
      throw InvalidArgument("argument below the asymptotic regime: need log_3 N > 1 (N > e^(e^e))");
    return r;
  }
};

/// Exact binomial coefficient; throws on 64-bit overflow.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) throw BudgetExceeded("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Trapezoid-rule Cauchy integral for the derivative of order `order` of an
/// analytic function at z0, on a circle of the given radius. The node count
/// doubles (reusing earlier nodes) until two successive estimates agree to
/// `tol`.
template <class F>
Estimate<Complex> cauchy_derivative(F&& f, Complex z0, int order, double radius, double tol,
                                    int min_nodes = 16, int max_nodes = 4096) {
  if (order < 0) throw InvalidArgument("derivative order must be non-negative");
  if (order == 0) return {f(z0), 0.0};
  // Weighted node sum S_N = sum f(z_k) e^{-i order theta_k}; estimate = order!/ (N r^order) S_N.
  std::vector<Complex> samples;
  auto node = [&](int k, int n) {
    double th = 2.0 * kPi * k / n;
    Complex w = std::polar(1.0, th);
    return f(z0 + radius * w) * std::polar(1.0, -order * th);
  };
  const double scale = factorial(order) / std::pow(radius, order);
  int n = min_nodes;
  CompensatedSum<Complex> acc;
  for (int k = 0; k < n; ++k) acc.add(node(k, n));
  Complex sum = acc.value();
  Complex prev = scale * sum / double(n);
  while (n < max_nodes) {
    CompensatedSum<Complex> odd;
    for (int k = 1; k < 2 * n; k += 2) odd.add(node(k, 2 * n));
    sum += odd.value();
    n *= 2;
    Complex cur = scale * sum / double(n);
    double diff = std::abs(cur - prev);
    if (diff <= tol) return {cur, diff};
    prev = cur;
  }
  throw ConvergenceFailure("Cauchy derivative did not converge within the node ceiling");
}

}  // namespace resonance
