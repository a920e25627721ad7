#include "resonance/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "resonance/error.hpp"
#include "resonance/quadrature.hpp"

namespace resonance {

KernelSpec::KernelSpec(int eta_, double epsilon_, double logT_) : eta(eta_), epsilon(epsilon_), logT(logT_) {
  if (eta < 1) throw InvalidArgument("kernel: eta must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidArgument("kernel: epsilon must be positive");
  if (!(logT > 1.0)) throw InvalidArgument("kernel: log T must exceed 1");
}

KernelSpec KernelSpec::from_a(int eta, double a) {
  if (!(a > 0.0)) throw InvalidArgument("kernel: a must be positive");
  return KernelSpec(eta, a * eta / 2.0, 2.0);
}

namespace {

template <class T>
T sinc_power(T x, int n) {
  if (std::abs(x) < 1e-4) {
    // log(sin x / x) = -x^2/6 - x^4/180 - x^6/2835 - ...
    const T x2 = x * x;
    return std::exp(double(n) * (-x2 / 6.0 - x2 * x2 / 180.0 - x2 * x2 * x2 / 2835.0));
  }
  const T s = std::sin(x) / x;
  T r = T(1.0);
  T b = s;
  for (int e = n; e; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

}  // namespace

double kernel_value(const KernelSpec& spec, double u) {
  const double a = spec.a();
  return a * sinc_power(a * u, 2 * spec.eta);
}

Complex kernel_value(const KernelSpec& spec, Complex u) {
  const double a = spec.a();
  return a * sinc_power(a * u, 2 * spec.eta);
}

double cardinal_bspline(int n, double x) {
  if (n < 1) throw InvalidArgument("B-spline order must be >= 1");
  if (!(x > 0.0 && x < n)) return 0.0;
  // vals[j] holds B_k(x - j) for the current order k.
  std::vector<double> vals(std::size_t(n) + 1, 0.0);
  const int base = int(std::floor(x));
  vals[std::size_t(base)] = 1.0;
  for (int k = 2; k <= n; ++k) {
    const int lo = std::max(0, base - k + 1);
    for (int j = lo; j <= base; ++j) {
      const double y = x - j;
      vals[std::size_t(j)] = (y * vals[std::size_t(j)] + (k - y) * vals[std::size_t(j) + 1]) / (k - 1);
    }
  }
  return vals[0];
}

double kernel_hat(const KernelSpec& spec, double v) {
  const double a = spec.a();
  if (std::abs(v) >= 2.0 * spec.eta * a) return 0.0;
  return kPi * cardinal_bspline(2 * spec.eta, spec.eta + v / (2.0 * a));
}

double kernel_hat_derivative(const KernelSpec& spec, double v) {
  const double a = spec.a();
  if (std::abs(v) >= 2.0 * spec.eta * a) return 0.0;
  const int n = 2 * spec.eta;
  const double x = spec.eta + v / (2.0 * a);
  if (n == 1) return 0.0;
  return kPi / (2.0 * a) * (cardinal_bspline(n - 1, x) - cardinal_bspline(n - 1, x - 1.0));
}

namespace {

// int_U^inf cos(w u) u^{-p} du for p >= 2.
double cos_power_tail(double w, double U, int p, double tol) {
  w = std::abs(w);
  if (w == 0.0) return std::pow(U, 1 - p) / (p - 1);
  const double switch_at = (p + 40.0) / w;
  double X = std::max(U, switch_at);
  double numeric = 0.0;
  if (X > U) {
    // Logarithmic substitution u = e^s keeps the slowly oscillating range compact.
    auto f = [&](double s) { return std::cos(w * std::exp(s)) * std::exp((1 - p) * s); };
    numeric = integrate<double>(f, std::log(U), std::log(X), tol).value;
  }
  // Asymptotic expansion by repeated integration by parts:
  // int_X^inf e^{iwu} u^{-p} du = -e^{iwX} sum_k (p)_k / ((iw)^{k+1} X^{p+k}).
  const Complex iw(0.0, w);
  Complex term = 1.0 / (iw * std::pow(X, p));
  Complex sum = term;
  const int kmax = int(w * X) - p;
  for (int k = 1; k < kmax; ++k) {
    term *= double(p + k - 1) / (iw * X);
    sum += term;
    if (std::abs(term) < 1e-20 * std::abs(sum)) break;
  }
  const double asym = (-std::polar(1.0, w * X) * sum).real();
  return numeric + asym;
}

}  // namespace

Estimate<double> kernel_hat_quadrature_oracle(const KernelSpec& spec, double v, double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-4)) throw InvalidArgument("oracle tolerance must lie in [1e-12, 1e-4]");
  const double a = spec.a();
  const int eta = spec.eta, p = 2 * eta;
  const int panels = std::max(20, 4 * eta);
  const double step = kPi / a, U = panels * step;

  auto f = [&](double u) { return kernel_value(spec, u) * std::cos(v * u); };
  CompensatedSum<double> body;
  double err = 0.0;
  for (int j = 0; j < panels; ++j) {
    auto r = integrate<double>(f, j * step, (j + 1) * step, tol / (8.0 * panels));
    body.add(r.value);
    err += r.error;
  }

  // sin^{2 eta}(x) = 2^{-2 eta} [C(2eta, eta) + 2 sum_k (-1)^k C(2eta, eta-k) cos(2kx)]
  const double scale = std::pow(a, 1 - p) * std::ldexp(1.0, -p);
  const double ttol = tol / (8.0 * (2 * eta + 1));
  CompensatedSum<double> tail;
  tail.add(double(binomial(p, eta)) * cos_power_tail(v, U, p, ttol));
  for (int k = 1; k <= eta; ++k) {
    const double c = (k % 2 ? -1.0 : 1.0) * double(binomial(p, eta - k));
    const double w = 2.0 * k * a;
    tail.add(c * (cos_power_tail(w + v, U, p, ttol) + cos_power_tail(w - v, U, p, ttol)));
  }
  const double value = 2.0 * (body.value() + scale * tail.value());
  const double error = 2.0 * err;
  if (error > tol) throw ConvergenceFailure("kernel quadrature oracle missed its tolerance");
  return {value, error};
}

double kernel_hat_zero_asymptotic(int eta) {
  if (eta < 1) throw InvalidArgument("eta must be >= 1");
  return std::sqrt(3.0 * kPi / eta);
}

DerivativeBoundReport kernel_hat_derivative_bound_check(const KernelSpec& spec, int samples) {
  if (spec.eta < 2) throw InvalidArgument("derivative bound needs eta >= 2");
  if (samples < 2) throw InvalidArgument("need at least two samples");
  const double a = spec.a();
  KernelSpec lower = KernelSpec::from_a(spec.eta - 1, a);
  DerivativeBoundReport rep;
  rep.bound = kernel_hat(lower, 0.0) / a;
  const double top = 2.0 * spec.eta * a;
  const double peak = kernel_hat(spec, 0.0);
  double prev = peak;
  for (int i = 0; i < samples; ++i) {
    const double v = top * i / (samples - 1);
    const double d = std::abs(kernel_hat_derivative(spec, v));
    const double ratio = d / rep.bound;
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_v = v;
    }
    const double cur = kernel_hat(spec, v);
    if (cur > prev + 1e-15 * peak) rep.monotone = false;
    prev = cur;
  }
  rep.bound_holds = rep.worst_ratio <= 1.0;
  return rep;
}

}  // namespace resonance
