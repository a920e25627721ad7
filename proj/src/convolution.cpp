#include "resonance/convolution.hpp"

#include <algorithm>
#include <cmath>

#include "resonance/error.hpp"
#include "resonance/parallel.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/zeta.hpp"

namespace resonance {

namespace {

constexpr double kResidueRadius = 0.125;
constexpr double kGTol = 1e-11;

// (1/2 pi i) times the integral of g over the circle |z - z0| = r.
template <class F>
Estimate<Complex> contour_residue(F&& g, Complex z0, double r, double tol, int nmin = 16, int nmax = 2048) {
  auto node = [&](int k, int n) {
    const Complex w = r * std::polar(1.0, 2.0 * kPi * k / n);
    return g(z0 + w) * w;
  };
  int n = nmin;
  CompensatedSum<Complex> acc;
  for (int k = 0; k < n; ++k) acc.add(node(k, n));
  Complex sum = acc.value();
  Complex prev = sum / double(n);
  while (n < nmax) {
    CompensatedSum<Complex> odd;
    for (int k = 1; k < 2 * n; k += 2) odd.add(node(k, 2 * n));
    sum += odd.value();
    n *= 2;
    const Complex cur = sum / double(n);
    const double diff = std::abs(cur - prev);
    if (diff <= tol) return {cur, diff};
    prev = cur;
  }
  throw ConvergenceFailure("residue contour did not converge; an unexpected singularity may be enclosed");
}

// m-th derivative of G at z.
Complex g_derivative(Complex z, const FieldSpec& field, int ell, int m) {
  const double a2 = double(dedekind_coefficient(2, field));
  Complex r = a2 * std::pow(-std::log(2.0), m) * std::exp(-z * std::log(2.0));
  if (m == 0) r += 1.0;
  const Complex zk = dedekind_zeta_derivative(z, field, ell + m, kGTol).value;
  return r + (ell % 2 ? -zk : zk);
}

Complex kernel_derivative(const KernelSpec& kspec, Complex w, int n) {
  return cauchy_derivative([&](Complex u) { return kernel_value(kspec, u); }, w, n, 0.5, 1e-13).value;
}

Complex g_at(Complex z, const FieldSpec& field, int ell) { return g_function(z, field, ell, kGTol); }

}  // namespace

TauValue residue_tau(double t, double sigma, const KernelSpec& kspec, const FieldSpec& field, int ell,
                     TauKind which, double tol) {
  if (std::abs(t) < 1.0) throw InvalidArgument("residue_tau needs |t| >= 1");
  if (ell < 0) throw InvalidArgument("derivative order must be non-negative");
  const Complex I(0.0, 1.0);
  const double kappa = dedekind_residue(field);
  auto K = [&](Complex s) { return kernel_value(kspec, I * sigma - I * s); };
  TauValue out{};

  if (which == TauKind::single) {
    const Complex s0(1.0, -t);
    auto g = [&](Complex s) { return g_at(s + I * t, field, ell) * K(s); };
    auto r = contour_residue(g, s0, kResidueRadius, tol);
    out.contour = r.value;
    out.error = r.error;
    out.leibniz = kappa * std::pow(-I, ell) * kernel_derivative(kspec, I * sigma - I * s0, ell);
    return out;
  }

  const double sign = which == TauKind::plus ? 1.0 : -1.0;
  const Complex s0(1.0, sign * t);
  auto g = [&](Complex s) { return g_at(s + I * t, field, ell) * g_at(s - I * t, field, ell) * K(s); };
  auto r = contour_residue(g, s0, kResidueRadius, tol);
  out.contour = 2.0 * kPi * r.value;
  out.error = 2.0 * kPi * r.error;

  // The regular factor is G(s + sign*it) K(i sigma - i s).
  const Complex regular_at = s0 + sign * I * t;
  CompensatedSum<Complex> acc;
  for (int m = 0; m <= ell; ++m) {
    const int n = ell - m;
    const double c = factorial(ell) / (factorial(m) * factorial(n));
    acc.add(c * g_derivative(regular_at, field, ell, m) * std::pow(-I, n) *
            kernel_derivative(kspec, I * sigma - I * s0, n));
  }
  out.leibniz = 2.0 * kPi * kappa * acc.value();
  return out;
}

void check_convolution_preconditions(double t, double sigma, const KernelSpec& kspec, const FieldSpec& field) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("convolution check needs 0 < sigma < 1");
  if (std::abs(t) < 1.0) throw InvalidArgument("convolution check needs |t| >= 1");
  if (std::uint64_t(kspec.eta) < field.totient())
    throw InvalidArgument("kernel decay too weak: need eta >= phi(d) (eta = " + std::to_string(kspec.eta) +
                          ", phi(d) = " + std::to_string(field.totient()) + ")");
}

namespace {

struct LhsResult {
  Complex value;
  double error;
  double truncation;
};

// int F(y) dy over the real line, F(y) = H(y) K(y) with |H(y)| <~ (1+|y|)^gamma.
// Panels run outward between kernel zeros; the remainder beyond Y is bounded
// by C a^{1-2eta} Y^{gamma+1-2eta}/(2eta-1-gamma), C from the observed size
// of H on the outermost batch.
template <class H>
LhsResult kernel_line_integral(H&& h, const KernelSpec& kspec, double gamma, double tol, unsigned threads) {
  const double a = kspec.a();
  const int p = 2 * kspec.eta;
  if (!(p - 1 - gamma > 0.5)) throw InvalidArgument("kernel decay too weak for the growth of the integrand");
  const double step = kPi / a;
  constexpr int kBatch = 4;  // panels per side per round
  struct Panel {
    Complex value;
    double error;
    double peak;
  };
  CompensatedSum<Complex> total;
  double err = 0.0;
  for (int J = 0;; J += kBatch) {
    if (J > 4000) throw ConvergenceFailure("convolution integral: tail bound never dropped below tolerance");
    std::vector<Panel> panels(2 * kBatch);
    parallel_for(panels.size(), threads, [&](std::size_t i) {
      const int j = J + int(i / 2);
      const double side = (i % 2) ? -1.0 : 1.0;
      double peak = 0.0;
      auto f = [&](double y) {
        const Complex hv = h(y);
        peak = std::max(peak, std::abs(hv) / std::pow(1.0 + std::abs(y), gamma));
        return hv * kernel_value(kspec, y);
      };
      double lo = j * step, hi = (j + 1) * step;
      if (side < 0) std::swap(lo, hi), lo = -lo, hi = -hi;
      auto r = integrate<Complex>(f, lo, hi, tol / 200.0, 0.0, 4000);
      panels[i] = {r.value, r.error, peak};
    });
    double C = 0.0;
    for (const auto& pnl : panels) {
      total.add(pnl.value);
      err += pnl.error;
      C = std::max(C, pnl.peak);
    }
    const double Y = (J + kBatch) * step;
    // Both sides, a safety factor 2 on the observed constant, (1+y)^gamma <= (2y)^gamma.
    const double tail = 2.0 * 2.0 * C * std::pow(2.0, gamma) * std::pow(a, 1 - p) * std::pow(Y, gamma + 1 - p) /
                        (p - 1 - gamma);
    if (tail < tol / 20.0) return {total.value(), err + tail, Y};
  }
}

double growth_exponent(double sigma, const FieldSpec& field, int factors) {
  return factors * double(field.totient()) * std::max(0.0, 1.0 - sigma) / 2.0 + 1.0;
}

}  // namespace

ConvolutionReport verify_double_convolution(double t, double sigma, const KernelSpec& kspec,
                                            const FieldSpec& field, int ell, double tol, unsigned threads) {
  check_convolution_preconditions(t, sigma, kspec, field);
  ConvolutionReport r;
  r.identity = "double";
  r.t = t;
  r.sigma = sigma;
  r.d = field.d();
  r.ell = ell;
  r.kspec = kspec;
  r.budget = tol;
  auto h = [&](double y) {
    return g_at(Complex(sigma, t + y), field, ell) * g_at(Complex(sigma, y - t), field, ell);
  };
  const auto lhs = kernel_line_integral(h, kspec, growth_exponent(sigma, field, 2), tol, threads);
  r.lhs = lhs.value;
  r.lhs_error = lhs.error;
  r.truncation = lhs.truncation;
  r.series = e_series(t, kspec, field, ell, sigma);
  const auto tp = residue_tau(t, sigma, kspec, field, ell, TauKind::plus);
  const auto tm = residue_tau(t, sigma, kspec, field, ell, TauKind::minus);
  r.tau_plus = tp.contour;
  r.tau_minus = tm.contour;
  r.tau_discrepancy = std::max(tp.discrepancy(), tm.discrepancy());
  r.rhs = r.series - (r.tau_plus + r.tau_minus);
  r.abs_error = std::abs(r.lhs - r.rhs);
  r.pass = r.abs_error <= tol;
  return r;
}

ConvolutionReport verify_single_convolution(double t, double sigma, const KernelSpec& kspec,
                                            const FieldSpec& field, int ell, double tol, unsigned threads) {
  check_convolution_preconditions(t, sigma, kspec, field);
  ConvolutionReport r;
  r.identity = "single";
  r.t = t;
  r.sigma = sigma;
  r.d = field.d();
  r.ell = ell;
  r.kspec = kspec;
  r.budget = tol;
  auto h = [&](double y) { return g_at(Complex(sigma, t + y), field, ell); };
  const auto lhs = kernel_line_integral(h, kspec, growth_exponent(sigma, field, 1), tol, threads);
  r.lhs = lhs.value;
  r.lhs_error = lhs.error;
  r.truncation = lhs.truncation;
  r.series = single_series(t, kspec, field, ell, sigma);
  const auto tau = residue_tau(t, sigma, kspec, field, ell, TauKind::single);
  r.tau_plus = tau.contour;
  r.tau_discrepancy = tau.discrepancy();
  r.rhs = r.series - 2.0 * kPi * r.tau_plus;
  r.abs_error = std::abs(r.lhs - r.rhs);
  r.pass = r.abs_error <= tol;
  return r;
}

nlohmann::ordered_json to_json(const ConvolutionReport& r) {
  auto cx = [](Complex z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); };
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["params"] = {{"t", r.t},          {"sigma", r.sigma},     {"d", r.d},
                 {"ell", r.ell},      {"eta", r.kspec.eta},   {"epsilon", r.kspec.epsilon},
                 {"logT", r.kspec.logT}};
  j["lhs"] = cx(r.lhs);
  j["series"] = cx(r.series);
  if (r.identity == "double") {
    j["tau_plus"] = cx(r.tau_plus);
    j["tau_minus"] = cx(r.tau_minus);
  } else {
    j["tau"] = cx(r.tau_plus);
  }
  j["rhs"] = cx(r.rhs);
  j["abs_error"] = r.abs_error;
  j["lhs_error_estimate"] = r.lhs_error;
  j["tau_discrepancy"] = r.tau_discrepancy;
  j["truncation"] = r.truncation;
  j["budget"] = r.budget;
  j["pass"] = r.pass;
  return j;
}

}  // namespace resonance
