#pragma once

// The resonance kernel K_eta(u) = a (sin(a u)/(a u))^(2 eta), a = eps log T / eta,
// its compactly supported Fourier transform and the Gaussian Phi.

#include <string>
#include <vector>

#include "resonance/numeric.hpp"

namespace resonance {

struct KernelSpec {
  int eta = 1;
  double epsilon = 0.5;
  double logT = 2.0;

  KernelSpec() = default;
  /// Throws InvalidArgument unless eta >= 1, epsilon > 0 and logT > 1.
  KernelSpec(int eta, double epsilon, double logT);
  /// Spec with the given half-bandwidth a (logT fixed to 2).
  static KernelSpec from_a(int eta, double a);

  double a() const { return epsilon * logT / eta; }
  /// Half-width of the support of K-hat: 2 eta a = 2 eps log T.
  double support() const { return 2.0 * epsilon * logT; }
};

double kernel_value(const KernelSpec& spec, double u);
/// K_eta continued to complex arguments (it is entire).
Complex kernel_value(const KernelSpec& spec, Complex u);

/// Cardinal B-spline of order n (density of a sum of n uniforms on [0,1]),
/// by the Cox-de Boor recursion.
double cardinal_bspline(int n, double x);

/// K-hat(v) = int K(u) e^{-iuv} du = pi B_{2 eta}(eta + v/(2a)); exactly 0 for
/// |v| >= 2 eta a.
double kernel_hat(const KernelSpec& spec, double v);
/// d/dv K-hat(v).
double kernel_hat_derivative(const KernelSpec& spec, double v);

/// Direct quadrature of int K(u) e^{-iuv} du: Gauss-Kronrod panels between
/// the kernel zeros on [0, U], tail beyond U from the power-reduction of
/// sin^(2 eta) into single-frequency integrals. Throws ConvergenceFailure if
/// tol cannot be met.
Estimate<double> kernel_hat_quadrature_oracle(const KernelSpec& spec, double v, double tol);

/// sqrt(3 pi / eta).
double kernel_hat_zero_asymptotic(int eta);

struct DerivativeBoundReport {
  bool bound_holds = true;
  bool monotone = true;
  double worst_ratio = 0.0;  // max |K-hat'(v)| / bound
  double worst_v = 0.0;
  double bound = 0.0;        // K-hat_{eta-1}(0) / a at the same a
};

/// Samples [0, 2 eta a] at `samples` points: checks |K-hat'| <= K-hat_{eta-1}(0)/a
/// (same a) and that K-hat is nonincreasing. Requires eta >= 2.
DerivativeBoundReport kernel_hat_derivative_bound_check(const KernelSpec& spec, int samples);

inline double gaussian_phi(double y) { return std::exp(-0.5 * y * y); }
inline double gaussian_phi_hat(double xi) { return std::sqrt(2.0 * kPi) * gaussian_phi(xi); }

}  // namespace resonance
