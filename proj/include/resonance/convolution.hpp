#pragma once

// Residue terms and numerical verification of the double and single
// convolution identities
//   int G(s+it+iy) G(s-it+iy) K(y) dy = E - (tau+ + tau-),
//   int G(s+it+iy) K(y) dy           = E_1 - 2 pi tau.

#include <string>

#include <json.hpp>

#include "resonance/field.hpp"
#include "resonance/kernel.hpp"
#include "resonance/numeric.hpp"

namespace resonance {

enum class TauKind { plus, minus, single };

struct TauValue {
  Complex contour;   // from the numerical residue
  Complex leibniz;   // from the closed derivative formula
  double error;      // contour convergence estimate
  double discrepancy() const { return std::abs(contour - leibniz); }
};

/// plus/minus: 2 pi Res_{s=1 +/- it} G(s+it) G(s-it) K(i sigma - i s).
/// single: Res_{s=1-it} G(s+it) K(i sigma - i s).
/// The Leibniz value expands the pole of G (residue kappa of zeta_K at 1)
/// against the derivatives of the regular factors. Requires |t| >= 1.
TauValue residue_tau(double t, double sigma, const KernelSpec& kspec, const FieldSpec& field, int ell,
                     TauKind which, double tol = 1e-10);

struct ConvolutionReport {
  std::string identity;  // "double" or "single"
  double t = 0.0, sigma = 0.0;
  std::uint64_t d = 0;
  int ell = 0;
  KernelSpec kspec;
  Complex lhs, series, tau_plus, tau_minus;  // single: tau in tau_plus
  Complex rhs;
  double lhs_error = 0.0;    // quadrature error estimate incl. truncation bound
  double tau_discrepancy = 0.0;
  double abs_error = 0.0;    // |lhs - rhs|
  double budget = 0.0;       // tolerance the identity is checked against
  double truncation = 0.0;   // |y| beyond which the integrand was bounded
  bool pass = false;
};

/// Throws InvalidArgument unless 0 < sigma < 1, t != 0 (|t| >= 1 for the
/// residues) and eta >= phi(d) with enough kernel decay for the tail bound.
void check_convolution_preconditions(double t, double sigma, const KernelSpec& kspec, const FieldSpec& field);

ConvolutionReport verify_double_convolution(double t, double sigma, const KernelSpec& kspec,
                                            const FieldSpec& field, int ell, double tol, unsigned threads = 1);

ConvolutionReport verify_single_convolution(double t, double sigma, const KernelSpec& kspec,
                                            const FieldSpec& field, int ell, double tol, unsigned threads = 1);

nlohmann::ordered_json to_json(const ConvolutionReport& r);

}  // namespace resonance
