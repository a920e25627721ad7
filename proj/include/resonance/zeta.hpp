#pragma once

// Hurwitz zeta, Dirichlet L-functions, the Dedekind zeta function of
// Q(zeta_d) and its derivatives, the series G and the kernel-weighted
// coefficient sums that appear in the convolution identities.

#include <cstdint>
#include <string>

#include "resonance/field.hpp"
#include "resonance/kernel.hpp"
#include "resonance/numeric.hpp"

namespace resonance {

/// Largest |Im s| accepted by the evaluators.
inline constexpr double kMaxImaginaryPart = 1.0e4;

/// zeta(s, a) by Euler-Maclaurin summation. Requires Re s > 0, |s - 1| >= 1e-6,
/// 0 < a <= 1 and |Im s| <= kMaxImaginaryPart.
Estimate<Complex> hurwitz_zeta(Complex s, double a);

Complex riemann_zeta(Complex s);

/// Conductor of a character, computed from its values.
std::uint64_t character_conductor(const Character& chi);

/// L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q). chi must be primitive
/// (InvalidArgument otherwise); the principal character mod 1 gives zeta(s).
Complex dirichlet_l(Complex s, const Character& chi);

/// L(1, chi) = -(1/q) sum_a chi(a) psi(a/q) for primitive non-principal chi.
Complex dirichlet_l_at_one(const Character& chi);

/// Digamma function for x > 0.
double digamma(double x);

/// zeta(s) prod_{chi != chi_0} L(s, chi*).
Complex dedekind_zeta(Complex s, const FieldSpec& field);

/// Residue of zeta_K at s = 1: prod_{chi != chi_0} L(1, chi*).
double dedekind_residue(const FieldSpec& field);

/// Contour radius used for derivatives at s: min(1/4, |s-1|/2, Re(s)/2).
double derivative_radius(Complex s);

/// zeta_K^(ell)(s) by a trapezoid Cauchy integral on a circle of radius
/// derivative_radius(s), doubling the node count until converged to tol.
Estimate<Complex> dedekind_zeta_derivative(Complex s, const FieldSpec& field, int ell, double tol = 1e-11);

/// G(s) = 1 + a_K(2) 2^{-s} + (-1)^ell zeta_K^(ell)(s).
Complex g_function(Complex s, const FieldSpec& field, int ell, double tol = 1e-11);

/// sum_{n,m} K-hat(log nm) a(n) a(m) / ((nm)^sigma (n/m)^{it}); finite by the
/// support of K-hat. Throws BudgetExceeded beyond max_pairs terms.
Complex e_series(double t, const KernelSpec& kspec, const FieldSpec& field, int ell, double sigma,
                 std::uint64_t max_pairs = 10'000'000);

/// sum_n K-hat(log n) a(n) / n^{sigma + it}.
Complex single_series(double t, const KernelSpec& kspec, const FieldSpec& field, int ell, double sigma,
                      std::uint64_t max_terms = 10'000'000);

}  // namespace resonance
