#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "resonance/convolution.hpp"
#include "resonance/error.hpp"
#include "resonance/zeta.hpp"

using namespace resonance;

namespace {

// Reference values computed with mpmath at 30 digits.
const Complex kZetaNearFirstZero(3.13536422129126e-6, -1.96933604624011e-5);  // zeta(1/2 + 14.1347 i)
const Complex kZeta1000(0.356334367194396, 0.931997831232994);                // zeta(1/2 + 1000 i)
const Complex kZetaStrip(0.571251872435165, -0.0923228739071498);             // zeta(0.7 + 3 i)
const Complex kDedekind3(1.10080781162605, 0.0586243800001783);               // zeta_K(2 + 5i), d = 3
const Complex kDedekind3d1(0.0921628439263303, 0.270969725680377);            // zeta_K'(2 + i), d = 3
const Complex kDedekind3d3(0.915027421990737, 0.00772053463736691);           // zeta_K'''(2 + i), d = 3
const Complex kDedekind4d2(-6.41814150632857, -1.32029897871520);             // zeta_K''(1/2 + 10i), d = 4
const double kDedekind4at3 = 1.16472840390096;                                 // zeta(3) L(3, chi_4)
const double kCatalan = 0.915965594177219;

const Character& first_nonprincipal(const FieldSpec& k) {
  for (const auto& c : k.characters())
    if (!c.chi.is_principal()) return c.primitive;
  throw std::logic_error("no character");
}

}  // namespace

TEST_CASE("hurwitz_zeta") {
  CHECK(hurwitz_zeta(2.0, 1.0).value.real() == doctest::Approx(kPi * kPi / 6).epsilon(1e-14));
  CHECK(hurwitz_zeta(2.0, 0.5).value.real() == doctest::Approx(kPi * kPi / 2).epsilon(1e-14));
  CHECK_THROWS_AS(hurwitz_zeta(Complex(1.0 + 1e-8, 0.0), 1.0), InvalidArgument);
  CHECK_THROWS_AS(hurwitz_zeta(Complex(-0.5, 0.0), 1.0), InvalidArgument);
  CHECK_THROWS_AS(hurwitz_zeta(Complex(0.5, 2e4), 1.0), InvalidArgument);
  // zeta(s, 1/3) + zeta(s, 2/3) = (3^s - 1) zeta(s).
  Complex s(0.8, 7.0);
  Complex lhs = hurwitz_zeta(s, 1.0 / 3).value + hurwitz_zeta(s, 2.0 / 3).value;
  CHECK(std::abs(lhs - (std::pow(Complex(3.0), s) - 1.0) * riemann_zeta(s)) < 1e-11);
}

TEST_CASE("riemann_zeta against reference values") {
  CHECK(std::abs(riemann_zeta(Complex(0.5, 14.1347)) - kZetaNearFirstZero) < 1e-12);
  CHECK(std::abs(riemann_zeta(Complex(0.5, 1000.0)) - kZeta1000) < 1e-10);
  CHECK(std::abs(riemann_zeta(Complex(0.7, 3.0)) - kZetaStrip) < 1e-12);
}

TEST_CASE("dirichlet_l") {
  FieldSpec k4(4);
  const auto& chi4 = first_nonprincipal(k4);
  CHECK(character_conductor(chi4) == 4);
  CHECK(std::abs(dirichlet_l(2.0, chi4) - kCatalan) < 1e-13);
  Character one(1, 1, {0});
  Complex s(0.6, 9.0);
  CHECK(std::abs(dirichlet_l(s, one) - riemann_zeta(s)) < 1e-13);
  // Imprimitive characters are rejected.
  FieldSpec k12(12);
  for (const auto& c : k12.characters())
    if (c.conductor != 12 && !c.chi.is_principal()) CHECK_THROWS_AS(dirichlet_l(2.0, c.chi), InvalidArgument);
}

TEST_CASE("L(1, chi) and the residue") {
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-14));
  CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-14));
  CHECK(dedekind_residue(FieldSpec(3)) == doctest::Approx(kPi / (3 * std::sqrt(3.0))).epsilon(1e-14));
  CHECK(dedekind_residue(FieldSpec(4)) == doctest::Approx(kPi / 4).epsilon(1e-14));
  FieldSpec k4(4);
  const auto& chi4 = first_nonprincipal(k4);
  CHECK(std::abs(dirichlet_l_at_one(chi4) - kPi / 4) < 1e-14);
}

TEST_CASE("dedekind_zeta") {
  CHECK(dedekind_zeta(2.0, FieldSpec(4)).real() == doctest::Approx(1.506703009922985).epsilon(1e-14));
  CHECK(std::abs(dedekind_zeta(3.0, FieldSpec(4)) - kDedekind4at3) < 1e-13);
  CHECK(std::abs(dedekind_zeta(Complex(2.0, 5.0), FieldSpec(3)) - kDedekind3) < 1e-13);
}

TEST_CASE("dedekind_zeta matches its Dirichlet series at s = 3") {
  for (std::uint64_t d : {3, 5, 7, 8, 12}) {
    FieldSpec k(d);
    auto a = dedekind_coefficients(k, 100000);
    for (Complex s : {Complex(3.0, 0.0), Complex(3.0, 4.0)}) {
      Complex sum = 0;
      for (std::uint64_t n = 100000; n >= 1; --n) sum += double(a[n]) * std::pow(double(n), -s);
      CHECK(std::abs(dedekind_zeta(s, k) - sum) < 1e-8);
    }
  }
}

TEST_CASE("dedekind_zeta_derivative") {
  FieldSpec k3(3), k4(4);
  CHECK(std::abs(dedekind_zeta_derivative(Complex(2, 1), k3, 1).value - kDedekind3d1) < 1e-11);
  CHECK(std::abs(dedekind_zeta_derivative(Complex(2, 1), k3, 3).value - kDedekind3d3) < 1e-10);
  CHECK(std::abs(dedekind_zeta_derivative(Complex(0.5, 10), k4, 2).value - kDedekind4d2) < 1e-9);
  CHECK(derivative_radius(Complex(3, 0)) == doctest::Approx(0.25));
  CHECK(derivative_radius(Complex(1.2, 0)) == doctest::Approx(0.1));
  CHECK(derivative_radius(Complex(0.3, 20)) == doctest::Approx(0.15));
}

TEST_CASE("g_function matches its Dirichlet series") {
  FieldSpec k3(3);
  auto ak = dedekind_coefficients(k3, 200000);
  for (int ell : {0, 1, 2}) {
    Complex s(3.5, 2.0);
    Complex sum = 0;
    for (std::uint64_t n = 200000; n >= 1; --n)
      sum += g_coefficient_from(n, ak[n], ak[2], ell) * std::pow(double(n), -s);
    CHECK(std::abs(g_function(s, k3, ell) - sum) < 1e-8);
  }
}

TEST_CASE("kernel-weighted series") {
  FieldSpec k3(3);
  KernelSpec tiny(2, 0.15, 2.0);  // support 0.6 < log 2
  const double k0 = kernel_hat(tiny, 0.0);
  for (int ell : {0, 1}) {
    const double a1 = g_coefficient(1, k3, ell);
    CHECK(std::abs(e_series(3.0, tiny, k3, ell, 0.5) - k0 * a1 * a1) < 1e-14);
    CHECK(std::abs(single_series(3.0, tiny, k3, ell, 0.5) - k0 * a1) < 1e-14);
  }
  KernelSpec wide(4, 0.85, 2.0);
  Complex e0 = e_series(0.0, wide, k3, 1, 0.5);
  CHECK(std::abs(e0.imag()) < 1e-12);
  CHECK(e0.real() >= kernel_hat(wide, 0.0) * std::pow(g_coefficient(1, k3, 1), 2));
  // Direct double sum.
  Complex brute = 0;
  const double t = 2.5;
  for (std::uint64_t n = 1; n < 40; ++n)
    for (std::uint64_t m = 1; m < 40; ++m) {
      double kv = kernel_hat(wide, std::log(double(n * m)));
      if (kv == 0.0) continue;
      brute += kv * g_coefficient(n, k3, 1) * g_coefficient(m, k3, 1) / std::pow(double(n * m), 0.5) *
               std::polar(1.0, -t * std::log(double(n) / double(m)));
    }
  CHECK(std::abs(e_series(t, wide, k3, 1, 0.5) - brute) < 1e-12);
}

TEST_CASE("residues: contour and Leibniz agree") {
  for (std::uint64_t d : {3, 4})
    for (int ell : {0, 1, 2})
      for (auto which : {TauKind::plus, TauKind::minus, TauKind::single}) {
        FieldSpec k(d);
        KernelSpec ks(int(2 * k.totient()), 0.85, 2.0);
        auto tau = residue_tau(6.0, 0.5, ks, k, ell, which);
        CHECK(tau.discrepancy() < 1e-8 * std::max(1.0, std::abs(tau.leibniz)));
      }
}

TEST_CASE("convolution identities") {
  FieldSpec k3(3), k4(4);
  const double eps = 0.8502993454155389;
  KernelSpec ks3(4, eps, 2.0), ks4(4, eps, 2.0);
  CHECK(verify_double_convolution(5.0, 0.5, ks3, k3, 1, 1e-4).abs_error <= 1e-4);
  CHECK(verify_double_convolution(5.0, 0.5, ks4, k4, 0, 1e-4).abs_error <= 1e-4);
  CHECK(verify_single_convolution(5.0, 0.6, ks3, k3, 1, 1e-4).abs_error <= 1e-4);
  CHECK(verify_single_convolution(10.0, 0.5, ks4, k4, 2, 1e-4).abs_error <= 1e-4);
  KernelSpec tiny(4, 0.15, 2.0);
  auto dd = verify_double_convolution(4.0, 0.5, tiny, k3, 0, 1e-4);
  CHECK(dd.abs_error <= 1e-4);
  CHECK(std::abs(dd.series - kernel_hat(tiny, 0.0) * 4.0) < 1e-12);
  CHECK(verify_single_convolution(4.0, 0.5, tiny, k3, 0, 1e-4).abs_error <= 1e-4);
}

TEST_CASE("convolution preconditions") {
  FieldSpec k3(3);
  CHECK_THROWS_AS(check_convolution_preconditions(5.0, 0.5, KernelSpec(1, 0.85, 2.0), k3), InvalidArgument);
  CHECK_THROWS_AS(check_convolution_preconditions(5.0, 1.2, KernelSpec(4, 0.85, 2.0), k3), InvalidArgument);
  CHECK_THROWS_AS(check_convolution_preconditions(0.5, 0.5, KernelSpec(4, 0.85, 2.0), k3), InvalidArgument);
  CHECK_NOTHROW(check_convolution_preconditions(5.0, 0.5, KernelSpec(4, 0.85, 2.0), k3));
}
