#include <doctest.h>

#include <cmath>

#include "resonance/error.hpp"
#include "resonance/kernel.hpp"
#include "resonance/quadrature.hpp"

using namespace resonance;

TEST_CASE("KernelSpec") {
  KernelSpec s(2, 0.5, 4.0);
  CHECK(s.a() == doctest::Approx(1.0));
  CHECK(s.support() == doctest::Approx(4.0));
  CHECK(KernelSpec::from_a(3, 0.7).a() == doctest::Approx(0.7));
  CHECK_THROWS_AS(KernelSpec(0, 0.5, 2.0), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec(1, 0.0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec(1, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("kernel_value") {
  auto s = KernelSpec::from_a(1, 1.0);
  CHECK(kernel_value(s, 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(kernel_value(s, kPi)) < 1e-30);
  CHECK(kernel_value(s, 1e-9) == doctest::Approx(1.0));
  auto s2 = KernelSpec::from_a(2, 0.5);
  CHECK(kernel_value(s2, 1.3) == doctest::Approx(0.5 * std::pow(std::sin(0.65) / 0.65, 4)).epsilon(1e-14));
  CHECK(std::abs(kernel_value(s2, Complex(1.3, 0.0)) - kernel_value(s2, 1.3)) < 1e-15);
  // Entire continuation: K(iy) = a (sinh(a y)/(a y))^(2 eta).
  CHECK(kernel_value(s2, Complex(0.0, 2.0)).real() ==
        doctest::Approx(0.5 * std::pow(std::sinh(1.0), 4)).epsilon(1e-13));
}

TEST_CASE("cardinal_bspline") {
  CHECK(cardinal_bspline(2, 1.0) == doctest::Approx(1.0));
  CHECK(cardinal_bspline(2, 0.5) == doctest::Approx(0.5));
  CHECK(cardinal_bspline(4, 2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(cardinal_bspline(4, 1.0) == doctest::Approx(1.0 / 6.0));
  CHECK(cardinal_bspline(3, -0.1) == 0.0);
  CHECK(cardinal_bspline(3, 3.0) == 0.0);
  // Partition of unity.
  for (int n : {2, 5, 16})
    for (double x : {0.3, 0.77}) {
      double s = 0;
      for (int k = -n; k <= n; ++k) s += cardinal_bspline(n, x + k);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("kernel_hat closed forms") {
  auto s1 = KernelSpec::from_a(1, 1.0);
  CHECK(kernel_hat(s1, 0.0) == doctest::Approx(kPi).epsilon(1e-15));
  // Fourier transform of (sin u/u)^2 is the triangle pi (1 - |v|/2)_+.
  for (double v : {-1.7, -0.4, 0.9, 1.99})
    CHECK(kernel_hat(s1, v) == doctest::Approx(kPi * (1.0 - std::abs(v) / 2.0)).epsilon(1e-14));
  CHECK(kernel_hat(s1, 2.5) == 0.0);
  CHECK(kernel_hat(s1, -2.0) == 0.0);
  // int (sin x/x)^4 dx = 2 pi/3.
  CHECK(kernel_hat(KernelSpec::from_a(2, 0.3), 0.0) == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(kernel_hat_derivative(KernelSpec::from_a(3, 1.0), 0.0) == doctest::Approx(0.0));
  CHECK(kernel_hat_derivative(s1, 1.0) == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("kernel_hat_derivative matches a difference quotient") {
  KernelSpec s(4, 0.5, 6.0);
  const double h = 1e-5;
  for (double v : {0.3, 1.1, 2.0, 2.9}) {
    double fd = (kernel_hat(s, v + h) - kernel_hat(s, v - h)) / (2 * h);
    CHECK(kernel_hat_derivative(s, v) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("quadrature oracle") {
  auto s1 = KernelSpec::from_a(1, 1.0);
  auto q = kernel_hat_quadrature_oracle(s1, 0.0, 1e-8);
  CHECK(std::abs(q.value - kPi) <= 1e-8);
  CHECK(std::abs(kernel_hat_quadrature_oracle(s1, 3.0, 1e-8).value) < 1e-8);
  KernelSpec s(4, 0.5, 2.0);
  for (double v : {0.0, 0.25, 0.8, 1.5})
    CHECK(std::abs(kernel_hat_quadrature_oracle(s, v, 1e-10).value - kernel_hat(s, v)) < 1e-9);
}

TEST_CASE("asymptotic value at zero") {
  CHECK(kernel_hat_zero_asymptotic(1) == doctest::Approx(3.0700).epsilon(1e-4));
  CHECK(kernel_hat_zero_asymptotic(8) == doctest::Approx(kernel_hat_zero_asymptotic(2) / 2.0));
  double k200 = kernel_hat(KernelSpec(200, 0.5, 2.0), 0.0);
  CHECK(std::abs(k200 / kernel_hat_zero_asymptotic(200) - 1.0) < 0.01);
}

TEST_CASE("derivative bound and monotonicity") {
  for (int eta : {2, 3, 8}) {
    auto r = kernel_hat_derivative_bound_check(KernelSpec(eta, 0.5, 2.0), 1000);
    CHECK(r.bound_holds);
    CHECK(r.monotone);
    CHECK(r.worst_ratio <= 1.0);
  }
  CHECK_THROWS_AS(kernel_hat_derivative_bound_check(KernelSpec(1, 0.5, 2.0), 100), InvalidArgument);
}

TEST_CASE("Gaussian transform by quadrature") {
  auto re = integrate<double>([](double y) { return gaussian_phi(y) * std::cos(y); }, -40.0, 40.0, 1e-13);
  CHECK(std::abs(re.value - std::sqrt(2 * kPi) * std::exp(-0.5)) < 1e-8);
  CHECK(gaussian_phi_hat(1.0) == doctest::Approx(std::sqrt(2 * kPi) * std::exp(-0.5)));
}
