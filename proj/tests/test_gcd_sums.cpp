#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "resonance/error.hpp"
#include "resonance/gcd_sums.hpp"

using namespace resonance;

namespace {

std::vector<FactoredInteger> from_u64s(std::initializer_list<std::uint64_t> xs) {
  std::vector<FactoredInteger> out;
  for (auto x : xs) out.push_back(FactoredInteger::from_u64(x));
  return out;
}

std::vector<std::uint64_t> as_u64(const std::vector<FactoredInteger>& xs) {
  std::vector<std::uint64_t> out;
  for (const auto& x : xs) out.push_back(*x.to_u64());
  std::sort(out.begin(), out.end());
  return out;
}

// Pairwise sum with integer gcd/lcm and a_K from the character oracle.
double brute_weighted(const std::vector<std::uint64_t>& set, double sigma, const FieldSpec& field) {
  std::uint64_t mx = *std::max_element(set.begin(), set.end());
  auto a = coefficients_via_characters(field, mx);
  double s = 0;
  for (auto m : set)
    for (auto n : set) {
      std::uint64_t g = std::gcd(m, n), l = m / g * n;
      s += double(a[m / g] * a[n / g]) * std::pow(double(g) / double(l), sigma);
    }
  return s;
}

}  // namespace

TEST_CASE("build_layer enumerates M_k") {
  auto layer = make_layer(1, {7, 13}, 2, 1000);
  CHECK(as_u64(layer.elements) == std::vector<std::uint64_t>{7, 13, 49, 91, 169, 637, 1183});
  CHECK_FALSE(layer.truncated);
  CHECK(layer.W.to_u64() == 91);

  auto w0 = make_layer(1, {7, 13}, 0, 1000);
  CHECK(as_u64(w0.elements) == std::vector<std::uint64_t>{91});

  auto capped = make_layer(1, {7, 13}, 2, 1);
  CHECK(capped.elements.size() == 1);
  CHECK(capped.truncated);

  auto empty = make_layer(1, {}, 2, 10);
  CHECK(empty.elements.size() == 1);
  CHECK(empty.elements[0].is_one());
  CHECK_FALSE(empty.warning.empty());

  CHECK_THROWS_AS(make_layer(1, {7, 7}, 2, 10), InvalidArgument);
  CHECK_THROWS_AS(make_layer(1, {7, 13}, 1, 10), InvalidArgument);
}

TEST_CASE("M_k matches brute force on three primes") {
  // m = (l/q) W with l, q disjoint divisors of W, omega(l), omega(q) <= 1.
  const std::vector<std::uint64_t> P{7, 13, 19};
  const std::uint64_t W = 7 * 13 * 19;
  std::vector<std::uint64_t> expect;
  std::vector<std::uint64_t> small{1, 7, 13, 19};
  for (auto l : small)
    for (auto q : small) {
      if (l != 1 && l == q) continue;
      expect.push_back(W / q * l);
    }
  std::sort(expect.begin(), expect.end());
  expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
  CHECK(as_u64(make_layer(1, P, 2, 1000).elements) == expect);
}

TEST_CASE("build_layer from toy parameters") {
  LayeredSetParams p;
  p.toy_primes = {{7, 13}, {31, 37}};
  p.toy_wk = {2, 2};
  auto l2 = build_layer(p, 2, 100);
  CHECK(l2.primes == std::vector<std::uint64_t>{31, 37});
  p.toy_primes = {{7, 11}};
  p.toy_wk = {2};
  CHECK_THROWS_AS(build_layer(p, 1, 100), InvalidArgument);
}

TEST_CASE("LayeredSetParams validation") {
  LayeredSetParams p;
  p.N = 1e30;
  CHECK_NOTHROW(p.validate());
  p.alpha = 3.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.alpha = 1.5;
  p.beta = 1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p.beta = 1.5;
  p.delta = 1.0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("build_product_set") {
  auto l1 = make_layer(1, {7}, 0, 100);
  auto l2 = make_layer(2, {13, 19}, 2, 100);
  CHECK(build_product_set({l1}, 100).size() == l1.elements.size());
  auto M = build_product_set({l1, l2}, 100);
  CHECK(M.size() == l1.elements.size() * l2.elements.size());
  auto one = build_product_set({}, 100);
  REQUIRE(one.size() == 1);
  CHECK(one[0].is_one());
  CHECK_THROWS_AS(build_product_set({l2, make_layer(3, {31, 37}, 2, 100)}, 10), BudgetExceeded);
}

TEST_CASE("gcd_sum_generic") {
  CHECK(gcd_sum_generic(from_u64s({1}), 0.7) == 1.0);
  CHECK(gcd_sum_generic(from_u64s({1, 2}), 1.0) == doctest::Approx(3.0));
  CHECK(gcd_sum_generic(from_u64s({2, 4, 8}), 1.0) == doctest::Approx(5.5));
}

TEST_CASE("gcd_sum_weighted") {
  FieldSpec k3(3);
  CHECK(gcd_sum_weighted(from_u64s({1}), 0.5, k3) == 1.0);
  CHECK(gcd_sum_weighted(from_u64s({1, 7}), 0.5, k3) == doctest::Approx(2.0 + 4.0 / std::sqrt(7.0)).epsilon(1e-14));
  CHECK(gcd_sum_weighted(from_u64s({1, 7, 13}), 0.5, k3) == doctest::Approx(6.459886).epsilon(1e-6));
  std::vector<std::uint64_t> set{1, 4, 6, 7, 12, 49, 91, 300};
  std::vector<FactoredInteger> fs;
  for (auto x : set) fs.push_back(FactoredInteger::from_u64(x));
  for (double s : {1.0 / 3, 0.5, 1.0})
    CHECK(gcd_sum_weighted(fs, s, k3, 2) == doctest::Approx(brute_weighted(set, s, k3)).epsilon(1e-13));
  CHECK(gcd_sum_weighted(fs, 0.5, FieldSpec(4)) ==
        doctest::Approx(brute_weighted(set, 0.5, FieldSpec(4))).epsilon(1e-13));
}

TEST_CASE("dedekind_coefficient on factored integers") {
  FieldSpec k3(3);
  auto a = coefficients_via_characters(k3, 2000);
  for (std::uint64_t n = 1; n <= 2000; ++n) CHECK(dedekind_coefficient(FactoredInteger::from_u64(n), k3) == double(a[n]));
}

TEST_CASE("layer_product_identity_check") {
  FieldSpec k3(3);
  auto l1 = make_layer(1, {7, 13}, 2, 100), l2 = make_layer(2, {31, 37}, 2, 100);
  auto one = layer_product_identity_check({l1}, 0.5, k3);
  CHECK(one.lhs == doctest::Approx(one.rhs).epsilon(1e-14));
  auto two = layer_product_identity_check({l1, l2}, 0.5, k3);
  CHECK(two.relative_error() <= 1e-10);
  auto shared = make_layer(2, {7, 19}, 2, 100);
  CHECK_THROWS_AS(layer_product_identity_check({l1, shared}, 0.5, k3), InvalidArgument);
}

TEST_CASE("sigma_restricted") {
  FieldSpec k3(3);
  auto W = FactoredInteger::from_u64(91);
  CHECK(sigma_restricted(k3, W, 0, FactoredInteger()) == 1.0);
  CHECK(sigma_restricted(k3, W, 1, FactoredInteger()) ==
        doctest::Approx(1.0 + 2.0 / std::sqrt(7.0) + 2.0 / std::sqrt(13.0)).epsilon(1e-14));
  CHECK(sigma_restricted(k3, W, 2, FactoredInteger::from_u64(7)) ==
        doctest::Approx(1.0 + 2.0 / std::sqrt(13.0)).epsilon(1e-14));
}

TEST_CASE("appendix inequality on toy layers") {
  FieldSpec k3(3);
  for (auto primes : std::vector<std::vector<std::uint64_t>>{{7, 13}, {7, 13, 19}, {31, 37, 43, 61}}) {
    auto layer = make_layer(1, primes, 2, 100000);
    auto r = appendix_inequality(layer, k3);
    CHECK(r.lhs == doctest::Approx(gcd_sum_weighted(layer.elements, 0.5, k3)).epsilon(1e-13));
    CHECK(r.lhs >= r.rhs);
  }
}

TEST_CASE("appendix_quantities") {
  LayeredSetParams p;
  p.alpha = 2.0;
  p.beta = 2.0;
  p.delta = 0.3;
  p.toy_primes = {{7, 13}};
  p.toy_wk = {2};
  auto q = appendix_quantities(p, 1, 1.0);
  CHECK(q.h == doctest::Approx(5.071046).epsilon(1e-6));
  CHECK(q.nu_star == doctest::Approx(std::sqrt(q.h) / std::exp(1.0)).epsilon(1e-14));
  auto s = appendix_quantities(p, 1, q.nu_star);
  CHECK(s.rho == doctest::Approx(s.rho_star).epsilon(1e-12));
  CHECK(s.rho_star == doctest::Approx(0.994113).epsilon(1e-6));
  CHECK_FALSE(q.u_k.has_value());
  p.alpha = 1.0 + 1e-9;
  CHECK(appendix_quantities(p, 1, 1.0).h < 1e-8);
}

TEST_CASE("asymptotic_lower_bound") {
  CHECK(asymptotic_lower_bound(1e100, FieldSpec(3)) == doctest::Approx(25182351090.5805).epsilon(1e-10));
  CHECK(asymptotic_lower_bound(std::exp(std::exp(std::exp(1.0))) * 1.01, FieldSpec(3)) > 0.0);
  CHECK_THROWS_AS(asymptotic_lower_bound(1e6, FieldSpec(3)), InvalidArgument);
}
