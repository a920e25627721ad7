#include <doctest.h>

#include <cmath>
#include <sstream>

#include "resonance/error.hpp"
#include "resonance/factored.hpp"
#include "resonance/field.hpp"
#include "resonance/sieve.hpp"

using namespace resonance;

TEST_CASE("euler_totient") {
  CHECK(euler_totient(1) == 1);
  CHECK(euler_totient(12) == 4);
  CHECK(euler_totient(3) == 2);
  CHECK(euler_totient(97) == 96);
  CHECK(euler_totient(360) == 96);
}

TEST_CASE("multiplicative_order") {
  CHECK(multiplicative_order(2, 7) == 3);
  CHECK(multiplicative_order(7, 3) == 1);
  CHECK(multiplicative_order(2, 3) == 2);
  CHECK_THROWS_AS(multiplicative_order(3, 12), InvalidArgument);
}

TEST_CASE("factorize and is_prime") {
  auto f = factorize(360);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<std::uint64_t, int>{2, 3});
  CHECK(f[1] == std::pair<std::uint64_t, int>{3, 2});
  CHECK(f[2] == std::pair<std::uint64_t, int>{5, 1});
  CHECK(factorize(1).empty());
  CHECK(is_prime(2));
  CHECK(is_prime(1000003));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
}

TEST_CASE("splitting profiles") {
  FieldSpec k3(3), k4(4);
  auto s = splitting_profile(7, k3);
  CHECK(s.e == 1);
  CHECK(s.f == 1);
  CHECK(s.r == 2);
  s = splitting_profile(3, k3);
  CHECK(s.e == 2);
  CHECK(s.f == 1);
  CHECK(s.r == 1);
  s = splitting_profile(2, k4);
  CHECK(s.e == 2);
  CHECK(s.f == 1);
  CHECK(s.r == 1);
  // 2 in Q(zeta_12): e = phi(4) = 2, f = ord_3(2) = 2, r = 1.
  s = splitting_profile(2, FieldSpec(12));
  CHECK(s.e == 2);
  CHECK(s.f == 2);
  CHECK(s.r == 1);
}

TEST_CASE("profiles satisfy e f r = phi(d)") {
  for (std::uint64_t d : {3, 4, 5, 7, 8, 9, 12, 15}) {
    FieldSpec k(d);
    for (std::uint64_t p = 2; p < 200; ++p) {
      if (!is_prime(p)) continue;
      auto s = k.splitting(p);
      CHECK(s.e * s.f * s.r == k.totient());
    }
  }
}

TEST_CASE("compositions_count") {
  CHECK(compositions_count(1, 2) == 2);
  CHECK(compositions_count(2, 2) == 3);
  CHECK(compositions_count(0, 5) == 1);
  CHECK(compositions_count(3, 3) == 10);
}

TEST_CASE("dedekind_coefficient examples") {
  FieldSpec k3(3), k4(4);
  CHECK(dedekind_coefficient(7, k3) == 2);
  CHECK(dedekind_coefficient(4, k3) == 1);
  CHECK(dedekind_coefficient(25, k4) == 3);
  CHECK(dedekind_coefficient(1, k3) == 1);
}

TEST_CASE("coefficients via characters") {
  auto a = coefficients_via_characters(FieldSpec(3), 7);
  CHECK(std::vector<std::uint64_t>(a.begin() + 1, a.end()) == std::vector<std::uint64_t>{1, 0, 1, 1, 0, 0, 2});
  auto b = coefficients_via_characters(FieldSpec(4), 5);
  CHECK(std::vector<std::uint64_t>(b.begin() + 1, b.end()) == std::vector<std::uint64_t>{1, 1, 0, 1, 2});
  CHECK(coefficients_via_characters(FieldSpec(3), 1)[1] == 1);
}

TEST_CASE("d = 4 coefficients are r2(n)/4") {
  auto a = dedekind_coefficients(FieldSpec(4), 400);
  for (std::uint64_t n = 1; n <= 400; ++n) {
    std::uint64_t r2 = 0;
    for (long x = -20; x <= 20; ++x)
      for (long y = -20; y <= 20; ++y)
        if (std::uint64_t(x * x + y * y) == n) ++r2;
    CHECK(a[n] * 4 == r2);
  }
}

TEST_CASE("sieve and splitting formula agree with the oracle") {
  for (std::uint64_t d : {3, 5, 8, 9}) {
    FieldSpec k(d);
    CHECK(dedekind_coefficients(k, 600) == coefficients_via_characters(k, 600));
  }
}

TEST_CASE("g_coefficient") {
  FieldSpec k3(3), k4(4);
  CHECK(g_coefficient(2, k4, 1) == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-14));
  CHECK(g_coefficient(1, k3, 2) == 1.0);
  CHECK(g_coefficient(7, k3, 1) == doctest::Approx(2.0 * std::log(7.0)).epsilon(1e-14));
  // At ell = 0 the 1 + zeta_K series doubles the constant term.
  CHECK(g_coefficient(1, k3, 0) == 2.0);
  CHECK(g_coefficient(7, k3, 0) == 2.0);
}

TEST_CASE("weight_aprime") {
  CHECK(weight_aprime(1, FieldSpec(3)) == 1.0);
  CHECK(weight_aprime(6, FieldSpec(3)) == doctest::Approx(2.25));
  CHECK(weight_aprime(7, FieldSpec(5)) == doctest::Approx(2.5));
}

TEST_CASE("character table") {
  FieldSpec k(12);
  CHECK(k.characters().size() == 4);
  for (const auto& c : k.characters()) {
    // Orthogonality: sum over residues vanishes unless principal.
    Complex s = 0;
    for (std::uint64_t n = 0; n < 12; ++n) s += c.chi(n);
    CHECK(std::abs(s) == doctest::Approx(c.chi.is_principal() ? 4.0 : 0.0).epsilon(1e-12));
    CHECK(12 % c.conductor == 0);
  }
}

TEST_CASE("CoefficientTable") {
  auto t = CoefficientTable::build(FieldSpec(3), 7, 0, true);
  CHECK(t.oracle_agrees);
  CHECK(t.a_k[7] == 2);
  auto u = CoefficientTable::build(FieldSpec(4), 5, 0, true);
  CHECK(u.a[5] == 2.0);
  auto one = CoefficientTable::build(FieldSpec(3), 1, 0, false);
  std::ostringstream os;
  one.write_csv(os);
  std::string csv = os.str();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header and one row
}

TEST_CASE("sieve_primes_in_class") {
  CHECK(sieve_primes_in_class(2, 20, 3) == std::vector<std::uint64_t>{7, 13, 19});
  CHECK(sieve_primes_in_class(2, 10, 4) == std::vector<std::uint64_t>{5});
  CHECK(sieve_primes_in_class(20, 21, 5).empty());
  CHECK(sieve_primes_in_class(2, 30, 1) == std::vector<std::uint64_t>{3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK_THROWS_AS(sieve_primes_in_class(1, 10, 3), InvalidArgument);
  CHECK_THROWS_AS(sieve_primes_in_class(2, 1e9, 1, 1000), BudgetExceeded);
  // Segment boundaries: count primes = 1 mod 3 up to 10^6 against trial division.
  auto big = sieve_primes_in_class(2, 1e6, 3);
  std::size_t count = 0;
  for (std::uint64_t n = 7; n <= 1000000; n += 6)
    if (is_prime(n)) ++count;
  CHECK(big.size() == count);
}

TEST_CASE("FactoredInteger arithmetic") {
  auto a = FactoredInteger::from_u64(360), b = FactoredInteger::from_u64(84);
  CHECK(gcd(a, b).to_u64() == 12);
  CHECK(lcm(a, b).to_u64() == 2520);
  CHECK((a * b).to_u64() == 30240);
  CHECK(exact_div(a, FactoredInteger::from_u64(12)).to_u64() == 30);
  CHECK_THROWS_AS(exact_div(a, FactoredInteger::from_u64(7)), InvalidArgument);
  CHECK(FactoredInteger::from_u64(12).divides(a));
  CHECK(FactoredInteger().is_one());
  CHECK(a.log_value() == doctest::Approx(std::log(360.0)).epsilon(1e-14));
  CHECK(log_gcd_lcm_ratio(a, b) == doctest::Approx(std::log(12.0 / 2520.0)).epsilon(1e-14));
  CHECK(FactoredInteger::parse("2^3 3^2 5").to_u64() == 360);
  CHECK(FactoredInteger::parse("1").is_one());
  CHECK(FactoredInteger::from_primes({13, 7}).to_u64() == 91);
}

TEST_CASE("FactoredInteger beyond 64 bits") {
  auto big = FactoredInteger::parse("2^70 3");
  CHECK_FALSE(big.to_u64().has_value());
  auto bigger = FactoredInteger::parse("2^71");
  CHECK(compare_value(big, bigger) == std::strong_ordering::greater);
  CHECK(compare_value(FactoredInteger::parse("1000003^40"), FactoredInteger::parse("1000033^39")) ==
        std::strong_ordering::greater);
}

TEST_CASE("set I/O round trip") {
  std::vector<FactoredInteger> s{FactoredInteger(), FactoredInteger::from_u64(91), FactoredInteger::parse("2^80 7")};
  CHECK(read_set(write_set(s)) == s);
}
