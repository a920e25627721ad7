#pragma once

// Arithmetic of the cyclotomic field Q(zeta_d): Dirichlet characters mod d,
// splitting of rational primes and the Dirichlet coefficients of zeta_K and
// of the auxiliary series G(s).

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

#include "resonance/numeric.hpp"

namespace resonance {

std::uint64_t euler_totient(std::uint64_t n);

/// Least f >= 1 with p^f = 1 (mod m). Rejects gcd(p, m) != 1.
std::uint64_t multiplicative_order(std::uint64_t p, std::uint64_t m);

/// Trial-division factorization into (prime, exponent) pairs, ascending.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

bool is_prime(std::uint64_t n);

/// Number of ways to write j as an ordered sum of r non-negative integers.
std::uint64_t compositions_count(std::uint64_t j, std::uint64_t r);

/// A Dirichlet character with values stored exactly as root-of-unity
/// indices: chi(n) = exp(2 pi i index[n mod q] / order), or 0 where the
/// index is kZero.
class Character {
 public:
  static constexpr int kZero = -1;

  Character(std::uint64_t modulus, std::uint64_t order, std::vector<int> index);

  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t order() const { return order_; }
  /// Root index of chi(n), or kZero.
  int index(std::uint64_t n) const { return index_[n % modulus_]; }
  Complex operator()(std::uint64_t n) const;
  bool is_principal() const;
  /// Complex-conjugate character.
  Character conjugate() const;

 private:
  std::uint64_t modulus_;
  std::uint64_t order_;
  std::vector<int> index_;
};

/// A character mod d together with its conductor and the primitive character
/// inducing it.
struct CharacterEntry {
  Character chi;
  std::uint64_t conductor;
  Character primitive;
};

struct SplittingProfile {
  std::uint64_t p;
  std::uint64_t e;  // ramification index
  std::uint64_t f;  // residue degree
  std::uint64_t r;  // number of primes above p
};

/// The cyclotomic field Q(zeta_d) and its full character table mod d.
/// Immutable after construction; safe to share between threads.
class FieldSpec {
 public:
  explicit FieldSpec(std::uint64_t d);

  std::uint64_t d() const { return d_; }
  std::uint64_t totient() const { return totient_; }
  /// Exponent of (Z/dZ)^*; every character value is an order()-th root of unity.
  std::uint64_t order() const { return order_; }
  const std::vector<CharacterEntry>& characters() const { return characters_; }

  SplittingProfile splitting(std::uint64_t p) const;
  /// a_K(p^k).
  std::uint64_t prime_power_coefficient(std::uint64_t p, int k) const;

 private:
  std::uint64_t d_;
  std::uint64_t totient_;
  std::uint64_t order_;
  std::vector<CharacterEntry> characters_;
};

SplittingProfile splitting_profile(std::uint64_t p, const FieldSpec& field);

/// a_K(n) from the prime splitting formula.
std::uint64_t dedekind_coefficient(std::uint64_t n, const FieldSpec& field);

/// a_K(1..nmax) from the splitting formula using a smallest-prime-factor
/// sieve. Entry 0 is unused (set to 0).
std::vector<std::uint64_t> dedekind_coefficients(const FieldSpec& field, std::uint64_t nmax);

/// a_K(1..nmax) as the Dirichlet convolution of 1 with chi^* for every
/// non-principal chi mod d, computed exactly in Z[x]/(x^order - 1) and
/// evaluated at the end. Entry 0 is unused. Throws ConvergenceFailure if an
/// evaluated value is not within 1e-6 of a non-negative integer.
std::vector<std::uint64_t> coefficients_via_characters(const FieldSpec& field, std::uint64_t nmax);

/// Coefficient a(n) of G(s) = 1 + a_K(2) 2^-s + (-1)^ell zeta_K^(ell)(s).
double g_coefficient(std::uint64_t n, const FieldSpec& field, int ell);

/// Same from a precomputed a_K(n).
double g_coefficient_from(std::uint64_t n, std::uint64_t a_k, std::uint64_t a_k2, int ell);

/// a'_K(n) = ((phi(d)+1)/2)^omega(n) for squarefree n.
double weight_aprime(std::uint64_t n, const FieldSpec& field);

/// Coefficient table rows n, a_K(n), a(n) for n = 1..nmax.
struct CoefficientTable {
  std::uint64_t d;
  int ell;
  std::vector<std::uint64_t> a_k;  // index n
  std::vector<double> a;           // index n
  bool oracle_agrees;

  static CoefficientTable build(const FieldSpec& field, std::uint64_t nmax, int ell,
                                bool check_oracle);
  void write_csv(std::ostream& os) const;
};

}  // namespace resonance
