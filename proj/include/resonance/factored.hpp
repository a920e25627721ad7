#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace resonance {

/// A positive integer held as its prime factorization. Elements of the
/// extremal sets overflow every fixed-width type, so all arithmetic stays in
/// factored form and magnitudes are compared through log_value().
class FactoredInteger {
 public:
  using Factor = std::pair<std::uint64_t, int>;  // (prime, exponent >= 1)

  FactoredInteger() = default;  // the integer 1
  /// Factors must have strictly increasing primes and positive exponents.
  explicit FactoredInteger(std::vector<Factor> factors);

  static FactoredInteger from_u64(std::uint64_t n);
  /// Product of distinct primes given in any order.
  static FactoredInteger from_primes(std::vector<std::uint64_t> primes);
  /// Parses "p1^e1 p2^e2 ..." (an exponent of 1 may be omitted; "1" or an
  /// empty string is the integer 1).
  static FactoredInteger parse(const std::string& text);

  const std::vector<Factor>& factors() const { return factors_; }
  double log_value() const { return log_value_; }
  /// Number of distinct prime factors.
  int omega() const { return int(factors_.size()); }
  bool is_one() const { return factors_.empty(); }
  bool is_squarefree() const;
  int exponent_of(std::uint64_t p) const;
  std::uint64_t largest_prime() const { return factors_.empty() ? 1 : factors_.back().first; }
  /// The integer itself when it fits in 64 bits.
  std::optional<std::uint64_t> to_u64() const;
  std::string to_string() const;

  friend FactoredInteger gcd(const FactoredInteger& a, const FactoredInteger& b);
  friend FactoredInteger lcm(const FactoredInteger& a, const FactoredInteger& b);
  friend FactoredInteger operator*(const FactoredInteger& a, const FactoredInteger& b);
  /// Exact quotient; throws InvalidArgument when b does not divide a.
  friend FactoredInteger exact_div(const FactoredInteger& a, const FactoredInteger& b);
  bool divides(const FactoredInteger& n) const;

  friend bool operator==(const FactoredInteger& a, const FactoredInteger& b) {
    return a.factors_ == b.factors_;
  }

 private:
  void refresh();
  std::vector<Factor> factors_;
  double log_value_ = 0.0;
};

/// Total order by numeric value: exact when both fit in 128 bits, otherwise
/// by log value with the factor list as tie-break.
std::strong_ordering compare_value(const FactoredInteger& a, const FactoredInteger& b);

/// log((m,n)/[m,n]) = -sum_p |e_m(p) - e_n(p)| log p.
double log_gcd_lcm_ratio(const FactoredInteger& m, const FactoredInteger& n);

/// Line-oriented set I/O: one element per line as "p1^e1 p2^e2 ...".
std::string write_set(const std::vector<FactoredInteger>& set);
std::vector<FactoredInteger> read_set(const std::string& text);

}  // namespace resonance
