#pragma once

// The multiplicative weight f supported on squarefree products of primes in
// P_d, the layers P_{k,d} with thresholds Delta_k, the set M_d, and the
// quantities A_d and the excluded-mass diagnostics built on them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "resonance/factored.hpp"
#include "resonance/field.hpp"

namespace resonance {

enum class WeightVariant { near_critical, mid_strip };

std::string to_string(WeightVariant v);
WeightVariant parse_weight_variant(const std::string& s);

struct WeightParams {
  double sigma = 0.5;
  double c_d = 1.0;
  double gamma = 0.5;
  double alpha_res = 1.5;
  double N = 0.0;
  std::uint64_t d = 3;
  WeightVariant variant = WeightVariant::near_critical;

  // Toy overrides. toy_primes replaces P_d; toy_f gives f(p) directly
  // (otherwise the analytic formula is used); toy_layer assigns primes to
  // P_{k,d} (otherwise the analytic ranges are used); toy_delta replaces
  // Delta_1, Delta_2, ...
  std::vector<std::uint64_t> toy_primes;
  std::map<std::uint64_t, double> toy_f;
  std::map<std::uint64_t, int> toy_layer;
  std::vector<double> toy_delta;
};

/// sigma_D = 1/2 + D / log_2 T.
double sigma_D(double D, double T);

class WeightFunction {
 public:
  /// Validates c_d in [1, sqrt(phi(d)/(e-1))], gamma in (0,1), alpha_res in
  /// (1, 1/gamma); tabulates f over P_d. Throws InvalidArgument when a
  /// prime's denominator log p - log_2 N - log_3 N - log phi(d) is not
  /// positive, and when some p in P_d has a_K(p) != phi(d).
  static WeightFunction build(const WeightParams& params);

  const WeightParams& params() const { return params_; }
  const FieldSpec& field() const { return field_; }
  const std::vector<std::uint64_t>& primes() const { return primes_; }
  double f(std::uint64_t p) const;
  /// f(n) for squarefree n; 0 outside supp(f).
  double f(const FactoredInteger& n) const;
  /// Number of layers K = floor((log_2 N)^gamma), or the toy layer count.
  int layer_count() const { return layer_count_; }
  /// k with p in P_{k,d}, or 0.
  int layer_of(std::uint64_t p) const;
  double delta_k(int k) const;
  /// Analytic value of f(p) (for tests of the formula).
  static double formula(const WeightParams& params, std::uint64_t p);

 private:
  WeightParams params_;
  FieldSpec field_{3};
  std::vector<std::uint64_t> primes_;
  std::map<std::uint64_t, double> f_;
  std::map<std::uint64_t, int> layer_;
  std::vector<double> delta_;
  int layer_count_ = 0;
};

/// True iff n lies in M_d: for every k, n has fewer than Delta_k prime
/// divisors in P_{k,d}. n must be squarefree with support in P_d.
bool classify_M_d(const WeightFunction& w, const FactoredInteger& n);

struct SupportEnumeration {
  std::vector<FactoredInteger> elements;  // by omega, then lexicographic
  bool truncated = false;
};

/// Squarefree products of primes in P_d, breadth-first by number of prime
/// factors, at most max_count elements with log n <= max_log. With
/// only_M_d the elements outside M_d are skipped (M_d is divisor closed,
/// so no member is lost).
SupportEnumeration enumerate_support(const WeightFunction& w, std::size_t max_count, double max_log,
                                     bool only_M_d);

enum class AdMode { sum_form, product_form };

struct AdValue {
  double value = 1.0;
  bool lower_bound = false;  // sum form on a truncated support
};

AdValue a_d_quantity(const WeightFunction& w, AdMode mode, std::size_t support_cap);

/// exp(delta gamma c_d (log N)^{1-sigma} (log_3 N)^sigma / (log_2 N)^sigma).
double prop4_1_main_term(const WeightFunction& w, double delta_param);

struct Prop42Layer {
  int k = 0;
  double delta_k = 0.0;
  double exact = 0.0;        // sum_{n in M'_{k,d}} f(n)^2 / prod_{P_{k,d}} (1 + f(p)^2)
  double intermediate = 0.0; // b^{-Delta_k} prod (1 + b f^2) / prod (1 + f^2)
  double bound = 0.0;        // b^{-Delta_k} exp((b - 1) sum f(p)^2)
  bool holds = true;
};

std::vector<Prop42Layer> prop4_2_diagnostic(const WeightFunction& w, double b);

struct Prop43Record {
  FactoredInteger n;
  double tail = 0.0;       // sum_{q | n, q >= N^{eps/(3 eta)}} a_K(q) / (f(q) q^sigma)
  double majorant = 0.0;   // N^{-eps/(12 eta)} prod_{p|n} (1 + phi(d) / (f(p) p^{sigma - 1/4}))
  bool holds = true;
};

std::vector<Prop43Record> prop4_3_diagnostic(const WeightFunction& w, int eta, double eps, double N,
                                             std::size_t support_cap);

}  // namespace resonance
