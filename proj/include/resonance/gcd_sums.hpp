#pragma once

// Layered extremal sets P_k, M_k, M and exact (weighted) GCD sums over them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resonance/factored.hpp"
#include "resonance/field.hpp"

namespace resonance {

/// Parameters of the layered construction. The analytic prime ranges and
/// W_k come from N; "toy mode" replaces the prime set of every layer (and
/// optionally W_k) so that the combinatorics can be exercised at sizes where
/// the analytic ranges are empty or enormous.
struct LayeredSetParams {
  double N = 0.0;
  double alpha = 1.5;
  double beta = 1.5;
  double delta = 0.5;
  FieldSpec field{3};

  std::vector<std::vector<std::uint64_t>> toy_primes;  // per layer, k = 1..size
  std::vector<int> toy_wk;                             // per layer, optional

  /// Throws InvalidArgument unless alpha in (1,e), beta > 1,
  /// delta in (0,1) and beta*delta*log(alpha) < 1.
  void validate() const;
  bool toy() const { return !toy_primes.empty(); }
  /// Number of layers: floor((log_2 N)^delta), or the toy layer count.
  int layer_count() const;
  /// Open-closed analytic prime range of layer k:
  /// (phi(d) alpha^k log N log_2 N, phi(d) alpha^(k+1) log N log_2 N].
  std::pair<double, double> prime_range(int k) const;
  /// W_k = 2 floor(beta log N / (2 k^2 log_3 N)), or the toy override.
  int wk(int k) const;
};

struct Layer {
  int k = 0;
  std::vector<std::uint64_t> primes;  // P_k
  int wk = 0;
  FactoredInteger W;                      // product of P_k
  std::vector<FactoredInteger> elements;  // M_k, possibly capped
  bool truncated = false;
  std::string warning;
};

/// Enumerates M_k = {(l/q) W : lq | W, omega(l), omega(q) <= W_k/2} in
/// lexicographic order of (omega(q), omega(l), q, l), stopping at `cap`
/// elements (truncated is set when more exist).
Layer build_layer(const LayeredSetParams& params, int k, std::size_t cap);

/// Layer from an explicit prime set and W_k.
Layer make_layer(int k, std::vector<std::uint64_t> primes, int wk, std::size_t cap);

std::vector<Layer> build_layers(const LayeredSetParams& params, const std::vector<std::size_t>& caps);

/// All products prod_k m_k with m_k in layer k. Throws BudgetExceeded when
/// the product of the layer sizes exceeds global_cap. No layers gives {1}.
std::vector<FactoredInteger> build_product_set(const std::vector<Layer>& layers, std::size_t global_cap);

/// S_sigma(M) = sum_{m,n} ((m,n)/[m,n])^sigma, exact pairwise double sum.
double gcd_sum_generic(const std::vector<FactoredInteger>& set, double sigma, unsigned threads = 1);

/// S_sigma(M, a_K) = sum_{m,n} a_K(m/(m,n)) a_K(n/(m,n)) ((m,n)/[m,n])^sigma.
double gcd_sum_weighted(const std::vector<FactoredInteger>& set, double sigma, const FieldSpec& field,
                        unsigned threads = 1);

struct ProductIdentity {
  double lhs;  // weighted sum over the full product set
  double rhs;  // product of the per-layer weighted sums
  double relative_error() const;
};

/// Both sides of S_sigma(M, a_K) = prod_k S_sigma(M_k, a_K). Layers must have
/// pairwise disjoint prime supports (InvalidArgument otherwise).
ProductIdentity layer_product_identity_check(const std::vector<Layer>& layers, double sigma,
                                             const FieldSpec& field, std::size_t global_cap = 2'000'000,
                                             unsigned threads = 1);

/// sum over n | W, omega(n) <= R, (n, r) = 1 of a_K(n)/sqrt(n). W squarefree.
double sigma_restricted(const FieldSpec& field, const FactoredInteger& W, int R, const FactoredInteger& r);

struct AppendixInequality {
  double lhs;          // S_{1/2}(M_k, a_K) over the full (uncapped) layer
  double rhs;          // lower bound: a'_K-weighted outer sum, a_K-normalized inner sum
  double rhs_literal;  // same with a'_K((q,q'))^2 in the inner denominators
};

/// a_K(n) for n in factored form (prime factors may exceed any sieve range).
double dedekind_coefficient(const FactoredInteger& n, const FieldSpec& field);

/// Brute-force evaluation of both sides of the per-layer lower bound for
/// S_{1/2}(M_k, a_K). The layer must be fully enumerated.
AppendixInequality appendix_inequality(const Layer& layer, const FieldSpec& field);

/// u_k, w_k and H need the iterated logs of N and are empty when
/// log_3 N <= 1; the remaining entries depend only on (alpha, beta, delta, d).
struct AppendixQuantities {
  double nu;
  std::optional<long long> u_k;  // floor((nu/k) sqrt(log N / (log_2 N log_3 N)))
  std::optional<long long> w_k;  // same integer under its later name
  std::optional<double> H;       // main term, without the 1 + O(..) factor
  double h;        // e^2 beta phi(d) (sqrt(alpha)-1)/(sqrt(alpha)+1)
  double rho;      // 2 delta nu log(h / nu^2)
  double nu_star;  // sqrt(h)/e
  double rho_star; // 4 delta sqrt(h)/e
  bool log_negative;  // h <= nu^2
};

AppendixQuantities appendix_quantities(const LayeredSetParams& params, int k, double nu);

/// exp(2 sqrt(phi(d)) sqrt(log N log_3 N / log_2 N)): the main term of the
/// lower bound for S_{1/2}(M, a_K)/|M|. Requires N > e^(e^e).
double asymptotic_lower_bound(double N, const FieldSpec& field);

}  // namespace resonance
