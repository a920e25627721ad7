#include "resonance/gcd_sums.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

#include "resonance/error.hpp"
#include "resonance/numeric.hpp"
#include "resonance/parallel.hpp"
#include "resonance/cache.hpp"

namespace resonance {

void LayeredSetParams::validate() const {
  if (!(alpha > 1.0 && alpha < kE)) throw InvalidArgument("alpha must lie in (1, e)");
  if (!(beta > 1.0)) throw InvalidArgument("beta must exceed 1");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (!(beta * delta * std::log(alpha) < 1.0)) throw InvalidArgument("need beta*delta*log(alpha) < 1");
  if (!toy_wk.empty() && toy_wk.size() != toy_primes.size())
    throw InvalidArgument("toy W_k list must match the number of toy layers");
  for (int w : toy_wk)
    if (w < 0 || w % 2) throw InvalidArgument("W_k must be a non-negative even integer");
}

int LayeredSetParams::layer_count() const {
  if (toy()) return int(toy_primes.size());
  const auto L = IteratedLogs::of(N);
  return int(std::floor(std::pow(L.l2, delta)));
}

std::pair<double, double> LayeredSetParams::prime_range(int k) const {
  const auto L = IteratedLogs::of(N);
  const double base = double(field.totient()) * L.l1 * L.l2;
  return {base * std::pow(alpha, k), base * std::pow(alpha, k + 1)};
}

int LayeredSetParams::wk(int k) const {
  if (!toy_wk.empty()) return toy_wk.at(std::size_t(k - 1));
  const auto L = IteratedLogs::of(N);
  return 2 * int(std::floor(beta * L.l1 / (2.0 * k * k * L.l3)));
}

namespace {

// Calls visit(indices) for every size-s subset of {0..n-1} not hitting
// `blocked`, in lexicographic order. Stops early when visit returns false.
bool for_each_subset(int n, int s, const std::vector<bool>& blocked,
                     const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> idx;
  std::function<bool(int)> rec = [&](int start) -> bool {
    if (int(idx.size()) == s) return visit(idx);
    for (int i = start; i < n; ++i) {
      if (blocked[i]) continue;
      idx.push_back(i);
      if (!rec(i + 1)) return false;
      idx.pop_back();
    }
    return true;
  };
  return rec(0);
}

}  // namespace

Layer make_layer(int k, std::vector<std::uint64_t> primes, int wk, std::size_t cap) {
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
    throw InvalidArgument("layer primes must be distinct");
  for (auto p : primes)
    if (!is_prime(p)) throw InvalidArgument("layer entry " + std::to_string(p) + " is not prime");
  if (wk < 0 || wk % 2) throw InvalidArgument("W_k must be a non-negative even integer");

  Layer layer;
  layer.k = k;
  layer.primes = primes;
  layer.wk = wk;
  layer.W = FactoredInteger::from_primes(primes);
  if (primes.empty()) layer.warning = "layer " + std::to_string(k) + " has no primes in range; M_k = {1}";

  const int n = int(primes.size());
  const int half = std::min(wk / 2, n);
  std::vector<int> exps(n);
  auto emit = [&]() {
    std::vector<FactoredInteger::Factor> f;
    for (int i = 0; i < n; ++i)
      if (exps[i]) f.emplace_back(primes[i], exps[i]);
    layer.elements.emplace_back(std::move(f));
  };

  bool done = false;
  for (int sq = 0; sq <= half && !done; ++sq) {
    for (int sl = 0; sl <= half && !done; ++sl) {
      std::vector<bool> none(n, false);
      for_each_subset(n, sq, none, [&](const std::vector<int>& q) {
        std::vector<bool> blocked(n, false);
        for (int i : q) blocked[i] = true;
        return for_each_subset(n, sl, blocked, [&](const std::vector<int>& l) {
          if (layer.elements.size() == cap) {
            layer.truncated = true;
            done = true;
            return false;
          }
          std::fill(exps.begin(), exps.end(), 1);
          for (int i : q) exps[i] = 0;
          for (int i : l) exps[i] = 2;
          emit();
          return true;
        });
      });
    }
  }
  return layer;
}

Layer build_layer(const LayeredSetParams& params, int k, std::size_t cap) {
  params.validate();
  const int count = params.layer_count();
  if (k < 1 || k > count)
    throw InvalidArgument("layer index " + std::to_string(k) + " outside 1.." + std::to_string(count));
  std::vector<std::uint64_t> primes;
  if (params.toy()) {
    primes = params.toy_primes[std::size_t(k - 1)];
    for (auto p : primes)
      if (p % params.field.d() != 1)
        throw InvalidArgument("toy prime " + std::to_string(p) + " is not 1 mod d");
  } else {
    auto [lo, hi] = params.prime_range(k);
    primes = primes_in_class(lo, hi, params.field.d());
  }
  Layer layer = make_layer(k, std::move(primes), params.wk(k), cap);
  if (layer.primes.empty() && !params.toy()) layer.warning += " (toy prime overrides exercise the construction)";
  return layer;
}

std::vector<Layer> build_layers(const LayeredSetParams& params, const std::vector<std::size_t>& caps) {
  const int count = params.layer_count();
  if (caps.size() != 1 && caps.size() != std::size_t(count))
    throw InvalidArgument("give one cap for all layers or one per layer");
  std::vector<Layer> out;
  for (int k = 1; k <= count; ++k) out.push_back(build_layer(params, k, caps.size() == 1 ? caps[0] : caps[k - 1]));
  return out;
}

std::vector<FactoredInteger> build_product_set(const std::vector<Layer>& layers, std::size_t global_cap) {
  double size = 1.0;
  for (const auto& l : layers) size *= double(l.elements.size());
  if (size > double(global_cap))
    throw BudgetExceeded("product set of size " + std::to_string(size) + " exceeds the cap " +
                         std::to_string(global_cap));
  std::vector<FactoredInteger> out{FactoredInteger()};
  for (const auto& l : layers) {
    std::vector<FactoredInteger> next;
    next.reserve(out.size() * l.elements.size());
    for (const auto& m : out)
      for (const auto& e : l.elements) next.push_back(m * e);
    out = std::move(next);
  }
  return out;
}

namespace {

// The set re-expressed over a dense prime index so that pair terms are a
// merge of small integer vectors with tabulated a_K(p^k).
class PairEngine {
 public:
  PairEngine(const std::vector<FactoredInteger>& set, const FieldSpec* field) : field_(field) {
    std::set<std::uint64_t> ps;
    for (const auto& m : set)
      for (auto [p, e] : m.factors()) ps.insert(p);
    primes_.assign(ps.begin(), ps.end());
    std::unordered_map<std::uint64_t, int> where;
    for (std::size_t i = 0; i < primes_.size(); ++i) where[primes_[i]] = int(i);
    logp_.resize(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) logp_[i] = std::log(double(primes_[i]));
    elems_.reserve(set.size());
    for (const auto& m : set) {
      std::vector<std::pair<int, int>> v;
      for (auto [p, e] : m.factors()) v.emplace_back(where[p], e);
      elems_.push_back(std::move(v));
    }
    if (field_) {
      profiles_.reserve(primes_.size());
      for (auto p : primes_) profiles_.push_back(field_->splitting(p));
    }
  }

  std::size_t size() const { return elems_.size(); }

  double coefficient(int pi, int k) const {
    const auto& pr = profiles_[std::size_t(pi)];
    if (std::uint64_t(k) % pr.f) return 0.0;
    return double(compositions_count(std::uint64_t(k) / pr.f, pr.r));
  }

  double term(std::size_t i, std::size_t j, double sigma) const {
    const auto& a = elems_[i];
    const auto& b = elems_[j];
    double logr = 0.0, w = 1.0;
    std::size_t x = 0, y = 0;
    while (x < a.size() || y < b.size()) {
      int pi, diff;
      if (y == b.size() || (x < a.size() && a[x].first < b[y].first)) {
        pi = a[x].first;
        diff = a[x++].second;
      } else if (x == a.size() || b[y].first < a[x].first) {
        pi = b[y].first;
        diff = -b[y++].second;
      } else {
        pi = a[x].first;
        diff = a[x++].second - b[y++].second;
      }
      if (!diff) continue;
      logr += std::abs(diff) * logp_[std::size_t(pi)];
      if (field_) {
        w *= coefficient(pi, std::abs(diff));
        if (w == 0.0) return 0.0;
      }
    }
    return w * std::exp(-sigma * logr);
  }

 private:
  const FieldSpec* field_;
  std::vector<std::uint64_t> primes_;
  std::vector<double> logp_;
  std::vector<SplittingProfile> profiles_;
  std::vector<std::vector<std::pair<int, int>>> elems_;
};

double pair_sum(const std::vector<FactoredInteger>& set, double sigma, const FieldSpec* field, unsigned threads) {
  if (set.empty()) throw InvalidArgument("GCD sum of an empty set");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  PairEngine engine(set, field);
  const std::size_t n = engine.size();
  std::vector<double> rows(n);
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<double> terms(n);
    for (std::size_t j = 0; j < n; ++j) terms[j] = engine.term(i, j, sigma);
    std::sort(terms.begin(), terms.end(), std::greater<>());
    CompensatedSum<double> acc;
    for (double t : terms) acc.add(t);
    rows[i] = acc.value();
  });
  CompensatedSum<double> total;
  for (double r : rows) total.add(r);
  return total.value();
}

}  // namespace

double gcd_sum_generic(const std::vector<FactoredInteger>& set, double sigma, unsigned threads) {
  return pair_sum(set, sigma, nullptr, threads);
}

double gcd_sum_weighted(const std::vector<FactoredInteger>& set, double sigma, const FieldSpec& field,
                        unsigned threads) {
  return pair_sum(set, sigma, &field, threads);
}

double ProductIdentity::relative_error() const {
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

ProductIdentity layer_product_identity_check(const std::vector<Layer>& layers, double sigma,
                                             const FieldSpec& field, std::size_t global_cap,
                                             unsigned threads) {
  std::set<std::uint64_t> seen;
  for (const auto& l : layers) {
    std::set<std::uint64_t> mine;
    for (const auto& m : l.elements)
      for (const auto& f : m.factors()) mine.insert(f.first);
    for (auto p : l.primes) mine.insert(p);
    for (auto p : mine)
      if (!seen.insert(p).second)
        throw InvalidArgument("layers share the prime " + std::to_string(p));
  }
  ProductIdentity r{};
  r.lhs = gcd_sum_weighted(build_product_set(layers, global_cap), sigma, field, threads);
  r.rhs = 1.0;
  for (const auto& l : layers) r.rhs *= gcd_sum_weighted(l.elements, sigma, field, threads);
  return r;
}

double dedekind_coefficient(const FactoredInteger& n, const FieldSpec& field) {
  double r = 1.0;
  for (auto [p, e] : n.factors()) {
    r *= double(field.prime_power_coefficient(p, e));
    if (r == 0.0) break;
  }
  return r;
}

double sigma_restricted(const FieldSpec& field, const FactoredInteger& W, int R, const FactoredInteger& r) {
  if (!W.is_squarefree()) throw InvalidArgument("sigma_restricted: W must be squarefree");
  if (R < 0) return 0.0;
  // e[j] = elementary symmetric sum of degree j in x_p = a_K(p)/sqrt(p).
  std::vector<double> e(std::size_t(R) + 1, 0.0);
  e[0] = 1.0;
  for (const auto& [p, unused] : W.factors()) {
    (void)unused;
    if (r.exponent_of(p)) continue;
    const double x = double(field.prime_power_coefficient(p, 1)) / std::sqrt(double(p));
    for (int j = R; j >= 1; --j) e[j] += x * e[j - 1];
  }
  CompensatedSum<double> s;
  for (double v : e) s.add(v);
  return s.value();
}

AppendixInequality appendix_inequality(const Layer& layer, const FieldSpec& field) {
  if (layer.truncated) throw InvalidArgument("appendix inequality needs a fully enumerated layer");
  const int n = int(layer.primes.size());
  if (n > 14) throw BudgetExceeded("appendix inequality brute force limited to 14 primes");
  const int half = layer.wk / 2;
  const double ap = (double(field.totient()) + 1.0) / 2.0;

  std::vector<unsigned> D;
  std::vector<double> value, ak, apw;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > half) continue;
    double v = 1.0, a = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) {
        v *= double(layer.primes[i]);
        a *= double(field.prime_power_coefficient(layer.primes[i], 1));
      }
    D.push_back(mask);
    value.push_back(v);
    ak.push_back(a);
    apw.push_back(std::pow(ap, std::popcount(mask)));
  }
  auto val = [&](unsigned mask) {
    double v = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) v *= double(layer.primes[i]);
    return v;
  };
  auto akm = [&](unsigned mask) {
    double a = 1.0;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) a *= double(field.prime_power_coefficient(layer.primes[i], 1));
    return a;
  };

  CompensatedSum<double> rhs, lit;
  for (std::size_t a = 0; a < D.size(); ++a)
    for (std::size_t b = 0; b < D.size(); ++b) {
      const unsigned g = D[a] & D[b];
      const double outer = val(g) * apw[a] * apw[b] /
                           (std::pow(ap, 2 * std::popcount(g)) * std::sqrt(value[a] * value[b]));
      CompensatedSum<double> inner, inner_lit;
      for (std::size_t c = 0; c < D.size(); ++c) {
        if (D[c] & D[a]) continue;
        for (std::size_t e = 0; e < D.size(); ++e) {
          if (D[e] & D[b]) continue;
          const unsigned g2 = D[c] & D[e];
          const double num = val(g2) * ak[c] * ak[e] / std::sqrt(value[c] * value[e]);
          const double akg = akm(g2);
          inner.add(num / (akg * akg));
          inner_lit.add(num / std::pow(ap, 2 * std::popcount(g2)));
        }
      }
      rhs.add(outer * inner.value());
      lit.add(outer * inner_lit.value());
    }
  return {gcd_sum_weighted(layer.elements, 0.5, field), rhs.value(), lit.value()};
}

AppendixQuantities appendix_quantities(const LayeredSetParams& params, int k, double nu) {
  if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
  if (k < 1) throw InvalidArgument("layer index must be >= 1");
  params.validate();
  const double phi = double(params.field.totient());
  const double sa = std::sqrt(params.alpha);
  AppendixQuantities q{};
  q.nu = nu;
  q.h = kE * kE * params.beta * phi * (sa - 1.0) / (sa + 1.0);
  q.log_negative = q.h <= nu * nu;
  q.rho = 2.0 * params.delta * nu * std::log(q.h / (nu * nu));
  q.nu_star = std::sqrt(q.h) / kE;
  q.rho_star = 4.0 * params.delta * std::sqrt(q.h) / kE;
  try {
    const auto L = IteratedLogs::of(params.N);
    const double u = std::floor(nu / k * std::sqrt(L.l1 / (L.l2 * L.l3)));
    q.u_k = static_cast<long long>(u);
    q.w_k = q.u_k;
    q.H = 2.0 * k * kE * std::sqrt(phi) * (sa - 1.0) * std::pow(params.alpha, k / 2.0) / nu * std::sqrt(L.l3);
  } catch (const InvalidArgument&) {
    // N below the asymptotic regime: the N-dependent entries stay empty.
  }
  return q;
}

double asymptotic_lower_bound(double N, const FieldSpec& field) {
  const auto L = IteratedLogs::of(N);
  return std::exp(2.0 * std::sqrt(double(field.totient())) * std::sqrt(L.l1 * L.l3 / L.l2));
}

}  // namespace resonance
