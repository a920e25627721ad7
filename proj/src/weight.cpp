#include "resonance/weight.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "resonance/error.hpp"
#include "resonance/numeric.hpp"
#include "resonance/cache.hpp"

namespace resonance {

std::string to_string(WeightVariant v) { return v == WeightVariant::near_critical ? "near_critical" : "mid_strip"; }

WeightVariant parse_weight_variant(const std::string& s) {
  if (s == "near_critical") return WeightVariant::near_critical;
  if (s == "mid_strip") return WeightVariant::mid_strip;
  throw InvalidArgument("unknown weight variant '" + s + "' (near_critical or mid_strip)");
}

double sigma_D(double D, double T) {
  const double l2 = iterated_log(T, 2);
  if (!(l2 > 0.0)) throw InvalidArgument("sigma_D needs log_2 T > 0");
  return 0.5 + D / l2;
}

double WeightFunction::formula(const WeightParams& params, std::uint64_t p) {
  const auto L = IteratedLogs::of(params.N);
  const double phi = double(euler_totient(params.d));
  const double denom = std::log(double(p)) - L.l2 - L.l3 - std::log(phi);
  if (!(denom > 0.0))
    throw InvalidArgument("f(p): log p - log_2 N - log_3 N - log phi(d) <= 0 at p = " + std::to_string(p));
  const double s = params.sigma;
  const double third = params.variant == WeightVariant::near_critical ? std::pow(L.l3, 1.0 - s) : L.l3;
  const double pre = params.c_d * std::pow(L.l1, 1.0 - s) * std::pow(L.l2, s) / third;
  return pre / (std::pow(double(p), s) * denom);
}

WeightFunction WeightFunction::build(const WeightParams& params) {
  WeightFunction w;
  w.params_ = params;
  w.field_ = FieldSpec(params.d);
  const double phi = double(w.field_.totient());
  const double cmax = std::sqrt(phi / (kE - 1.0));
  if (!(params.c_d >= 1.0 && params.c_d <= cmax))
    throw InvalidArgument("c_d must lie in [1, sqrt(phi(d)/(e-1))] = [1, " + std::to_string(cmax) + "]");
  if (!(params.gamma > 0.0 && params.gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
  if (!(params.alpha_res > 1.0 && params.alpha_res < 1.0 / params.gamma))
    throw InvalidArgument("alpha must lie in (1, 1/gamma)");

  const bool toy = !params.toy_primes.empty();
  if (toy) {
    w.primes_ = params.toy_primes;
    std::sort(w.primes_.begin(), w.primes_.end());
    if (std::adjacent_find(w.primes_.begin(), w.primes_.end()) != w.primes_.end())
      throw InvalidArgument("toy primes must be distinct");
  } else {
    const auto L = IteratedLogs::of(params.N);
    const double base = phi * L.l1 * L.l2;
    w.primes_ = primes_in_class(kE * base, base * std::exp(std::pow(L.l2, params.gamma)), params.d);
  }
  for (auto p : w.primes_) {
    if (!is_prime(p)) throw InvalidArgument(std::to_string(p) + " is not prime");
    if (w.field_.prime_power_coefficient(p, 1) != w.field_.totient())
      throw InvalidArgument("a_K(" + std::to_string(p) + ") != phi(d): P_d must consist of split primes");
    auto it = params.toy_f.find(p);
    const double fp = it != params.toy_f.end() ? it->second : formula(params, p);
    if (!(fp > 0.0)) throw InvalidArgument("f(p) must be positive");
    w.f_[p] = fp;
  }

  if (!params.toy_layer.empty()) {
    for (auto [p, k] : params.toy_layer) {
      if (!w.f_.count(p)) throw InvalidArgument("toy layer names a prime outside P_d");
      if (k < 1) throw InvalidArgument("toy layer indices start at 1");
      w.layer_[p] = k;
      w.layer_count_ = std::max(w.layer_count_, k);
    }
  } else {
    try {
      const auto L = IteratedLogs::of(params.N);
      const double base = phi * L.l1 * L.l2;
      w.layer_count_ = int(std::floor(std::pow(L.l2, params.gamma)));
      for (auto p : w.primes_)
        for (int k = 1; k <= w.layer_count_; ++k)
          if (double(p) > std::exp(double(k)) * base && double(p) <= std::exp(double(k + 1)) * base)
            w.layer_[p] = k;
    } catch (const InvalidArgument&) {
      if (!toy) throw;
      // Toy support below the asymptotic regime without explicit layers: no layers.
    }
  }
  w.layer_count_ = std::max(w.layer_count_, int(params.toy_delta.size()));
  for (int k = 1; k <= w.layer_count_; ++k) {
    if (std::size_t(k) <= params.toy_delta.size()) {
      w.delta_.push_back(params.toy_delta[std::size_t(k - 1)]);
      continue;
    }
    const auto L = IteratedLogs::of(params.N);
    const double s = params.sigma;
    const double third = params.variant == WeightVariant::near_critical ? std::pow(L.l3, 2.0 - 2.0 * s) : L.l3;
    w.delta_.push_back(params.alpha_res * std::pow(L.l1, 2.0 - 2.0 * s) / (double(k) * k * third));
  }
  return w;
}

double WeightFunction::f(std::uint64_t p) const {
  auto it = f_.find(p);
  return it == f_.end() ? 0.0 : it->second;
}

double WeightFunction::f(const FactoredInteger& n) const {
  double r = 1.0;
  for (auto [p, e] : n.factors()) {
    if (e != 1) return 0.0;
    r *= f(p);
    if (r == 0.0) return 0.0;
  }
  return r;
}

int WeightFunction::layer_of(std::uint64_t p) const {
  auto it = layer_.find(p);
  return it == layer_.end() ? 0 : it->second;
}

double WeightFunction::delta_k(int k) const {
  if (k < 1 || k > layer_count_) throw InvalidArgument("layer index out of range");
  return delta_[std::size_t(k - 1)];
}

bool classify_M_d(const WeightFunction& w, const FactoredInteger& n) {
  std::vector<int> counts(std::size_t(w.layer_count()) + 1, 0);
  for (auto [p, e] : n.factors()) {
    if (e != 1 || w.f(p) == 0.0) throw InvalidArgument("classify_M_d needs n in supp(f)");
    const int k = w.layer_of(p);
    if (k) ++counts[std::size_t(k)];
  }
  for (int k = 1; k <= w.layer_count(); ++k)
    if (double(counts[std::size_t(k)]) >= w.delta_k(k)) return false;
  return true;
}

SupportEnumeration enumerate_support(const WeightFunction& w, std::size_t max_count, double max_log,
                                     bool only_M_d) {
  SupportEnumeration out;
  const auto& P = w.primes();
  const int n = int(P.size());
  std::vector<double> logs(P.size());
  for (std::size_t i = 0; i < P.size(); ++i) logs[i] = std::log(double(P[i]));
  std::vector<int> pick;
  bool stop = false;
  for (int size = 0; size <= n && !stop; ++size) {
    bool any = false;
    std::function<void(int, double)> rec = [&](int start, double logsum) {
      if (stop) return;
      if (int(pick.size()) == size) {
        std::vector<std::uint64_t> ps;
        for (int i : pick) ps.push_back(P[std::size_t(i)]);
        FactoredInteger m = FactoredInteger::from_primes(ps);
        any = true;
        if (only_M_d && !classify_M_d(w, m)) return;
        if (out.elements.size() == max_count) {
          out.truncated = true;
          stop = true;
          return;
        }
        out.elements.push_back(std::move(m));
        return;
      }
      const int need = size - int(pick.size());
      for (int i = start; i <= n - need; ++i) {
        if (logsum + need * logs[std::size_t(i)] > max_log) break;
        pick.push_back(i);
        rec(i + 1, logsum + logs[std::size_t(i)]);
        pick.pop_back();
        if (stop) return;
      }
    };
    rec(0, 0.0);
    if (!any) break;  // no product of this many primes fits under max_log
  }
  return out;
}

AdValue a_d_quantity(const WeightFunction& w, AdMode mode, std::size_t support_cap) {
  const double phi = double(w.field().totient());
  const double s = w.params().sigma;
  AdValue out;
  if (mode == AdMode::product_form) {
    double r = 1.0;
    for (auto p : w.primes()) {
      const double f = w.f(p);
      r *= (1.0 + f * f + phi * f * std::pow(double(p), -s)) / (1.0 + f * f);
    }
    out.value = r;
    return out;
  }
  const auto sup = enumerate_support(w, support_cap, std::numeric_limits<double>::infinity(), false);
  out.lower_bound = sup.truncated;
  CompensatedSum<double> num, den;
  for (const auto& n : sup.elements) {
    const auto& fac = n.factors();
    const int k = int(fac.size());
    if (k > 24) throw BudgetExceeded("a_d sum form: too many prime factors for divisor enumeration");
    const double fn = w.f(n);
    den.add(fn * fn);
    CompensatedSum<double> inner;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      // q = product over mask; a_K(n/q) f(q) q^sigma / n^sigma
      double term = fn;
      for (int i = 0; i < k; ++i) {
        const std::uint64_t p = fac[std::size_t(i)].first;
        const double ps = std::pow(double(p), -s);
        if (mask >> i & 1u)
          term *= w.f(p);
        else
          term *= double(w.field().prime_power_coefficient(p, 1)) * ps;
      }
      inner.add(term);
    }
    num.add(inner.value());
  }
  out.value = num.value() / den.value();
  return out;
}

double prop4_1_main_term(const WeightFunction& w, double delta_param) {
  if (!(delta_param > 0.0 && delta_param < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  const auto L = IteratedLogs::of(w.params().N);
  const double s = w.params().sigma;
  return std::exp(delta_param * w.params().gamma * w.params().c_d * std::pow(L.l1, 1.0 - s) *
                  std::pow(L.l3, s) / std::pow(L.l2, s));
}

std::vector<Prop42Layer> prop4_2_diagnostic(const WeightFunction& w, double b) {
  if (!(b > 1.0)) throw InvalidArgument("Rankin parameter b must exceed 1");
  std::vector<Prop42Layer> out;
  for (int k = 1; k <= w.layer_count(); ++k) {
    Prop42Layer r;
    r.k = k;
    r.delta_k = w.delta_k(k);
    std::vector<double> x;
    for (auto p : w.primes())
      if (w.layer_of(p) == k) x.push_back(w.f(p) * w.f(p));
    // e[j]: elementary symmetric sums of the f(p)^2 = mass of j-prime products.
    std::vector<double> e(x.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = i + 1; j >= 1; --j) e[j] += x[i] * e[j - 1];
    double norm = 1.0, prod_b = 1.0, sum = 0.0;
    for (double v : x) {
      norm *= 1.0 + v;
      prod_b *= 1.0 + b * v;
      sum += v;
    }
    CompensatedSum<double> excluded;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (double(j) >= r.delta_k) excluded.add(e[j]);
    r.exact = excluded.value() / norm;
    const double scale = std::pow(b, -r.delta_k);
    r.intermediate = scale * prod_b / norm;
    r.bound = scale * std::exp((b - 1.0) * sum);
    const double slack = 1.0 + 1e-12;
    r.holds = r.exact <= r.intermediate * slack && r.intermediate <= r.bound * slack;
    out.push_back(r);
  }
  return out;
}

std::vector<Prop43Record> prop4_3_diagnostic(const WeightFunction& w, int eta, double eps, double N,
                                             std::size_t support_cap) {
  if (eta < 1 || !(eps > 0.0) || !(N > 1.0)) throw InvalidArgument("small-divisor diagnostic needs eta >= 1, eps > 0, N > 1");
  const double phi = double(w.field().totient());
  const double s = w.params().sigma;
  const double log_threshold = eps / (3.0 * eta) * std::log(N);
  const double rankin = std::exp(-eps / (12.0 * eta) * std::log(N));
  const auto sup = enumerate_support(w, support_cap, std::numeric_limits<double>::infinity(), true);
  std::vector<Prop43Record> out;
  for (const auto& n : sup.elements) {
    const auto& fac = n.factors();
    const int k = int(fac.size());
    if (k > 24) throw BudgetExceeded("small-divisor diagnostic: too many prime factors");
    Prop43Record r;
    r.n = n;
    CompensatedSum<double> tail;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      double logq = 0.0, term = 1.0;
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1u) {
          const std::uint64_t p = fac[std::size_t(i)].first;
          logq += std::log(double(p));
          term *= double(w.field().prime_power_coefficient(p, 1)) / (w.f(p) * std::pow(double(p), s));
        }
      if (logq >= log_threshold) tail.add(term);
    }
    r.tail = tail.value();
    double maj = rankin;
    for (auto [p, e] : fac) maj *= 1.0 + phi / (w.f(p) * std::pow(double(p), s - 0.25));
    r.majorant = maj;
    r.holds = r.tail <= r.majorant * (1.0 + 1e-12);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace resonance
