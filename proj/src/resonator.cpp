#include "resonance/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "resonance/error.hpp"
#include "resonance/kernel.hpp"
#include "resonance/parallel.hpp"

namespace resonance {

Complex Resonator::value(double t) const {
  CompensatedSum<Complex> acc;
  for (const auto& e : entries) acc.add(e.r * std::polar(1.0, -t * e.log_h));
  return acc.value();
}

double Resonator::r0() const {
  CompensatedSum<double> acc;
  for (const auto& e : entries) acc.add(e.r);
  return acc.value();
}

double Resonator::sum_r_squared() const {
  CompensatedSum<double> acc;
  for (const auto& e : entries) acc.add(e.r * e.r);
  return acc.value();
}

double Resonator::log_h_max() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.log_h);
  return m;
}

Complex resonator_value(const Resonator& res, double t) { return res.value(t); }

long long resonator_bin(double log_n, double T) {
  const double step = std::log1p(std::log(T) / T);
  return static_cast<long long>(std::floor(log_n / step));
}

namespace {

void check_T(double T) {
  if (!(T > kE)) throw InvalidArgument("resonator needs T > e");
}

bool less_value(const FactoredInteger& a, const FactoredInteger& b) { return compare_value(a, b) < 0; }

}  // namespace

Resonator build_resonator_critical(const std::vector<FactoredInteger>& M, double T) {
  check_T(T);
  if (M.empty()) throw InvalidArgument("resonator over an empty set");
  std::map<long long, std::pair<FactoredInteger, std::size_t>> bins;
  for (const auto& m : M) {
    const long long j = resonator_bin(m.log_value(), T);
    auto it = bins.find(j);
    if (it == bins.end())
      bins.emplace(j, std::make_pair(m, std::size_t(1)));
    else {
      if (less_value(m, it->second.first)) it->second.first = m;
      ++it->second.second;
    }
  }
  Resonator res;
  res.variant = "critical";
  res.T = T;
  res.params = {{"T", T}, {"set_size", M.size()}};
  for (auto& [j, v] : bins) res.entries.push_back({v.first, v.first.log_value(), std::sqrt(double(v.second))});
  return res;
}

Resonator build_resonator_weighted(const WeightFunction& w, double T, std::size_t support_cap, double max_log) {
  check_T(T);
  const auto sup = enumerate_support(w, support_cap, max_log, true);
  if (sup.elements.empty()) throw InvalidArgument("weighted resonator: empty support");
  struct Bin {
    FactoredInteger min;
    double mass = 0.0;
  };
  std::map<long long, Bin> bins;
  for (const auto& n : sup.elements) {
    const long long j = resonator_bin(n.log_value(), T);
    const double f = w.f(n);
    auto it = bins.find(j);
    if (it == bins.end())
      bins.emplace(j, Bin{n, f * f});
    else {
      if (less_value(n, it->second.min)) it->second.min = n;
      it->second.mass += f * f;
    }
  }
  Resonator res;
  res.variant = "weighted";
  res.T = T;
  res.params = {{"T", T},
                {"sigma", w.params().sigma},
                {"c_d", w.params().c_d},
                {"d", w.params().d},
                {"variant", to_string(w.params().variant)},
                {"support_size", sup.elements.size()},
                {"support_truncated", sup.truncated}};
  // The window [(1+L)^{j-1}, (1+L)^{j+2}] is covered by bins j-1, j, j+1.
  for (const auto& [j, bin] : bins) {
    CompensatedSum<double> mass;
    for (long long i = j - 1; i <= j + 1; ++i) {
      auto it = bins.find(i);
      if (it != bins.end()) mass.add(it->second.mass);
    }
    res.entries.push_back({bin.min, bin.min.log_value(), std::sqrt(mass.value())});
  }
  return res;
}

double GaussianMoment::relative_difference() const {
  return std::abs(quadrature - closed_form) / std::max(std::abs(closed_form), 1e-300);
}

GaussianMoment gaussian_moment(const Resonator& res, double step, unsigned threads) {
  check_T(res.T);
  const double c = std::log(res.T) / res.T;  // Phi(c t)
  const double lmax = res.log_h_max();
  const double limit = lmax > 0.0 ? kPi / lmax : std::numeric_limits<double>::infinity();
  if (step <= 0.0) step = std::min(lmax > 0.0 ? kPi / (2.0 * lmax) : limit, 0.25 / c);
  if (step > limit) throw InvalidArgument("gaussian_moment: step does not resolve the largest frequency");
  GaussianMoment out;
  out.step = step;

  const double Y = 40.0 / c;
  const long long n = static_cast<long long>(std::ceil(Y / step));
  const std::size_t blocks = 256;
  std::vector<double> partial(blocks, 0.0);
  const long long total = 2 * n + 1;
  parallel_for(blocks, threads, [&](std::size_t b) {
    const long long lo = -n + static_cast<long long>(b) * total / static_cast<long long>(blocks);
    const long long hi = -n + static_cast<long long>(b + 1) * total / static_cast<long long>(blocks);
    CompensatedSum<double> acc;
    for (long long i = lo; i < hi; ++i) {
      const double t = double(i) * step;
      acc.add(std::norm(res.value(t)) * gaussian_phi(c * t));
    }
    partial[b] = acc.value();
  });
  CompensatedSum<double> sum;
  for (double p : partial) sum.add(p);
  out.quadrature = step * sum.value();

  CompensatedSum<double> cf;
  for (const auto& a : res.entries)
    for (const auto& b : res.entries) cf.add(a.r * b.r * gaussian_phi((a.log_h - b.log_h) / c));
  out.closed_form = std::sqrt(2.0 * kPi) / c * cf.value();
  return out;
}

nlohmann::ordered_json to_json(const Resonator& res) {
  nlohmann::ordered_json j;
  j["variant"] = res.variant;
  j["T"] = res.T;
  j["params"] = res.params;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : res.entries) {
    nlohmann::ordered_json h;
    auto small = e.h.to_u64();
    if (small && *small <= (std::uint64_t(1) << 63))
      h = *small;
    else
      h = {{"factors", e.h.to_string()}, {"log", e.log_h}};
    arr.push_back(nlohmann::ordered_json::array({h, e.r}));
  }
  j["entries"] = arr;
  return j;
}

Resonator resonator_from_json(const nlohmann::ordered_json& j) {
  Resonator res;
  try {
    res.variant = j.at("variant").get<std::string>();
    res.T = j.at("T").get<double>();
    res.params = j.at("params");
    for (const auto& e : j.at("entries")) {
      ResonatorEntry entry;
      const auto& h = e.at(0);
      if (h.is_number_unsigned() || h.is_number_integer())
        entry.h = FactoredInteger::from_u64(h.get<std::uint64_t>());
      else
        entry.h = FactoredInteger::parse(h.at("factors").get<std::string>());
      entry.log_h = entry.h.log_value();
      entry.r = e.at(1).get<double>();
      res.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("malformed resonator JSON: ") + ex.what());
  }
  return res;
}

}  // namespace resonance
