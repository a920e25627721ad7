#include "resonance/hunt.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "resonance/error.hpp"
#include "resonance/parallel.hpp"
#include "resonance/cache.hpp"
#include "resonance/zeta.hpp"

namespace resonance {

double uniform01(std::uint64_t bits) { return double(bits >> 11) * 0x1.0p-53; }

void HuntParams::validate() const {
  if (!(T > kE)) throw InvalidArgument("hunt needs T > e");
  if (!(t_min >= 0.0 && t_min < T)) throw InvalidArgument("t_min must lie in [0, T)");
  if (T > t_ceiling) throw InvalidArgument("hunt T exceeds the evaluation ceiling t_ceiling");
  if (t_ceiling > kMaxImaginaryPart) throw InvalidArgument("t_ceiling above the validated evaluation range");
  if (d < 3) throw InvalidArgument("hunt needs d >= 3");
  if (ell < 0) throw InvalidArgument("derivative order must be non-negative");
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("hunt needs 0 < sigma < 1");
  if (q < 0 || controls < 0) throw InvalidArgument("candidate and control counts must be non-negative");
  if (!(grid_step > 0.0) || (T - t_min) / grid_step > 1e8) throw InvalidArgument("grid_step out of range");
  if (N != 0.0 && !(N > kE)) throw InvalidArgument("resonator length N must exceed e");
  if (!(c_d > 0.0)) throw InvalidArgument("c_d must be positive");
  if (min_separation < 0.0) throw InvalidArgument("min_separation must be non-negative");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
}

Resonator build_desk_resonator(const FieldSpec& field, double N, double c_d, double T) {
  if (!(N > kE)) throw InvalidArgument("desk resonator needs N > e");
  Resonator res;
  res.variant = "desk";
  res.T = T;
  res.params = {{"N", N}, {"c_d", c_d}, {"d", field.d()}};
  const double scale = c_d * std::sqrt(std::log(N) * std::log(std::log(N)));
  const auto primes = N > 2.0 ? primes_in_class(2.0, std::floor(N), field.d()) : std::vector<std::uint64_t>{};
  std::vector<double> fp(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double p = double(primes[i]);
    fp[i] = scale / (std::sqrt(p) * std::log(p));
  }
  struct Node {
    std::uint64_t n;
    std::size_t next;
    double r;
  };
  const auto limit = static_cast<std::uint64_t>(std::floor(N));
  std::vector<std::pair<std::uint64_t, double>> out;
  std::vector<Node> stack{{1, 0, 1.0}};
  while (!stack.empty()) {
    const Node cur = stack.back();
    stack.pop_back();
    out.emplace_back(cur.n, cur.r);
    for (std::size_t i = cur.next; i < primes.size() && cur.n * primes[i] <= limit; ++i)
      stack.push_back({cur.n * primes[i], i + 1, cur.r * fp[i]});
  }
  std::sort(out.begin(), out.end());
  for (const auto& [n, r] : out) {
    auto h = FactoredInteger::from_u64(n);
    const double lh = h.log_value();
    res.entries.push_back({std::move(h), lh, r});
  }
  return res;
}

namespace {

// Main terms of the large-value lower bounds at height T, when log_3 T > 0.
std::optional<double> critical_curve(double T, double phi) {
  const double l1 = std::log(T), l2 = std::log(l1);
  if (!(l2 > 1.0)) return std::nullopt;
  const double l3 = std::log(l2);
  return std::exp(std::sqrt(phi) * std::sqrt(l1 * l3 / l2));
}

std::optional<double> strip_curve(double T, double phi, double sigma) {
  const double l1 = std::log(T), l2 = std::log(l1);
  if (!(l2 > 1.0) || !(sigma > 0.5 && sigma < 1.0)) return std::nullopt;
  const double l3 = std::log(l2);
  return std::exp(std::sqrt(phi / (kE - 1.0)) * std::pow(l1, 1.0 - sigma) * std::pow(l3, sigma) /
                  std::pow(l2, sigma));
}

}  // namespace

HuntResult run_hunt(const HuntParams& params, unsigned threads) {
  params.validate();
  const FieldSpec field(params.d);
  const double N = params.N > 0.0 ? params.N : params.T;
  HuntResult out;
  out.params = params;
  std::mt19937_64 rng(params.seed);

  std::vector<double> grid;
  std::vector<double> r2;
  const double width = params.T - params.t_min;
  const auto n_grid = static_cast<std::size_t>(std::floor(width / params.grid_step));
  for (std::size_t i = 0; i < n_grid; ++i)
    grid.push_back(params.t_min + (double(i) + uniform01(rng())) * params.grid_step);
  out.grid_points = grid.size();

  if (params.q > 0) {
    const Resonator res = build_desk_resonator(field, N, params.c_d, params.T);
    out.resonator_size = res.entries.size();
    r2.assign(grid.size(), 0.0);
    parallel_for(grid.size(), threads, [&](std::size_t i) { r2[i] = std::norm(res.value(grid[i])); });

    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const bool left = i == 0 || r2[i] >= r2[i - 1];
      const bool right = i + 1 == grid.size() || r2[i] > r2[i + 1];
      if (left && right) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return r2[a] > r2[b]; });
    const double sep = params.min_separation > 0.0 ? params.min_separation : 2.0 * kPi / std::log(N);
    for (std::size_t i : peaks) {
      if (out.candidates.size() == std::size_t(params.q)) break;
      const bool clear = std::all_of(out.candidates.begin(), out.candidates.end(),
                                     [&](const HuntPoint& c) { return std::abs(c.t - grid[i]) >= sep; });
      if (clear) out.candidates.push_back({grid[i], r2[i], 0.0});
    }
  }
  for (int i = 0; i < params.controls; ++i) out.controls.push_back({params.t_min + uniform01(rng()) * width, 0.0, 0.0});

  std::vector<HuntPoint*> all;
  for (auto& c : out.candidates) all.push_back(&c);
  for (auto& c : out.controls) all.push_back(&c);
  parallel_for(all.size(), threads, [&](std::size_t i) {
    const Complex s(params.sigma, all[i]->t);
    all[i]->value = std::abs(dedekind_zeta_derivative(s, field, params.ell, params.tol).value);
  });

  for (const auto& c : out.candidates) out.guided_max = std::max(out.guided_max, c.value);
  for (const auto& c : out.controls) out.control_max = std::max(out.control_max, c.value);
  out.guided_wins = !out.candidates.empty() && out.guided_max >= out.control_max;
  out.curve_critical = critical_curve(params.T, double(field.totient()));
  out.curve_strip = strip_curve(params.T, double(field.totient()), params.sigma);
  return out;
}

nlohmann::ordered_json HuntResult::to_json() const {
  using J = nlohmann::ordered_json;
  auto pts = [](const std::vector<HuntPoint>& v, bool with_r2) {
    J arr = J::array();
    for (const auto& p : v) {
      J e = {{"t", p.t}};
      if (with_r2) e["R2"] = p.r2;
      e["value"] = p.value;
      arr.push_back(e);
    }
    return arr;
  };
  auto opt = [](const std::optional<double>& x) { return x ? J(*x) : J(nullptr); };
  J j;
  j["resonator_size"] = resonator_size;
  j["grid_points"] = grid_points;
  j["candidates"] = pts(candidates, true);
  j["controls"] = pts(controls, false);
  j["guided_max"] = guided_max;
  j["control_max"] = control_max;
  j["guided_wins"] = guided_wins;
  j["curves"] = {{"critical_line", opt(curve_critical)}, {"strip", opt(curve_strip)}};
  return j;
}

void HuntResult::write_csv(std::ostream& os) const {
  os << "kind,t,R2,value\n";
  os.precision(17);
  for (const auto& c : candidates) os << "candidate," << c.t << ',' << c.r2 << ',' << c.value << '\n';
  for (const auto& c : controls) os << "control," << c.t << ",," << c.value << '\n';
}

}  // namespace resonance
