#pragma once

// Resonators R(t) = sum_h r(h) h^{-it}: the binned construction over a set M,
// the windowed construction over M_d with weights from f, Gaussian moments
// and JSON serialization.

#include <string>
#include <vector>

#include <json.hpp>

#include "resonance/factored.hpp"
#include "resonance/numeric.hpp"
#include "resonance/weight.hpp"

namespace resonance {

struct ResonatorEntry {
  FactoredInteger h;
  double log_h = 0.0;
  double r = 0.0;
};

struct Resonator {
  std::string variant;            // "critical", "weighted", "desk"
  nlohmann::ordered_json params;  // construction inputs
  double T = 0.0;
  std::vector<ResonatorEntry> entries;  // ascending in h

  Complex value(double t) const;
  double r0() const;
  double sum_r_squared() const;
  double log_h_max() const;
};

/// Bin index of a positive number with logarithm `log_n` for ratio 1 + log T / T.
long long resonator_bin(double log_n, double T);

/// Bins M by powers of 1 + log T / T; one frequency per nonempty bin (its
/// minimum) with weight sqrt(bin count). Requires T > e.
Resonator build_resonator_critical(const std::vector<FactoredInteger>& M, double T);

/// Frequencies m_j = min of bin j within supp(f) cap M_d, with
/// r(m_j)^2 = sum of f(n)^2 over n in M_d with (1+L)^{j-1} <= n <= (1+L)^{j+2},
/// L = log T / T. Throws InvalidArgument on an empty support.
Resonator build_resonator_weighted(const WeightFunction& w, double T, std::size_t support_cap,
                                   double max_log = 1e300);

Complex resonator_value(const Resonator& res, double t);

struct GaussianMoment {
  double quadrature = 0.0;   // trapezoid rule for int |R(t)|^2 Phi(t log T / T) dt
  double closed_form = 0.0;  // sqrt(2 pi) (T/log T) sum r r' Phi((T/log T) log(h/h'))
  double step = 0.0;
  double relative_difference() const;
};

/// step <= 0 picks min(pi / (2 log h_max), T/(4 log T)); a step above
/// pi / log h_max is rejected.
GaussianMoment gaussian_moment(const Resonator& res, double step = 0.0, unsigned threads = 1);

nlohmann::ordered_json to_json(const Resonator& res);
Resonator resonator_from_json(const nlohmann::ordered_json& j);

}  // namespace resonance
