#pragma once

// Resonator-guided search for large |zeta_K^(ell)(sigma + it)| on [0, T]:
// rank a jittered grid by |R(t)|^2, evaluate at the best local maxima and at
// uniform random controls drawn from the same seeded generator. The grid
// jitter and the controls are the only random inputs.

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "resonance/field.hpp"
#include "resonance/resonator.hpp"

namespace resonance {

struct HuntParams {
  double T = 1000.0;
  double t_min = 0.0;  // search window [t_min, T] for candidates and controls
  std::uint64_t d = 3;
  int ell = 1;
  double sigma = 0.5;
  int q = 10;                 // guided candidates
  int controls = 10;          // uniform random controls
  double N = 0.0;             // resonator length; 0 means T
  double c_d = 1.0;
  double grid_step = 0.1;
  double min_separation = 0.0;  // between chosen candidates; 0 means 2 pi / log N
  double t_ceiling = 1.0e4;
  double tol = 1e-8;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Squarefree n <= N built from primes p = 1 (mod d), with
/// r(n) = prod_{p|n} c_d sqrt(log N log_2 N) / (sqrt(p) log p).
Resonator build_desk_resonator(const FieldSpec& field, double N, double c_d, double T);

struct HuntPoint {
  double t = 0.0;
  double r2 = 0.0;     // |R(t)|^2, 0 for controls
  double value = 0.0;  // |zeta_K^(ell)(sigma + it)|
};

struct HuntResult {
  HuntParams params;
  std::size_t resonator_size = 0;
  std::size_t grid_points = 0;
  std::vector<HuntPoint> candidates;  // descending |R|^2
  std::vector<HuntPoint> controls;    // in draw order
  double guided_max = 0.0;
  double control_max = 0.0;
  bool guided_wins = false;           // guided_max >= control_max
  std::optional<double> curve_critical;  // exp(sqrt(phi) sqrt(log T log_3 T / log_2 T))
  std::optional<double> curve_strip;     // exp(sqrt(phi/(e-1)) (log T)^{1-s} (log_3 T)^s / (log_2 T)^s)

  nlohmann::ordered_json to_json() const;
  void write_csv(std::ostream& os) const;
};

HuntResult run_hunt(const HuntParams& params, unsigned threads = 1);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
double uniform01(std::uint64_t bits);

}  // namespace resonance
