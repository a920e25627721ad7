#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for real- or complex-valued
// integrands on finite intervals.

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "resonance/error.hpp"
#include "resonance/numeric.hpp"

namespace resonance {

namespace gk_detail {

inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Complex& x) { return std::abs(x); }

template <class T, class F>
void rule(F& f, double a, double b, T& value, double& error) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fc = f(c);
  T kron = fc * kWk[7];
  T gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXk[i];
    T s = f(c - dx) + f(c + dx);
    kron += s * kWk[i];
    if (i % 2 == 1) gauss += s * kWg[i / 2];
  }
  value = kron * h;
  error = magnitude((kron - gauss) * h);
}

}  // namespace gk_detail

/// Integrates f over [a, b] by globally adaptive bisection of the interval
/// with the largest error estimate until the summed estimate is below
/// max(abs_tol, rel_tol |I|). Throws ConvergenceFailure after max_intervals.
template <class T, class F>
Estimate<T> integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                      int max_intervals = 20000) {
  struct Piece {
    double a, b;
    T value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  if (a == b) return {T{}, 0.0};
  std::priority_queue<Piece> heap;
  Piece first{a, b, T{}, 0.0};
  gk_detail::rule<T>(f, a, b, first.value, first.error);
  heap.push(first);
  T total = first.value;
  double err = first.error;
  int count = 1;
  while (err > std::max(abs_tol, rel_tol * gk_detail::magnitude(total))) {
    if (count >= max_intervals)
      throw ConvergenceFailure("adaptive quadrature: interval budget exhausted (error " + std::to_string(err) +
                               ")");
    Piece p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      // Interval cannot be split further in double precision.
      throw ConvergenceFailure("adaptive quadrature: interval collapsed before reaching tolerance");
    }
    Piece l{p.a, m, T{}, 0.0}, r{m, p.b, T{}, 0.0};
    gk_detail::rule<T>(f, l.a, l.b, l.value, l.error);
    gk_detail::rule<T>(f, r.a, r.b, r.value, r.error);
    heap.push(l);
    heap.push(r);
    ++count;
    // Re-accumulate from scratch now and then to avoid drift in total/err.
    if (count % 64 == 0) {
      auto copy = heap;
      CompensatedSum<T> tv;
      double te = 0.0;
      while (!copy.empty()) {
        tv.add(copy.top().value);
        te += copy.top().error;
        copy.pop();
      }
      total = tv.value();
      err = te;
    } else {
      total += l.value + r.value - p.value;
      err += l.error + r.error - p.error;
    }
  }
  CompensatedSum<T> tv;
  double te = 0.0;
  while (!heap.empty()) {
    tv.add(heap.top().value);
    te += heap.top().error;
    heap.pop();
  }
  return {tv.value(), te};
}

}  // namespace resonance
