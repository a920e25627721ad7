#include "resonance/zeta.hpp"

#include <array>
#include <cmath>
#include <map>

#include "resonance/error.hpp"

namespace resonance {

namespace {

constexpr int kMaxBernoulli = 60;

// B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}, k = 1..kMaxBernoulli.
const std::array<double, kMaxBernoulli + 1>& bernoulli_over_factorial() {
  static const auto table = [] {
    std::array<double, kMaxBernoulli + 1> t{};
    for (int k = 1; k <= kMaxBernoulli; ++k) {
      double z;
      if (k == 1) {
        z = kPi * kPi / 6.0;
      } else {
        const int p = 2 * k;
        z = std::pow(1000.5, 1 - p) / (p - 1);
        for (int n = 1000; n >= 1; --n) z += std::pow(double(n), -p);
      }
      t[k] = (k % 2 ? 2.0 : -2.0) * z / std::pow(2.0 * kPi, 2 * k);
    }
    return t;
  }();
  return table;
}

void check_domain(Complex s) {
  if (!(s.real() > 0.0)) throw InvalidArgument("evaluation needs Re(s) > 0");
  if (std::abs(s.imag()) > kMaxImaginaryPart) throw InvalidArgument("|Im s| beyond the validated ceiling");
  if (std::abs(s - 1.0) < 1e-6) throw InvalidArgument("s too close to the pole at 1");
}

}  // namespace

Estimate<Complex> hurwitz_zeta(Complex s, double a) {
  check_domain(s);
  if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("hurwitz_zeta needs 0 < a <= 1");
  const auto& bern = bernoulli_over_factorial();
  int M = std::max(10, int(std::ceil(std::abs(s)))) + 10;
  for (int attempt = 0; attempt < 6; ++attempt, M *= 2) {
    CompensatedSum<Complex> acc;
    for (int n = M - 1; n >= 0; --n) acc.add(std::exp(-s * std::log(n + a)));
    const double x = M + a;
    const Complex xs = std::exp(-s * std::log(x));
    acc.add(xs * x / (s - 1.0));
    acc.add(0.5 * xs);
    Complex poch = s;
    Complex xp = xs / x;
    double last = std::abs(bern[1] * poch * xp);
    bool converged = false;
    for (int k = 1; k <= kMaxBernoulli; ++k) {
      const Complex term = bern[k] * poch * xp;
      const double mag = std::abs(term);
      if (k > 1 && mag > last) break;  // asymptotic series turned; enlarge M
      acc.add(term);
      last = mag;
      if (mag < 1e-17 * std::abs(acc.value()) || mag < 1e-300) {
        converged = true;
        break;
      }
      poch *= (s + double(2 * k - 1)) * (s + double(2 * k));
      xp /= x * x;
    }
    if (converged) return {acc.value(), last + 1e-16 * std::abs(acc.value())};
  }
  throw ConvergenceFailure("Euler-Maclaurin for the Hurwitz zeta function did not converge");
}

Complex riemann_zeta(Complex s) { return hurwitz_zeta(s, 1.0).value; }

std::uint64_t character_conductor(const Character& chi) {
  const std::uint64_t q = chi.modulus();
  for (std::uint64_t c = 1; c < q; ++c) {
    if (q % c) continue;
    bool trivial = true;
    for (std::uint64_t n = 1; n < q && trivial; n += c)
      if (chi.index(n) != Character::kZero && chi.index(n) != 0) trivial = false;
    if (trivial) return c;
  }
  return q;
}

Complex dirichlet_l(Complex s, const Character& chi) {
  const std::uint64_t q = chi.modulus();
  if (character_conductor(chi) != q) throw InvalidArgument("dirichlet_l needs a primitive character");
  if (q == 1) return riemann_zeta(s);
  CompensatedSum<Complex> acc;
  for (std::uint64_t a = 1; a <= q; ++a) {
    if (chi.index(a) == Character::kZero) continue;
    acc.add(chi(a) * hurwitz_zeta(s, double(a) / double(q)).value);
  }
  return std::exp(-s * std::log(double(q))) * acc.value();
}

double digamma(double x) {
  if (!(x > 0.0)) throw InvalidArgument("digamma needs x > 0");
  double shift = 0.0;
  while (x < 20.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132)))));
  return shift + std::log(x) - 0.5 / x - series;
}

Complex dirichlet_l_at_one(const Character& chi) {
  const std::uint64_t q = chi.modulus();
  if (chi.is_principal()) throw InvalidArgument("L(1, chi) diverges for principal chi");
  if (character_conductor(chi) != q) throw InvalidArgument("dirichlet_l_at_one needs a primitive character");
  CompensatedSum<Complex> acc;
  for (std::uint64_t a = 1; a < q; ++a) {
    if (chi.index(a) == Character::kZero) continue;
    acc.add(chi(a) * digamma(double(a) / double(q)));
  }
  return -acc.value() / double(q);
}

Complex dedekind_zeta(Complex s, const FieldSpec& field) {
  check_domain(s);
  Complex result = riemann_zeta(s);
  // Hurwitz values are shared by all characters of the same conductor.
  std::map<std::uint64_t, std::vector<Complex>> hurwitz;
  for (const auto& entry : field.characters()) {
    if (entry.chi.is_principal()) continue;
    const std::uint64_t q = entry.conductor;
    auto it = hurwitz.find(q);
    if (it == hurwitz.end()) {
      std::vector<Complex> h(q + 1);
      const Complex scale = std::exp(-s * std::log(double(q)));
      for (std::uint64_t a = 1; a <= q; ++a)
        if (entry.primitive.index(a) != Character::kZero) h[a] = scale * hurwitz_zeta(s, double(a) / q).value;
      it = hurwitz.emplace(q, std::move(h)).first;
    }
    CompensatedSum<Complex> acc;
    for (std::uint64_t a = 1; a <= q; ++a)
      if (entry.primitive.index(a) != Character::kZero) acc.add(entry.primitive(a) * it->second[a]);
    result *= acc.value();
  }
  return result;
}

double dedekind_residue(const FieldSpec& field) {
  Complex r = 1.0;
  for (const auto& entry : field.characters())
    if (!entry.chi.is_principal()) r *= dirichlet_l_at_one(entry.primitive);
  return r.real();
}

double derivative_radius(Complex s) { return std::min({0.25, std::abs(s - 1.0) / 2.0, s.real() / 2.0}); }

Estimate<Complex> dedekind_zeta_derivative(Complex s, const FieldSpec& field, int ell, double tol) {
  check_domain(s);
  if (ell < 0) throw InvalidArgument("derivative order must be non-negative");
  if (ell == 0) return {dedekind_zeta(s, field), 0.0};
  return cauchy_derivative([&](Complex z) { return dedekind_zeta(z, field); }, s, ell, derivative_radius(s), tol);
}

Complex g_function(Complex s, const FieldSpec& field, int ell, double tol) {
  const double a2 = double(dedekind_coefficient(2, field));
  const Complex z = dedekind_zeta_derivative(s, field, ell, tol).value;
  return 1.0 + a2 * std::exp(-s * std::log(2.0)) + (ell % 2 ? -z : z);
}

namespace {

std::vector<double> g_coefficients(const FieldSpec& field, std::uint64_t nmax, int ell) {
  const auto ak = dedekind_coefficients(field, std::max<std::uint64_t>(nmax, 2));
  std::vector<double> a(nmax + 1, 0.0);
  for (std::uint64_t n = 1; n <= nmax; ++n) a[n] = g_coefficient_from(n, ak[n], ak[2], ell);
  return a;
}

// Largest n with log n below the support of K-hat.
std::uint64_t support_limit(const KernelSpec& kspec, std::uint64_t budget) {
  const double L = kspec.support();
  if (L > std::log(double(budget)) + 1.0) throw BudgetExceeded("kernel support too wide for the term budget");
  std::uint64_t n = std::uint64_t(std::floor(std::exp(L)));
  while (n > 1 && !(std::log(double(n)) < L)) --n;
  while (std::log(double(n + 1)) < L) ++n;
  return n;
}

}  // namespace

Complex e_series(double t, const KernelSpec& kspec, const FieldSpec& field, int ell, double sigma,
                 std::uint64_t max_pairs) {
  const std::uint64_t X = support_limit(kspec, max_pairs);
  const auto a = g_coefficients(field, X, ell);
  std::uint64_t count = 0;
  CompensatedSum<Complex> acc;
  for (std::uint64_t n = 1; n <= X; ++n) {
    const double ln = std::log(double(n));
    for (std::uint64_t m = 1; n * m <= X; ++m) {
      if (++count > max_pairs) throw BudgetExceeded("e_series pair budget exceeded");
      const double lm = std::log(double(m));
      const double k = kernel_hat(kspec, ln + lm);
      if (k == 0.0 || a[n] == 0.0 || a[m] == 0.0) continue;
      acc.add(k * a[n] * a[m] * std::exp(-sigma * (ln + lm)) * std::polar(1.0, -t * (ln - lm)));
    }
  }
  return acc.value();
}

Complex single_series(double t, const KernelSpec& kspec, const FieldSpec& field, int ell, double sigma,
                      std::uint64_t max_terms) {
  const std::uint64_t X = support_limit(kspec, max_terms);
  const auto a = g_coefficients(field, X, ell);
  CompensatedSum<Complex> acc;
  for (std::uint64_t n = 1; n <= X; ++n) {
    const double ln = std::log(double(n));
    const double k = kernel_hat(kspec, ln);
    if (k == 0.0 || a[n] == 0.0) continue;
    acc.add(k * a[n] * std::exp(-sigma * ln) * std::polar(1.0, -t * ln));
  }
  return acc.value();
}

}  // namespace resonance
