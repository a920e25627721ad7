#include "resonance/field.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace resonance {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Primitive root modulo p^a for an odd prime p.
std::uint64_t primitive_root_odd(std::uint64_t p, int a) {
  const std::uint64_t phi_p = p - 1;
  auto fac = factorize(phi_p);
  std::uint64_t g = 2;
  for (;; ++g) {
    bool ok = true;
    for (auto [q, _] : fac)
      if (powmod(g, phi_p / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) break;
  }
  if (a >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
  return g;
}

struct CyclicFactor {
  std::uint64_t generator;  // lifted to a residue mod d
  std::uint64_t order;
};

// Generators of (Z/dZ)^* as a product of cyclic groups, via CRT over the
// prime-power factors of d.
std::vector<CyclicFactor> unit_group_generators(std::uint64_t d) {
  std::vector<CyclicFactor> out;
  for (auto [p, a] : factorize(d)) {
    const std::uint64_t pa = ipow(p, a);
    const std::uint64_t rest = d / pa;
    auto lift = [&](std::uint64_t g) {
      // x = g mod p^a, x = 1 mod rest.
      for (std::uint64_t x = g % pa; x < d; x += pa)
        if (x % rest == 1 % rest) return x;
      throw Error("CRT lift failed");
    };
    if (p == 2) {
      if (a == 2) out.push_back({lift(3), 2});
      if (a >= 3) {
        out.push_back({lift(pa - 1), 2});
        out.push_back({lift(5), pa / 4});
      }
    } else {
      out.push_back({lift(primitive_root_odd(p, a)), pa / p * (p - 1)});
    }
  }
  return out;
}

}  // namespace

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  if (n < 2) return out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic Miller-Rabin for 64-bit integers.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t euler_totient(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("euler_totient: n must be >= 1");
  std::uint64_t r = n;
  for (auto [p, _] : factorize(n)) r = r / p * (p - 1);
  return r;
}

std::uint64_t multiplicative_order(std::uint64_t p, std::uint64_t m) {
  if (m == 0) throw InvalidArgument("multiplicative_order: modulus must be >= 1");
  if (m == 1) return 1;
  if (std::gcd(p, m) != 1) throw InvalidArgument("multiplicative_order: gcd(p, m) != 1");
  // The order divides phi(m); test divisors in increasing order.
  const std::uint64_t phi = euler_totient(m);
  std::vector<std::uint64_t> divs;
  for (std::uint64_t i = 1; i * i <= phi; ++i)
    if (phi % i == 0) {
      divs.push_back(i);
      if (i != phi / i) divs.push_back(phi / i);
    }
  std::sort(divs.begin(), divs.end());
  for (auto f : divs)
    if (powmod(p, f, m) == 1) return f;
  throw Error("multiplicative_order: no order found");
}

std::uint64_t compositions_count(std::uint64_t j, std::uint64_t r) {
  if (r == 0) throw InvalidArgument("compositions_count: r must be >= 1");
  return binomial(j + r - 1, r - 1);
}

// ---------------------------------------------------------------- Character

Character::Character(std::uint64_t modulus, std::uint64_t order, std::vector<int> index)
    : modulus_(modulus), order_(order), index_(std::move(index)) {
  if (modulus_ == 0 || index_.size() != modulus_) throw InvalidArgument("Character: bad table size");
}

Complex Character::operator()(std::uint64_t n) const {
  int k = index(n);
  if (k == kZero) return 0.0;
  if (k == 0) return 1.0;
  return std::polar(1.0, 2.0 * kPi * k / double(order_));
}

bool Character::is_principal() const {
  for (int k : index_)
    if (k != kZero && k != 0) return false;
  return true;
}

Character Character::conjugate() const {
  std::vector<int> idx(index_);
  for (int& k : idx)
    if (k != kZero) k = int((order_ - k) % order_);
  return Character(modulus_, order_, std::move(idx));
}

// ---------------------------------------------------------------- FieldSpec

FieldSpec::FieldSpec(std::uint64_t d) : d_(d) {
  if (d == 0) throw InvalidArgument("FieldSpec: d must be >= 1");
  totient_ = euler_totient(d);
  auto gens = unit_group_generators(d);
  order_ = 1;
  for (auto& g : gens) order_ = std::lcm(order_, g.order);

  // Discrete logarithms of every unit with respect to the generators.
  std::vector<std::vector<std::uint64_t>> dlog(d);
  {
    std::vector<std::uint64_t> e(gens.size(), 0);
    for (std::uint64_t count = 0; count < totient_; ++count) {
      std::uint64_t x = 1 % d;
      for (std::size_t i = 0; i < gens.size(); ++i) x = mulmod(x, powmod(gens[i].generator, e[i], d), d);
      dlog[x] = e;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (++e[i] < gens[i].order) break;
        e[i] = 0;
      }
    }
  }

  std::vector<std::uint64_t> divisors_of_d;
  for (std::uint64_t c = 1; c <= d; ++c)
    if (d % c == 0) divisors_of_d.push_back(c);

  std::vector<std::uint64_t> c(gens.size(), 0);
  for (std::uint64_t count = 0; count < totient_; ++count) {
    std::vector<int> idx(d, Character::kZero);
    for (std::uint64_t n = 0; n < d; ++n) {
      if (std::gcd(n, d) != 1) continue;
      std::uint64_t k = 0;
      for (std::size_t i = 0; i < gens.size(); ++i)
        k += c[i] * dlog[n][i] * (order_ / gens[i].order);
      idx[n] = int(k % order_);
    }
    if (d == 1) idx[0] = 0;
    Character chi(d, order_, idx);

    std::uint64_t conductor = d;
    for (auto cand : divisors_of_d) {
      bool trivial = true;
      for (std::uint64_t n = 1; n < d && trivial; ++n)
        if (std::gcd(n, d) == 1 && n % cand == 1 % cand && idx[n] != 0) trivial = false;
      if (trivial) {
        conductor = cand;
        break;
      }
    }
    std::vector<int> pidx(conductor, Character::kZero);
    for (std::uint64_t a = 0; a < conductor; ++a) {
      if (std::gcd(a, conductor) != 1) continue;
      for (std::uint64_t n = a; n < d + conductor; n += conductor)
        if (std::gcd(n % d, d) == 1) {
          pidx[a] = idx[n % d];
          break;
        }
    }
    if (conductor == 1) pidx[0] = 0;
    characters_.push_back({std::move(chi), conductor, Character(conductor, order_, std::move(pidx))});

    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (++c[i] < gens[i].order) break;
      c[i] = 0;
    }
  }
}

SplittingProfile FieldSpec::splitting(std::uint64_t p) const {
  if (!is_prime(p)) throw InvalidArgument("splitting: p must be prime");
  if (d_ % p != 0) {
    const auto f = multiplicative_order(p, d_);
    return {p, 1, f, totient_ / f};
  }
  std::uint64_t m = d_, pa = 1;
  while (m % p == 0) {
    m /= p;
    pa *= p;
  }
  const auto f = multiplicative_order(p, m);
  return {p, euler_totient(pa), f, euler_totient(m) / f};
}

std::uint64_t FieldSpec::prime_power_coefficient(std::uint64_t p, int k) const {
  if (k == 0) return 1;
  const auto prof = splitting(p);
  if (std::uint64_t(k) % prof.f != 0) return 0;
  return compositions_count(std::uint64_t(k) / prof.f, prof.r);
}

SplittingProfile splitting_profile(std::uint64_t p, const FieldSpec& field) { return field.splitting(p); }

std::uint64_t dedekind_coefficient(std::uint64_t n, const FieldSpec& field) {
  if (n == 0) throw InvalidArgument("dedekind_coefficient: n must be >= 1");
  std::uint64_t r = 1;
  for (auto [p, k] : factorize(n)) {
    r *= field.prime_power_coefficient(p, k);
    if (r == 0) break;
  }
  return r;
}

std::vector<std::uint64_t> dedekind_coefficients(const FieldSpec& field, std::uint64_t nmax) {
  std::vector<std::uint32_t> spf(nmax + 1, 0);
  for (std::uint64_t i = 2; i <= nmax; ++i) {
    if (spf[i]) continue;
    for (std::uint64_t j = i; j <= nmax; j += i)
      if (!spf[j]) spf[j] = std::uint32_t(i);
  }
  // Residue degree for each prime, cached by prime; r = phi(d)/f except for
  // ramified primes which go through FieldSpec::splitting.
  std::vector<std::uint32_t> degree(nmax + 1, 0);
  std::vector<std::uint64_t> a(nmax + 1, 0);
  if (nmax >= 1) a[1] = 1;
  for (std::uint64_t n = 2; n <= nmax; ++n) {
    const std::uint64_t p = spf[n];
    std::uint64_t m = n;
    int k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    std::uint64_t apk;
    if (field.d() % p == 0) {
      apk = field.prime_power_coefficient(p, k);
    } else {
      if (!degree[p]) degree[p] = std::uint32_t(multiplicative_order(p, field.d()));
      const std::uint64_t f = degree[p];
      apk = (std::uint64_t(k) % f) ? 0 : compositions_count(std::uint64_t(k) / f, field.totient() / f);
    }
    a[n] = a[m] * apk;
  }
  return a;
}

std::vector<std::uint64_t> coefficients_via_characters(const FieldSpec& field, std::uint64_t nmax) {
  if (nmax < 1) throw InvalidArgument("coefficients_via_characters: nmax must be >= 1");
  const std::size_t m = field.order();
  // Element n of the running product lives at [n*m, (n+1)*m).
  std::vector<std::int64_t> acc((nmax + 1) * m, 0), next((nmax + 1) * m, 0);
  for (std::uint64_t n = 1; n <= nmax; ++n) acc[n * m] = 1;

  for (const auto& entry : field.characters()) {
    if (entry.chi.is_principal()) continue;
    std::fill(next.begin(), next.end(), 0);
    for (std::uint64_t j = 1; j <= nmax; ++j) {
      const int rot = entry.primitive.index(j);
      if (rot == Character::kZero) continue;
      for (std::uint64_t k = 1, jk = j; jk <= nmax; ++k, jk += j) {
        const std::int64_t* src = &acc[k * m];
        std::int64_t* dst = &next[jk * m];
        for (std::size_t i = 0; i < m; ++i) dst[(i + rot) % m] += src[i];
      }
    }
    acc.swap(next);
  }

  std::vector<Complex> roots(m);
  for (std::size_t i = 0; i < m; ++i) roots[i] = std::polar(1.0, 2.0 * kPi * double(i) / double(m));
  std::vector<std::uint64_t> out(nmax + 1, 0);
  for (std::uint64_t n = 1; n <= nmax; ++n) {
    Complex v = 0.0;
    for (std::size_t i = 0; i < m; ++i) v += double(acc[n * m + i]) * roots[i];
    const double r = std::round(v.real());
    if (std::abs(v.imag()) > 1e-6 || std::abs(v.real() - r) > 1e-6 || r < 0) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "character convolution at n=%llu is not a non-negative integer: %.9g%+.9gi",
                    static_cast<unsigned long long>(n), v.real(), v.imag());
      throw ConvergenceFailure(buf);
    }
    out[n] = std::uint64_t(r);
  }
  return out;
}

double g_coefficient_from(std::uint64_t n, std::uint64_t a_k, std::uint64_t a_k2, int ell) {
  if (n == 0) throw InvalidArgument("g_coefficient: n must be >= 1");
  if (ell < 0) throw InvalidArgument("g_coefficient: ell must be >= 0");
  // (-1)^ell zeta_K^(ell) has coefficients a_K(n) (log n)^ell, with 0^0 = 1.
  if (n == 1) return ell == 0 ? 2.0 : 1.0;
  const double series = double(a_k) * std::pow(std::log(double(n)), ell);
  if (n == 2) return double(a_k2) + series;
  return series;
}

double g_coefficient(std::uint64_t n, const FieldSpec& field, int ell) {
  const auto a2 = dedekind_coefficient(2, field);
  return g_coefficient_from(n, n == 2 ? a2 : dedekind_coefficient(n, field), a2, ell);
}

double weight_aprime(std::uint64_t n, const FieldSpec& field) {
  if (n == 0) throw InvalidArgument("weight_aprime: n must be >= 1");
  double r = 1.0;
  for (auto [p, k] : factorize(n)) {
    if (k > 1) throw InvalidArgument("weight_aprime: n must be squarefree");
    r *= (double(field.totient()) + 1.0) / 2.0;
  }
  return r;
}

CoefficientTable CoefficientTable::build(const FieldSpec& field, std::uint64_t nmax, int ell,
                                         bool check_oracle) {
  if (nmax < 1) throw InvalidArgument("coefficient table: nmax must be >= 1");
  CoefficientTable t{field.d(), ell, dedekind_coefficients(field, nmax), {}, true};
  t.a.assign(nmax + 1, 0.0);
  const std::uint64_t a2 = nmax >= 2 ? t.a_k[2] : dedekind_coefficient(2, field);
  for (std::uint64_t n = 1; n <= nmax; ++n) t.a[n] = g_coefficient_from(n, t.a_k[n], a2, ell);
  if (check_oracle) t.oracle_agrees = coefficients_via_characters(field, nmax) == t.a_k;
  return t;
}

void CoefficientTable::write_csv(std::ostream& os) const {
  os << "n,a_K,a\n";
  char buf[64];
  for (std::size_t n = 1; n < a_k.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%.17g", a[n]);
    os << n << ',' << a_k[n] << ',' << buf << '\n';
  }
}

}  // namespace resonance
