#include "resonance/factored.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resonance/error.hpp"
#include "resonance/field.hpp"

namespace resonance {

FactoredInteger::FactoredInteger(std::vector<Factor> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].second < 1) throw InvalidArgument("FactoredInteger: exponents must be >= 1");
    if (factors_[i].first < 2) throw InvalidArgument("FactoredInteger: primes must be >= 2");
    if (i && factors_[i - 1].first >= factors_[i].first)
      throw InvalidArgument("FactoredInteger: primes must be strictly increasing");
  }
  refresh();
}

void FactoredInteger::refresh() {
  log_value_ = 0.0;
  for (auto [p, e] : factors_) log_value_ += e * std::log(double(p));
}

FactoredInteger FactoredInteger::from_u64(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("FactoredInteger: zero is not representable");
  return FactoredInteger(factorize(n));
}

FactoredInteger FactoredInteger::from_primes(std::vector<std::uint64_t> primes) {
  std::sort(primes.begin(), primes.end());
  std::vector<Factor> f;
  f.reserve(primes.size());
  for (auto p : primes) f.emplace_back(p, 1);
  return FactoredInteger(std::move(f));
}

FactoredInteger FactoredInteger::parse(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  std::vector<Factor> f;
  while (in >> tok) {
    if (tok == "1" && f.empty()) continue;
    auto caret = tok.find('^');
    try {
      std::uint64_t p = std::stoull(tok.substr(0, caret));
      int e = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
      f.emplace_back(p, e);
    } catch (const std::logic_error&) {
      throw InvalidArgument("FactoredInteger: cannot parse token '" + tok + "'");
    }
  }
  return FactoredInteger(std::move(f));
}

bool FactoredInteger::is_squarefree() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.second == 1; });
}

int FactoredInteger::exponent_of(std::uint64_t p) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{p, 0});
  return (it != factors_.end() && it->first == p) ? it->second : 0;
}

std::optional<std::uint64_t> FactoredInteger::to_u64() const {
  unsigned __int128 v = 1;
  for (auto [p, e] : factors_)
    for (int i = 0; i < e; ++i) {
      v *= p;
      if (v > UINT64_MAX) return std::nullopt;
    }
  return std::uint64_t(v);
}

std::string FactoredInteger::to_string() const {
  if (factors_.empty()) return "1";
  std::string s;
  for (auto [p, e] : factors_) {
    if (!s.empty()) s += ' ';
    s += std::to_string(p) + '^' + std::to_string(e);
  }
  return s;
}

namespace {

template <class Op>
FactoredInteger merge(const FactoredInteger& a, const FactoredInteger& b, Op op) {
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::vector<FactoredInteger::Factor> out;
  std::size_t i = 0, j = 0;
  while (i < fa.size() || j < fb.size()) {
    std::uint64_t p;
    int ea = 0, eb = 0;
    if (j == fb.size() || (i < fa.size() && fa[i].first < fb[j].first)) {
      p = fa[i].first;
      ea = fa[i++].second;
    } else if (i == fa.size() || fb[j].first < fa[i].first) {
      p = fb[j].first;
      eb = fb[j++].second;
    } else {
      p = fa[i].first;
      ea = fa[i++].second;
      eb = fb[j++].second;
    }
    int e = op(ea, eb);
    if (e > 0) out.emplace_back(p, e);
  }
  return FactoredInteger(std::move(out));
}

}  // namespace

FactoredInteger gcd(const FactoredInteger& a, const FactoredInteger& b) {
  return merge(a, b, [](int x, int y) { return std::min(x, y); });
}

FactoredInteger lcm(const FactoredInteger& a, const FactoredInteger& b) {
  return merge(a, b, [](int x, int y) { return std::max(x, y); });
}

FactoredInteger operator*(const FactoredInteger& a, const FactoredInteger& b) {
  return merge(a, b, [](int x, int y) { return x + y; });
}

FactoredInteger exact_div(const FactoredInteger& a, const FactoredInteger& b) {
  if (!b.divides(a)) throw InvalidArgument("exact_div: divisor does not divide");
  return merge(a, b, [](int x, int y) { return x - y; });
}

bool FactoredInteger::divides(const FactoredInteger& n) const {
  for (auto [p, e] : factors_)
    if (n.exponent_of(p) < e) return false;
  return true;
}

std::strong_ordering compare_value(const FactoredInteger& a, const FactoredInteger& b) {
  if (a == b) return std::strong_ordering::equal;
  auto wide = [](const FactoredInteger& x) -> std::optional<unsigned __int128> {
    unsigned __int128 v = 1;
    const unsigned __int128 cap = ~static_cast<unsigned __int128>(0) / 2;
    for (auto [p, e] : x.factors())
      for (int i = 0; i < e; ++i) {
        if (v > cap / p) return std::nullopt;
        v *= p;
      }
    return v;
  };
  auto wa = wide(a), wb = wide(b);
  if (wa && wb) return *wa < *wb ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.log_value() != b.log_value())
    return a.log_value() < b.log_value() ? std::strong_ordering::less : std::strong_ordering::greater;
  return a.factors() < b.factors() ? std::strong_ordering::less : std::strong_ordering::greater;
}

double log_gcd_lcm_ratio(const FactoredInteger& m, const FactoredInteger& n) {
  const auto& fa = m.factors();
  const auto& fb = n.factors();
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < fa.size() || j < fb.size()) {
    if (j == fb.size() || (i < fa.size() && fa[i].first < fb[j].first)) {
      s += fa[i].second * std::log(double(fa[i].first));
      ++i;
    } else if (i == fa.size() || fb[j].first < fa[i].first) {
      s += fb[j].second * std::log(double(fb[j].first));
      ++j;
    } else {
      s += std::abs(fa[i].second - fb[j].second) * std::log(double(fa[i].first));
      ++i;
      ++j;
    }
  }
  return -s;
}

std::string write_set(const std::vector<FactoredInteger>& set) {
  std::string out;
  for (const auto& m : set) out += m.to_string() + '\n';
  return out;
}

std::vector<FactoredInteger> read_set(const std::string& text) {
  std::vector<FactoredInteger> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(FactoredInteger::parse(line));
  }
  return out;
}

}  // namespace resonance
