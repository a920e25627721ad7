#include "resonance/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "resonance/error.hpp"

namespace resonance {

std::vector<std::uint64_t> sieve_primes_in_class(double lo, double hi, std::uint64_t d,
                                                 std::size_t max_primes) {
  if (!(lo >= 2.0) || !(lo < hi) || !(hi <= 1e10))
    throw InvalidArgument("sieve_primes_in_class: need 2 <= lo < hi <= 1e10");
  if (d == 0) throw InvalidArgument("sieve_primes_in_class: d must be >= 1");
  const std::uint64_t first = std::uint64_t(std::floor(lo)) + 1;
  const std::uint64_t last = std::uint64_t(std::floor(hi));
  if (first > last) return {};

  // Prime number theorem estimate of the output size.
  const double expected = (double(last) - double(first)) / std::log(double(last) + 2.0);
  if (expected / double(d > 1 ? d - 1 : 1) > double(max_primes)) {
    const double pieces = std::ceil(expected / double(max_primes));
    throw BudgetExceeded("sieve_primes_in_class: range (" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "] exceeds the memory budget; split it into at least " +
                         std::to_string(static_cast<long long>(pieces)) + " segments");
  }

  const std::uint64_t root = std::uint64_t(std::sqrt(double(last))) + 1;
  std::vector<char> small(root + 1, 1);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }

  std::vector<std::uint64_t> out;
  constexpr std::uint64_t kSegment = 1u << 18;
  std::vector<char> seg(kSegment);
  for (std::uint64_t low = first; low <= last; low += kSegment) {
    const std::uint64_t high = std::min(last, low + kSegment - 1);
    std::fill(seg.begin(), seg.end(), 1);
    for (auto p : base) {
      if (p * p > high) break;
      std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
      for (std::uint64_t j = start; j <= high; j += p) seg[j - low] = 0;
    }
    for (std::uint64_t n = low; n <= high; ++n)
      if (seg[n - low] && n >= 2 && n % d == 1 % d) out.push_back(n);
  }
  return out;
}

}  // namespace resonance
