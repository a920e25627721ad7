#pragma once

#include <cstdint>
#include <vector>

namespace resonance {

/// Segmented sieve of Eratosthenes: all primes p in (lo, hi] with
/// p = 1 (mod d), ascending; d = 1 gives every prime. Requires
/// 2 <= lo < hi <= 1e10. Throws BudgetExceeded when the expected output
/// exceeds `max_primes` (the message suggests a segmentation).
std::vector<std::uint64_t> sieve_primes_in_class(double lo, double hi, std::uint64_t d,
                                                 std::size_t max_primes = 50'000'000);

}  // namespace resonance
