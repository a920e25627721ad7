#pragma once

// On-disk cache of sieved prime lists keyed by (lo, hi, d). Entries carry an
// FNV-1a checksum; unreadable or corrupt entries are rebuilt and rewritten.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace resonance {

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h = 0xcbf29ce484222325ull);

struct PrimeCacheStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t rebuilt = 0;  // entries found corrupt
};

class PrimeCache {
 public:
  explicit PrimeCache(std::filesystem::path dir);

  std::vector<std::uint64_t> get(double lo, double hi, std::uint64_t d);
  std::filesystem::path entry_path(double lo, double hi, std::uint64_t d) const;
  const PrimeCacheStats& stats() const { return stats_; }

 private:
  std::filesystem::path dir_;
  PrimeCacheStats stats_;
};

/// Directs primes_in_class through a cache in `dir`; an empty path disables caching.
void set_prime_cache_dir(const std::filesystem::path& dir);
PrimeCacheStats prime_cache_stats();

/// sieve_primes_in_class, through the cache when one is configured.
std::vector<std::uint64_t> primes_in_class(double lo, double hi, std::uint64_t d);

}  // namespace resonance
