#include "resonance/cache.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>

#include "resonance/error.hpp"
#include "resonance/sieve.hpp"

namespace resonance {

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

constexpr char kMagic[8] = {'R', 'E', 'S', 'P', 'R', 'I', 'M', '1'};

struct Header {
  char magic[8];
  std::uint64_t d;
  std::uint64_t lo_bits;
  std::uint64_t hi_bits;
  std::uint64_t count;
};

std::uint64_t checksum(const Header& h, const std::vector<std::uint64_t>& primes) {
  const std::uint64_t c = fnv1a64(&h, sizeof h);
  return fnv1a64(primes.data(), primes.size() * sizeof(std::uint64_t), c);
}

bool read_entry(const std::filesystem::path& path, const Header& want, std::vector<std::uint64_t>& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  Header h{};
  if (!in.read(reinterpret_cast<char*>(&h), sizeof h)) return false;
  if (std::memcmp(h.magic, want.magic, sizeof h.magic) != 0 || h.d != want.d || h.lo_bits != want.lo_bits ||
      h.hi_bits != want.hi_bits || h.count > (std::uint64_t(1) << 32))
    return false;
  std::vector<std::uint64_t> primes(h.count);
  std::uint64_t stored = 0;
  if (!in.read(reinterpret_cast<char*>(primes.data()), std::streamsize(h.count * sizeof(std::uint64_t))) ||
      !in.read(reinterpret_cast<char*>(&stored), sizeof stored))
    return false;
  if (in.peek() != std::char_traits<char>::eof()) return false;
  if (stored != checksum(h, primes)) return false;
  out = std::move(primes);
  return true;
}

void write_entry(const std::filesystem::path& path, Header h, const std::vector<std::uint64_t>& primes) {
  h.count = primes.size();
  const std::uint64_t sum = checksum(h, primes);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write prime cache entry " + tmp.string());
    out.write(reinterpret_cast<const char*>(&h), sizeof h);
    out.write(reinterpret_cast<const char*>(primes.data()), std::streamsize(primes.size() * sizeof(std::uint64_t)));
    out.write(reinterpret_cast<const char*>(&sum), sizeof sum);
    if (!out) throw Error("cannot write prime cache entry " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Header make_header(double lo, double hi, std::uint64_t d) {
  Header h{};
  std::memcpy(h.magic, kMagic, sizeof kMagic);
  h.d = d;
  h.lo_bits = std::bit_cast<std::uint64_t>(lo);
  h.hi_bits = std::bit_cast<std::uint64_t>(hi);
  return h;
}

}  // namespace

PrimeCache::PrimeCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path PrimeCache::entry_path(double lo, double hi, std::uint64_t d) const {
  const Header h = make_header(lo, hi, d);
  char name[40];
  std::snprintf(name, sizeof name, "primes-%016llx.bin",
                static_cast<unsigned long long>(fnv1a64(&h.d, 3 * sizeof(std::uint64_t))));
  return dir_ / name;
}

std::vector<std::uint64_t> PrimeCache::get(double lo, double hi, std::uint64_t d) {
  const Header want = make_header(lo, hi, d);
  const auto path = entry_path(lo, hi, d);
  std::vector<std::uint64_t> primes;
  if (read_entry(path, want, primes)) {
    ++stats_.hits;
    return primes;
  }
  if (std::filesystem::exists(path)) ++stats_.rebuilt;
  ++stats_.misses;
  primes = sieve_primes_in_class(lo, hi, d);
  write_entry(path, want, primes);
  return primes;
}

namespace {

std::mutex g_mutex;
std::unique_ptr<PrimeCache> g_cache;

}  // namespace

void set_prime_cache_dir(const std::filesystem::path& dir) {
  std::lock_guard lock(g_mutex);
  if (dir.empty())
    g_cache.reset();
  else
    g_cache = std::make_unique<PrimeCache>(dir);
}

PrimeCacheStats prime_cache_stats() {
  std::lock_guard lock(g_mutex);
  return g_cache ? g_cache->stats() : PrimeCacheStats{};
}

std::vector<std::uint64_t> primes_in_class(double lo, double hi, std::uint64_t d) {
  std::lock_guard lock(g_mutex);
  if (!g_cache) return sieve_primes_in_class(lo, hi, d);
  return g_cache->get(lo, hi, d);
}

}  // namespace resonance
