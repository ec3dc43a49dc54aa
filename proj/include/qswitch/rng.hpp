#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qswitch {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent generator for the job identified by (seed, ids...). The same
/// key always yields the same stream, independent of scheduling order.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = splitmix64(seed);
  for (const auto id : ids) h = splitmix64(h ^ splitmix64(id + 0x632BE59BD9B4E019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                    static_cast<std::uint32_t>(splitmix64(h)),
                    static_cast<std::uint32_t>(splitmix64(h) >> 32)};
  return Rng(seq);
}

// Stream domains, so different subsystems never share a stream for one seed.
enum class StreamDomain : std::uint64_t { Switch = 1, Tomography = 2, Targets = 3 };

}  // namespace qswitch
