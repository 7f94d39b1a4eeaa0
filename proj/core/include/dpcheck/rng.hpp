#ifndef DPCHECK_RNG_HPP
#define DPCHECK_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dpcheck {

// splitmix64 finalizer; used to mix (seed, stream tags) into engine seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic uniform generator. All sampling in this library goes through
// inverse CDFs over uniform(0,1) draws from this class, never through
// std::*_distribution, so streams are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Derive an independent generator from a master seed and a list of stream
  // tags (e.g. {kind, draw index, attempt}). Same tags, same stream.
  static Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t t : tags) h = mix64(h ^ mix64(t));
    return Rng(h);
  }

  // Uniform on the open interval (0,1).
  double uniform() {
    const std::uint64_t bits = engine_() >> 11;  // top 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Multiplicative range reduction; bias is < n / 2^64, irrelevant here.
    const unsigned __int128 wide = static_cast<unsigned __int128>(engine_()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dpcheck

#endif
