#pragma once

#include <cmath>
#include <cstdint>

namespace sparsene {

// Finalizer from the splitmix64 generator; also used as a standalone mixer
// for deriving independent stream seeds and counter-based draws.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Combine a seed with a stream tag into a new seed. Distinct tags give
// decorrelated splitmix64 streams.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (tag + 1));
}

// Small deterministic PRNG (splitmix64). Not cryptographic; chosen for
// reproducibility across platforms and trivially splittable streams, which
// keeps multithreaded sampling results independent of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix64(z);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log() argument.
  double next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform index in [0, n). Multiply-shift map of a 64-bit draw; the
  // range bias is at most n / 2^64, far below anything observable here.
  std::uint64_t next_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Counter-based standard normal draw: element `index` of the virtual
// random matrix identified by (seed, tag). Stateless, so the value is
// independent of evaluation order and thread count.
inline double gaussian_at(std::uint64_t seed, std::uint64_t tag,
                          std::uint64_t index) {
  const std::uint64_t key = mix64(seed ^ mix64(tag + 0x9e3779b97f4a7c15ULL));
  const std::uint64_t a = mix64(key + 2 * index + 1);
  const std::uint64_t b = mix64(key + 2 * index + 2);
  const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;        // [0,1)
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace sparsene
