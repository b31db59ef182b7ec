#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace quench {

// splitmix64 finalizer. Used to derive substream seeds so that every consumer
// of randomness (disorder fields, couplings, Haar states, time sampling, ...)
// draws from its own stream, all reproducible from one master seed.
std::uint64_t splitmix64(std::uint64_t x);

// Seed derivation: fold a path of integers into the master seed,
//   s = splitmix64(master); s = splitmix64(s ^ splitmix64(p)) for each p.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Substream tags. Tag values are part of the reproducibility contract.
enum class Stream : std::uint64_t {
  Fields = 1,     // on-site disorder h_i
  Couplings = 2,  // bond disorder b_i
  Haar = 3,       // Haar-random bath states
  Times = 4,      // time-sampling for validation
  States = 5,     // initial-state subsampling
  Mixed = 6,      // random mixed states in verification checks
};

std::uint64_t substream_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);

// mt19937_64 with an explicit uniform mapping and Box-Muller transform, so the
// variate stream is fixed by the seed alone and does not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log argument.
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  // Standard normal via Box-Muller; generates pairs, caches the second value.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace quench
