#include "quench/rng.hpp"

namespace quench {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t p : path) {
    s = splitmix64(s ^ splitmix64(p));
  }
  return s;
}

std::uint64_t substream_seed(std::uint64_t master, Stream stream, std::uint64_t index) {
  return derive_seed(master, {static_cast<std::uint64_t>(stream), index});
}

}  // namespace quench
