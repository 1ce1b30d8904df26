#include "zo/rng.hpp"

#include <cmath>
#include <numbers>

namespace zo::rng {

std::uint64_t mix64(std::uint64_t z) {
  // splitmix64 finalizer
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                   std::uint64_t lane) {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  h = mix64(h ^ stream);
  h = mix64(h ^ index);
  h = mix64(h ^ lane);
  return h;
}

double uniform_open(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                    std::uint64_t lane) {
  const std::uint64_t bits = hash(seed, stream, index, lane) >> 11;  // 53 bits
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double uniform_symmetric(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                         std::uint64_t lane) {
  const std::uint64_t bits = hash(seed, stream, index, lane) >> 11;
  return static_cast<double>(bits) * (2.0 / static_cast<double>((1ULL << 53) - 1)) - 1.0;
}

double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                       std::uint64_t lane) {
  const std::uint64_t pair = lane >> 1;
  const double u1 = uniform_open(seed, stream, index, 2 * pair);
  const double u2 = uniform_open(seed, stream, index, 2 * pair + 1);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return (lane & 1U) ? radius * std::sin(angle) : radius * std::cos(angle);
}

void fill_standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                          double* out, std::size_t n) {
  for (std::size_t j = 0; j < n; j += 2) {
    const std::uint64_t pair = j >> 1;
    const double u1 = uniform_open(seed, stream, index, 2 * pair);
    const double u2 = uniform_open(seed, stream, index, 2 * pair + 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[j] = radius * std::cos(angle);
    if (j + 1 < n) out[j + 1] = radius * std::sin(angle);
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return mix64(mix64(seed) ^ mix64(salt + 0x632be59bd9b4e019ULL));
}

}  // namespace zo::rng
