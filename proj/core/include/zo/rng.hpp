#pragma once

#include <cstddef>
#include <cstdint>

namespace zo::rng {

// Counter-based random numbers: every value is a pure function of its
// (seed, stream, index, lane) coordinates, so results never depend on the
// order in which runs are scheduled.

std::uint64_t mix64(std::uint64_t z);

std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                   std::uint64_t lane);

/// Uniform in the open interval (0, 1).
double uniform_open(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                    std::uint64_t lane);

/// Uniform in [-1, 1].
double uniform_symmetric(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                         std::uint64_t lane);

/// Standard normal sample; lanes 2k and 2k+1 share one Box-Muller pair.
double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                       std::uint64_t lane);

/// Fill out[0..n) with standard normals for counter `index`; same values as
/// standard_normal(seed, stream, index, j) for each j, computed pairwise.
void fill_standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                          double* out, std::size_t n);

/// Derive an independent seed for a sub-run (cell, repeat, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace zo::rng
