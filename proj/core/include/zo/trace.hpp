#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "zo/types.hpp"

namespace zo {

enum class Status { TargetReached, MaxIters, Diverged, LeftDomain };

std::string to_string(Status s);
Status parse_status(const std::string& s);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct TraceRecord {
  std::uint64_t iteration = 0;
  std::uint64_t oracle_calls = 0;
  double f_gap = kNaN;
  /// gap at the extrapolated point (ZHB), NaN elsewhere
  double f_gap_y = kNaN;
  double grad_norm = kNaN;
  std::int64_t wall_ns = 0;
};

/// One accepted outer step of A-NPE (lambda, a, A) or Cubic (lambda = r).
struct OuterRecord {
  std::uint64_t step = 0;
  std::uint64_t oracle_calls = 0;
  double lambda = kNaN;
  double a = kNaN;
  double A = kNaN;
  /// Subproblem solves spent in the search.
  std::size_t depth = 0;
  /// lambda ||y - x~|| for A-NPE, ||y - x|| for Cubic
  double bracket_value = kNaN;
  double bracket_lo = kNaN;
  double bracket_hi = kNaN;
  bool bracket_ok = false;
  std::uint64_t inner_iterations = 0;
  /// Ground-truth gap at the new iterate (filled when a gap callback exists).
  double f_gap = kNaN;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  std::vector<OuterRecord> outer;
  Vector x_out;
  Status status = Status::MaxIters;
  std::uint64_t iterations = 0;
  std::uint64_t oracle_calls = 0;
  std::int64_t wall_ns = 0;
  /// Ground-truth gap at x_out when a gap callback was supplied.
  std::optional<double> final_gap;
  /// Oracle value at x_out used to pick among repeats (NaN when not queried).
  double reported_value = kNaN;
};

/// Harness hooks. Ground-truth callbacks never touch the oracle, so stopping
/// and recording leave query counts unchanged.
struct RunControl {
  /// f(x) - f*
  std::function<double(const Vector&)> gap;
  /// ||grad f(x)||, recorded only
  std::function<double(const Vector&)> grad_norm;
  /// false aborts the run with LeftDomain
  std::function<bool(const Vector&)> in_domain;
  /// Replaces the sampler's k-th direction (replay tests).
  std::function<Vector(std::uint64_t)> direction;
  std::size_t stride = 100;
};

}  // namespace zo
