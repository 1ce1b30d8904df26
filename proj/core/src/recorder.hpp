#pragma once

#include <chrono>

#include "zo/oracle.hpp"
#include "zo/trace.hpp"

namespace zo::detail {

/// Shared bookkeeping for solver loops: strided records, target checks and
/// the final audit of oracle calls.
class Recorder {
 public:
  Recorder(const RunControl& control, const ZerothOrderOracle& oracle)
      : control_(control),
        oracle_(oracle),
        start_calls_(oracle.calls()),
        start_(std::chrono::steady_clock::now()) {}

  std::uint64_t calls() const { return oracle_.calls() - start_calls_; }

  std::int64_t elapsed_ns() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                 start_)
        .count();
  }

  bool due(std::uint64_t k) const {
    const std::size_t stride = control_.stride == 0 ? 1 : control_.stride;
    return k % stride == 0;
  }

  void record(RunTrace& trace, std::uint64_t k, const Vector& x, const Vector* y = nullptr) {
    if (!trace.records.empty() && trace.records.back().iteration == k) return;
    TraceRecord r;
    r.iteration = k;
    r.oracle_calls = calls();
    if (control_.gap) {
      r.f_gap = control_.gap(x);
      if (y) r.f_gap_y = control_.gap(*y);
    }
    if (control_.grad_norm) r.grad_norm = control_.grad_norm(x);
    r.wall_ns = elapsed_ns();
    trace.records.push_back(r);
  }

  bool reached(const std::optional<double>& target, const Vector& x) const {
    return target && control_.gap && control_.gap(x) <= *target;
  }

  bool outside(const Vector& x) const { return control_.in_domain && !control_.in_domain(x); }

  void finish(RunTrace& trace, std::uint64_t k, const Vector& x, Status status,
              const Vector* y = nullptr) {
    record(trace, k, x, y);
    trace.x_out = x;
    trace.status = status;
    trace.iterations = k;
    trace.oracle_calls = calls();
    trace.wall_ns = elapsed_ns();
    if (control_.gap && all_finite(x)) trace.final_gap = control_.gap(x);
  }

 private:
  const RunControl& control_;
  const ZerothOrderOracle& oracle_;
  std::uint64_t start_calls_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace zo::detail
