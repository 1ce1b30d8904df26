#pragma once

#include <cstdint>

#include "zo/problems.hpp"
#include "zo/types.hpp"

namespace zo {

/// Function-value oracle as seen by solvers.
class ZerothOrderOracle {
 public:
  virtual ~ZerothOrderOracle() = default;
  virtual std::size_t dim() const = 0;
  virtual double query(const Vector& x) = 0;
  /// Queries issued against the underlying objective so far.
  virtual std::uint64_t calls() const = 0;
  /// Worst-case |returned - true| for one query.
  virtual double noise_bound() const = 0;
};

enum class NoiseKind { None, UniformRandom, DeterministicHash };

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  std::uint64_t seed = 0;
};

/// Counting oracle over a Problem with optional bounded noise:
/// UniformRandom draws delta*U[-1,1] per call, DeterministicHash returns
/// delta*s(x) with s a fixed hash of the query point.
class OracleHandle final : public ZerothOrderOracle {
 public:
  explicit OracleHandle(const Problem& problem, NoiseModel noise = {}, double delta = 0.0);

  std::size_t dim() const override { return problem_->dim(); }
  double query(const Vector& x) override;
  std::uint64_t calls() const override { return calls_; }
  double noise_bound() const override { return exact() ? 0.0 : delta_; }

  bool exact() const { return noise_.kind == NoiseKind::None || delta_ == 0.0; }
  const NoiseModel& noise() const { return noise_; }
  double delta() const { return delta_; }

  /// Ground truth for the harness (stopping and certification); never
  /// handed to solvers.
  const Problem& problem() const { return *problem_; }

 private:
  const Problem* problem_;
  NoiseModel noise_;
  double delta_;
  std::uint64_t calls_ = 0;
};

/// Deterministic per-point sign in [-1, 1] used by DeterministicHash noise.
double point_hash_unit(const Vector& x, std::uint64_t seed);

struct AsoeOptions {
  /// Caps every query displacement from x at max_displacement * ||y - x||.
  /// The requested delta is shrunk (never grown) to meet the cap, which
  /// keeps probes of tiny steps inside the region where H is certified.
  /// Infinite = no cap.
  double max_displacement = std::numeric_limits<double>::infinity();
};

/// delta-accurate value of the second-order Taylor model f_x(y) from four
/// function values (one when y == x). Requires an exact oracle.
double asoe(OracleHandle& o, double L, double H, const Vector& x, const Vector& y, double delta,
            const AsoeOptions& opts = {});

/// Forward differences with rho = 2 eps_A / (d L); d+1 queries.
Vector approximate_gradient(OracleHandle& o, double L, const Vector& x, double eps_A);

struct TraceEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

/// Mean of Gaussian second differences (f(x+rho xi) - 2f(x) + f(x-rho xi))/rho^2;
/// 2n+1 queries.
TraceEstimate trace_estimate(OracleHandle& o, const Vector& x, double rho, std::size_t n_samples,
                             std::uint64_t seed);

/// Oracle for the subproblem  y -> f_c(y) + (w/2)||y - c||^2  where f_c is
/// the Taylor model of the objective at c, evaluated through asoe.
class TaylorModelOracle final : public ZerothOrderOracle {
 public:
  struct Params {
    double L = 1.0;
    double H = 1.0;
    double delta = 1e-8;
    double prox_weight = 0.0;
    /// Raise delta where rounding in the four-point combination would
    /// otherwise exceed it; see asoe_rounding_floor.
    bool rounding_floor = true;
    /// Magnitude of f near the center, for the rounding floor.
    double value_scale = 1.0;
    AsoeOptions asoe;
  };

  TaylorModelOracle(OracleHandle& base, Vector center, Params params);

  std::size_t dim() const override { return base_->dim(); }
  double query(const Vector& y) override;
  std::uint64_t calls() const override { return base_->calls() - start_calls_; }
  double noise_bound() const override { return max_delta_used_; }

  const Vector& center() const { return center_; }

 private:
  OracleHandle* base_;
  Vector center_;
  Params params_;
  std::uint64_t start_calls_;
  double max_delta_used_;
};

/// Smallest delta at which asoe's truncation error dominates double
/// rounding of the function values, for displacement r at value scale |f|.
double asoe_rounding_floor(double L, double H, double r, double f_scale);

/// g(x) = f(x) + (c/2)||x||^2 with the quadratic term added locally (no queries).
class RegularizedOracle final : public ZerothOrderOracle {
 public:
  RegularizedOracle(ZerothOrderOracle& base, double coefficient);

  std::size_t dim() const override { return base_->dim(); }
  double query(const Vector& x) override;
  std::uint64_t calls() const override { return base_->calls(); }
  double noise_bound() const override { return base_->noise_bound(); }
  double coefficient() const { return coeff_; }

 private:
  ZerothOrderOracle* base_;
  double coeff_;
};

}  // namespace zo
