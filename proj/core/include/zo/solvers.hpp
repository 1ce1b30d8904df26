#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "zo/oracle.hpp"
#include "zo/problems.hpp"
#include "zo/trace.hpp"

namespace zo {

// ---------------------------------------------------------------------------
// RG_rho

enum class StepMode { PaperTrace, Manual };

struct RgConfig {
  double rho = 1e-6;
  StepMode step_mode = StepMode::PaperTrace;
  /// tr(A); required by PaperTrace (h = 1 / (12 tr A))
  std::optional<double> trace_A;
  /// step for Manual mode
  double h = 0.0;
  std::uint64_t max_iters = 100000;
  std::optional<double> target_gap;
  std::uint64_t seed = 0;
};

double rg_step(const RgConfig& cfg);

RunTrace rg_rho(ZerothOrderOracle& o, const Vector& x0, const RgConfig& cfg,
                const RunControl& control = {});

// ---------------------------------------------------------------------------
// ZHB

inline constexpr double kDefaultZhbStepConstant = 4.0;
inline constexpr double kTheoreticalZhbStepConstant = 14400.0;

struct ZhbConfig {
  double mu = 0.0;
  /// ED_{1/2} of the Hessian (upper bound for non-quadratics)
  double ed_half = 0.0;
  /// h = 1 / (c_step ed_half)^2
  double c_step = kDefaultZhbStepConstant;
  double rho = 1e-6;
  std::uint64_t max_iters = 100000;
  std::optional<double> target_gap;
  std::uint64_t seed = 0;
  /// Independent runs; the one with the lowest oracle value at its output wins.
  std::size_t repeats = 1;
};

double zhb_step(const ZhbConfig& cfg);
/// beta = sqrt(h mu); throws ConfigError outside (0, 1).
double zhb_momentum(const ZhbConfig& cfg);

RunTrace zhb(ZerothOrderOracle& o, const Vector& x0, const ZhbConfig& cfg,
             const RunControl& control = {});

/// ZHB on g(x) = f(x) + (eps / (2 D^2)) ||x||^2 with mu = eps / D^2 and
/// ED_{1/2} raised by d sqrt(eps / D^2). cfg.mu is ignored.
RunTrace zhb_regularized(ZerothOrderOracle& o, const Vector& x0, double eps, double D,
                         ZhbConfig cfg, const RunControl& control = {});

// ---------------------------------------------------------------------------
// Inner solves for A-NPE and Cubic

struct SubsolverConfig {
  /// c_step, rho, seed and repeats are taken from here; mu, ed_half and
  /// max_iters are set per subproblem.
  ZhbConfig zhb{};
  /// Iteration budget n = ceil(rate_factor / beta * ln(log_slack * kappa / reduction)).
  double rate_factor = 4.0;
  double log_slack = 400.0;
  std::uint64_t min_iters = 50;
  std::uint64_t max_iters = 200000;
  /// asoe delta as a fraction of the subproblem tolerance
  double delta_fraction = 0.1;
  double delta_min = 1e-12;
  /// asoe probe cap, relative to the evaluated step length (infinite = none)
  double max_displacement = 1.0;
  /// inner finite-difference step sqrt(delta / (d L_sub)) instead of zhb.rho
  bool balanced_rho = true;
  bool rounding_floor = true;
};

// ---------------------------------------------------------------------------
// A-NPE

struct AnpeConfig {
  double sigma = 0.5;
  /// sigma_l = sigma_u / 2
  double sigma_u = 0.4;
  /// default sigma_l sqrt(1 - sigma^2) / (16 D H)
  std::optional<double> lambda0;
  /// default 0.5 D / N^{3/2}
  std::optional<double> eps_A;
  std::size_t N = 50;
  std::optional<double> target_gap;
  std::size_t depth_cap = 60;
  /// Floor applied to H (pure quadratics have H = 0).
  double H_floor = 1e-6;
  SubsolverConfig sub{};
};

RunTrace anpe_zo(OracleHandle& o, const Vector& x0, const ProblemMeta& meta,
                 const AnpeConfig& cfg, const RunControl& control = {});

/// a = (lambda + sqrt(lambda^2 + 4 lambda A)) / 2
double anpe_step_weight(double lambda, double A);

/// (sigma - sigma_u)^2 / (2 lambda (L lambda + 1 + (sigma - sigma_u)^2)(L + 1/lambda))
double anpe_eps_b_factor(double sigma, double sigma_u, double L, double lambda);

// ---------------------------------------------------------------------------
// Cubic

struct CubicConfig {
  double eps = 1e-2;
  /// Defaults derive from eps, H and the Delta estimate (see cubic_tolerances).
  std::optional<double> eps_C;
  std::optional<double> eps_D;
  /// Upper estimate of f(x0) - f*; default f(x0) - best value seen.
  std::optional<double> Delta;
  double r0 = 1.0;
  std::size_t max_outer = 1000;
  std::size_t depth_cap = 60;
  SubsolverConfig sub{};
};

struct CubicTolerances {
  double eps_C = 0.0;
  double eps_D = 0.0;
};

/// Largest admissible tolerances from eps, H and Delta, scaled by `margin` < 1.
CubicTolerances cubic_tolerances(double eps, double H, double Delta, double margin = 0.5);

RunTrace cubic_zo(OracleHandle& o, const Vector& x0, const ProblemMeta& meta,
                  const CubicConfig& cfg, const RunControl& control = {});

}  // namespace zo
