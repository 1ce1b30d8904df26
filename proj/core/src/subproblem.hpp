#pragma once

#include <cstdint>
#include <limits>

#include "zo/oracle.hpp"
#include "zo/solvers.hpp"

namespace zo::detail {

/// min_y f_c(y) + (w/2)||y - c||^2 solved by ZHB over a TaylorModelOracle.
struct TaylorSubproblem {
  Vector center;
  double prox_weight = 0.0;
  /// constants of the outer objective, passed to asoe
  double L = 0.0;
  double H = 0.0;
  /// assumed strong convexity / smoothness of the subproblem
  double mu_sub = 0.0;
  double L_sub = 0.0;
  double ed_half = 0.0;
  /// target suboptimality
  double tol = 0.0;
  /// estimate of the initial suboptimality at the center
  double initial_gap = 0.0;
  double value_scale = 1.0;
  /// abort once ||y - c|| exceeds this
  double escape_radius = std::numeric_limits<double>::infinity();
};

struct SubproblemResult {
  Vector y;
  std::uint64_t iterations = 0;
  std::uint64_t budget = 0;
  bool escaped = false;
  bool diverged = false;
  double delta = 0.0;
};

std::uint64_t subproblem_budget(double beta, double kappa, double reduction,
                                const SubsolverConfig& cfg);

SubproblemResult solve_subproblem(OracleHandle& o, const TaylorSubproblem& sp,
                                  const SubsolverConfig& cfg, std::uint64_t seed);

}  // namespace zo::detail
