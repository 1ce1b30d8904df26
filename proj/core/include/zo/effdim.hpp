#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zo/spectrum.hpp"

namespace zo {

/// ED_alpha = sum_i sigma_i^alpha.
double ed_exact(const std::vector<double>& eigenvalues, double alpha);

/// Closed-form bound on ED_alpha for sigma_i <= C / i^beta.
double ed_powerlaw_bound(double C, double beta, double alpha, std::size_t d);

struct RidgeBound {
  /// (L0 R)^alpha, times d^(1-alpha) when alpha < 1
  double paper = 0.0;
  /// same with R replaced by the mean squared row norm
  double corrected = 0.0;
};

RidgeBound ed_ridge_bound(double L0, double R, double alpha, std::size_t d,
                          std::optional<double> mean_sq_norm = std::nullopt);

/// alpha * r1 * r2, a bound on the Hessian trace of the two-layer form.
double nn_trace_bound(double act_curv_alpha, double r1, double r2);

struct EffDimReport {
  double alpha = 0.0;
  std::optional<double> exact;
  std::vector<std::pair<std::string, double>> bounds;
};

/// Exact value from the realized spectrum plus the power-law bound where the
/// generator is a pure power law.
EffDimReport effdim_report(const SpectrumSpec& spec, std::size_t d, double alpha);

}  // namespace zo
