#include "zo/effdim.hpp"

#include <cmath>

#include "zo/types.hpp"

namespace zo {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
}

// (scale)^alpha, times d^(1-alpha) below alpha = 1.
double schatten_bound(double scale, double alpha, std::size_t d) {
  const double base = std::pow(scale, alpha);
  return alpha < 1.0 ? base * std::pow(static_cast<double>(d), 1.0 - alpha) : base;
}

}  // namespace

double ed_exact(const std::vector<double>& eigenvalues, double alpha) {
  require_positive(alpha, "ed_exact: alpha");
  double sum = 0.0;
  for (double s : eigenvalues) {
    if (s < 0.0) throw ConfigError("ed_exact: eigenvalues must be non-negative");
    sum += std::pow(s, alpha);
  }
  return sum;
}

double ed_powerlaw_bound(double C, double beta, double alpha, std::size_t d) {
  require_positive(C, "ed_powerlaw_bound: C");
  require_positive(beta, "ed_powerlaw_bound: beta");
  require_positive(alpha, "ed_powerlaw_bound: alpha");
  const double ab = alpha * beta;
  const double ca = std::pow(C, alpha);
  if (std::abs(ab - 1.0) <= 1e-12) return ca * std::log(2.0 * static_cast<double>(d) + 1.0);
  if (ab > 1.0) return std::pow(2.0, ab - 1.0) * ca / (ab - 1.0);
  return ca * std::pow(static_cast<double>(d) + 1.0, 1.0 - ab) / (1.0 - ab);
}

RidgeBound ed_ridge_bound(double L0, double R, double alpha, std::size_t d,
                          std::optional<double> mean_sq_norm) {
  require_positive(L0, "ed_ridge_bound: L0");
  require_positive(R, "ed_ridge_bound: R");
  require_positive(alpha, "ed_ridge_bound: alpha");
  const double m = mean_sq_norm.value_or(R * R);
  if (m < 0.0) throw ConfigError("ed_ridge_bound: mean squared norm must be non-negative");
  return {schatten_bound(L0 * R, alpha, d), schatten_bound(L0 * m, alpha, d)};
}

double nn_trace_bound(double act_curv_alpha, double r1, double r2) {
  require_positive(act_curv_alpha, "nn_trace_bound: alpha");
  require_positive(r1, "nn_trace_bound: r1");
  require_positive(r2, "nn_trace_bound: r2");
  return act_curv_alpha * r1 * r2;
}

EffDimReport effdim_report(const SpectrumSpec& spec, std::size_t d, double alpha) {
  EffDimReport out;
  out.alpha = alpha;
  out.exact = ed_exact(realize(spec, d), alpha);
  if (const auto* p = std::get_if<spectrum::PowerLaw>(&spec)) {
    out.bounds.emplace_back("powerlaw", ed_powerlaw_bound(p->C, p->beta, alpha, d));
  }
  return out;
}

}  // namespace zo
