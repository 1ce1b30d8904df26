#include <cmath>
#include <cstdio>

#include "zo/estimators.hpp"
#include "zo/harness.hpp"
#include "zo/rng.hpp"
#include "zo/spectrum.hpp"

namespace zo {
namespace {

constexpr std::uint64_t kSetupStream = 0x4d56414c;  // "MVAL"

Vector random_vector(std::uint64_t seed, std::uint64_t index, std::size_t d) {
  Vector v(static_cast<Eigen::Index>(d));
  rng::fill_standard_normal(seed, kSetupStream, index, v.data(), d);
  return v;
}

// Wishart-type PSD matrix W W^T / d.
Matrix random_psd(std::uint64_t seed, std::uint64_t index, std::size_t d) {
  Matrix W(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    W.col(static_cast<Eigen::Index>(j)) = random_vector(seed, index * 1024 + j, d);
  }
  Matrix M = W * W.transpose() / static_cast<double>(d);
  return 0.5 * (M + M.transpose());
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CheckResult gated(std::string name, bool precise, bool ok, double value, double threshold,
                  std::string detail) {
  CheckResult c;
  c.name = std::move(name);
  c.status = !precise ? CheckStatus::InsufficientPrecision
                      : (ok ? CheckStatus::Pass : CheckStatus::Fail);
  c.value = value;
  c.threshold = threshold;
  c.detail = std::move(detail);
  return c;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::InsufficientPrecision: return "INSUFFICIENT_PRECISION";
  }
  return "?";
}

bool MomentValidation::passed() const {
  for (const auto& c : checks) {
    if (c.status != CheckStatus::Pass) return false;
  }
  return true;
}

MomentValidation validate_moments(std::size_t d, std::size_t n_samples, std::uint64_t seed) {
  if (d == 0 || d > 32) throw ConfigError("validate_moments: d must be in [1, 32]");
  MomentValidation out;
  const bool precise = n_samples >= kMinMomentSamples;
  const double dd = static_cast<double>(d);
  const auto n = static_cast<Eigen::Index>(d);

  // Identity metric: unbiasedness and the (d+2)||g||^2 second moment.
  {
    const Vector g = random_vector(seed, 0, d);
    const MomentReport r =
        moment_diagnostic(g, Matrix::Identity(n, n), n_samples, rng::derive_seed(seed, 1));
    const double tol = 4.0 * std::sqrt((dd + 2.0) / static_cast<double>(n_samples)) * g.norm();
    out.checks.push_back(gated("unbiased_mean", precise, r.mean_error <= tol, r.mean_error, tol,
                               fmt("||mean - g|| = %.3g, limit %.3g", r.mean_error, tol)));
    const double ratio = r.m_moment / ((dd + 2.0) * g.squaredNorm());
    out.checks.push_back(gated("second_moment_identity", precise, std::abs(ratio - 1.0) <= 0.05,
                               ratio, 0.05,
                               fmt("E||t||^2 / ((d+2)||g||^2) = %.4f, band +-%.2f", ratio, 0.05)));
  }

  // Random (g, M) pairs: tr(M) I + 2M identity and the 3 tr(M) ||g||^2 bound.
  for (std::uint64_t k = 0; k < 10; ++k) {
    const Vector g = random_vector(seed, 100 + k, d);
    const Matrix M = random_psd(seed, 200 + k, d);
    const MomentReport r = moment_diagnostic(g, M, n_samples, rng::derive_seed(seed, 10 + k));
    const std::string tag = std::to_string(k);
    out.checks.push_back(gated("mahalanobis_ratio_" + tag, precise,
                               r.m_quadratic_ratio >= 0.95 && r.m_quadratic_ratio <= 1.05,
                               r.m_quadratic_ratio, 0.05,
                               fmt("ratio %.4f (stderr %.2g)", r.m_quadratic_ratio,
                                   r.ratio_stderr)));
    out.checks.push_back(gated("trace_bound_" + tag, precise, r.m_moment <= r.trace_bound,
                               r.m_moment, r.trace_bound,
                               fmt("moment %.4g <= 3 tr(M)||g||^2 = %.4g", r.m_moment,
                                   r.trace_bound)));
  }

  // Zero gradient: every estimate is exactly zero.
  {
    const MomentReport r = moment_diagnostic(Vector::Zero(n), random_psd(seed, 300, d),
                                             std::min<std::size_t>(n_samples, 1000),
                                             rng::derive_seed(seed, 30));
    const bool ok = r.mean_error == 0.0 && r.m_moment == 0.0 && r.m_moment_exact == 0.0;
    out.checks.push_back(gated("zero_gradient", true, ok, r.m_moment, 0.0,
                               fmt("mean error %.3g, moment %.3g", r.mean_error, r.m_moment)));
  }

  // Noisy two-point estimator error against its analytic bound.
  {
    const double delta = 0.01;
    const double rho = 0.1;
    const QuadraticProblem q =
        make_quadratic(spectrum::PowerLaw{1.0, 1.0}, d, seed, true, BMode::Zero);
    const Vector x = random_vector(seed, 400, d);
    const std::size_t m = std::max<std::size_t>(1, n_samples / 10);
    for (std::uint64_t s = 0; s < 5; ++s) {
      OracleHandle noisy(q, NoiseModel{NoiseKind::UniformRandom, rng::derive_seed(seed, 40 + s)},
                         delta);
      const ErrorBoundReport r = error_bound_check(noisy, q, x, rho, Matrix::Identity(n, n), m,
                                                   rng::derive_seed(seed, 50 + s));
      out.checks.push_back(gated("error_bound_" + std::to_string(s), m >= kMinMomentSamples / 10,
                                 r.within, r.empirical, r.bound,
                                 fmt("empirical %.4g <= bound %.4g", r.empirical, r.bound)));
    }
  }
  return out;
}

}  // namespace zo
