#pragma once

#include <cstdint>

#include "zo/oracle.hpp"
#include "zo/types.hpp"

namespace zo {

/// Counter-based source of xi ~ N(0, I_d): draw(k) depends only on
/// (seed, stream, k).
class DirectionSampler {
 public:
  DirectionSampler(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  Vector draw(std::uint64_t index, std::size_t d) const;
  void draw_into(std::uint64_t index, Vector& out) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

struct GradientEstimate {
  Vector vector;
  Vector direction;
  std::uint64_t queries_used = 0;
};

/// <grad, xi> xi
Vector tilde_grad(const Vector& grad, const Vector& xi);

/// ((f(x + rho xi) - f(x)) / rho) xi from two queries.
GradientEstimate hat_grad_rho(ZerothOrderOracle& o, const Vector& x, double rho, const Vector& xi);

/// Below this many samples Monte Carlo reports are flagged imprecise.
inline constexpr std::size_t kMinMomentSamples = 10000;

struct MomentReport {
  std::size_t samples = 0;
  bool precise = false;
  /// ||mean of tilde estimates - grad||
  double mean_error = 0.0;
  /// per-coordinate standard error of the mean, aggregated over coordinates
  double mean_error_stderr = 0.0;
  /// mean ||tilde||_M^2
  double m_moment = 0.0;
  double m_moment_stderr = 0.0;
  /// grad^T (tr(M) I + 2M) grad
  double m_moment_exact = 0.0;
  double m_quadratic_ratio = 0.0;
  double ratio_stderr = 0.0;
  /// 3 tr(M) ||grad||^2
  double trace_bound = 0.0;
};

MomentReport moment_diagnostic(const Vector& grad, const Matrix& M, std::size_t n_samples,
                               std::uint64_t seed);

struct ErrorBoundReport {
  std::size_t samples = 0;
  double empirical = 0.0;
  double empirical_stderr = 0.0;
  /// (8 delta^2 / rho^2) tr(B) + (15 rho^2 / 2) tr(A)^2 tr(B)
  double bound = 0.0;
  bool within = false;
};

/// Mean of ||hat_rho(noisy) - tilde||_B^2 with a shared xi per sample.
ErrorBoundReport error_bound_check(OracleHandle& noisy, const QuadraticProblem& p, const Vector& x,
                                   double rho, const Matrix& B, std::size_t n_samples,
                                   std::uint64_t seed);

/// Throws ConfigError unless M is symmetric with eigenvalues >= -1e-10.
void require_psd(const Matrix& M, const char* what);

}  // namespace zo
