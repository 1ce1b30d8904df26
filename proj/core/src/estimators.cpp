#include "zo/estimators.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "zo/rng.hpp"

namespace zo {
namespace {

constexpr std::uint64_t kMomentStream = 0x4d4f4d;  // "MOM"
constexpr std::uint64_t kErrorStream = 0x455252;   // "ERR"
constexpr std::size_t kDiagnosticDimCap = 32;

// Welford accumulator.
struct Running {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  double stderr_of_mean() const {
    if (n < 2) return std::numeric_limits<double>::infinity();
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

}  // namespace

Vector DirectionSampler::draw(std::uint64_t index, std::size_t d) const {
  Vector xi(static_cast<Eigen::Index>(d));
  rng::fill_standard_normal(seed_, stream_, index, xi.data(), d);
  return xi;
}

void DirectionSampler::draw_into(std::uint64_t index, Vector& out) const {
  rng::fill_standard_normal(seed_, stream_, index, out.data(), static_cast<std::size_t>(out.size()));
}

Vector tilde_grad(const Vector& grad, const Vector& xi) {
  if (grad.size() != xi.size()) throw DimensionError("tilde_grad: dimension mismatch");
  return grad.dot(xi) * xi;
}

GradientEstimate hat_grad_rho(ZerothOrderOracle& o, const Vector& x, double rho, const Vector& xi) {
  if (!(rho > 0.0)) throw ConfigError("hat_grad_rho: rho must be positive");
  require_dim(xi, o.dim(), "hat_grad_rho direction");
  const double f0 = o.query(x);
  const double f1 = o.query(x + rho * xi);
  if (!std::isfinite(f0) || !std::isfinite(f1)) {
    throw NumericalError("hat_grad_rho: non-finite oracle value");
  }
  GradientEstimate out;
  out.vector = ((f1 - f0) / rho) * xi;
  out.direction = xi;
  out.queries_used = 2;
  return out;
}

void require_psd(const Matrix& M, const char* what) {
  if (M.rows() != M.cols()) throw DimensionError(std::string(what) + ": matrix must be square");
  if (!M.isApprox(M.transpose(), 1e-12)) {
    throw ConfigError(std::string(what) + ": matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(M, Eigen::EigenvaluesOnly);
  if (M.rows() > 0 && solver.eigenvalues().minCoeff() < -1e-10) {
    throw ConfigError(std::string(what) + ": matrix is not positive semidefinite");
  }
}

MomentReport moment_diagnostic(const Vector& grad, const Matrix& M, std::size_t n_samples,
                               std::uint64_t seed) {
  const auto d = static_cast<std::size_t>(grad.size());
  if (d == 0 || d > kDiagnosticDimCap) {
    throw ConfigError("moment_diagnostic: dimension must be in [1, 32]");
  }
  if (static_cast<std::size_t>(M.rows()) != d) {
    throw DimensionError("moment_diagnostic: M does not match grad");
  }
  require_psd(M, "moment_diagnostic");
  if (n_samples == 0) throw ConfigError("moment_diagnostic: n_samples must be positive");

  const DirectionSampler sampler(seed, kMomentStream);
  Vector xi(static_cast<Eigen::Index>(d));
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(d));
  Vector sumsq = Vector::Zero(static_cast<Eigen::Index>(d));
  Running moment;
  for (std::size_t k = 0; k < n_samples; ++k) {
    sampler.draw_into(k, xi);
    const double c = grad.dot(xi);
    const Vector t = c * xi;
    sum += t;
    sumsq += t.cwiseAbs2();
    moment.add(t.dot(M * t));
  }

  MomentReport out;
  out.samples = n_samples;
  out.precise = n_samples >= kMinMomentSamples;
  const double n = static_cast<double>(n_samples);
  const Vector mean = sum / n;
  out.mean_error = (mean - grad).norm();
  const Vector var = (sumsq / n - mean.cwiseAbs2()).cwiseMax(0.0);
  out.mean_error_stderr = std::sqrt(var.sum() / n);
  out.m_moment = moment.mean;
  out.m_moment_stderr = moment.stderr_of_mean();
  const double trM = M.trace();
  out.m_moment_exact = trM * grad.squaredNorm() + 2.0 * grad.dot(M * grad);
  if (out.m_moment_exact > 0.0) {
    out.m_quadratic_ratio = out.m_moment / out.m_moment_exact;
    out.ratio_stderr = out.m_moment_stderr / out.m_moment_exact;
  } else {
    out.m_quadratic_ratio = out.m_moment == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    out.ratio_stderr = 0.0;
  }
  out.trace_bound = 3.0 * trM * grad.squaredNorm();
  return out;
}

ErrorBoundReport error_bound_check(OracleHandle& noisy, const QuadraticProblem& p, const Vector& x,
                                   double rho, const Matrix& B, std::size_t n_samples,
                                   std::uint64_t seed) {
  const std::size_t d = p.dim();
  if (d > kDiagnosticDimCap) throw ConfigError("error_bound_check: dimension above 32");
  if (noisy.dim() != d || static_cast<std::size_t>(B.rows()) != d) {
    throw DimensionError("error_bound_check: dimension mismatch");
  }
  require_psd(B, "error_bound_check");
  if (n_samples == 0) throw ConfigError("error_bound_check: n_samples must be positive");

  const Vector g = p.gradient(x);
  const DirectionSampler sampler(seed, kErrorStream);
  Vector xi(static_cast<Eigen::Index>(d));
  Running acc;
  for (std::size_t k = 0; k < n_samples; ++k) {
    sampler.draw_into(k, xi);
    const Vector diff = hat_grad_rho(noisy, x, rho, xi).vector - tilde_grad(g, xi);
    acc.add(diff.dot(B * diff));
  }
  ErrorBoundReport out;
  out.samples = n_samples;
  out.empirical = acc.mean;
  out.empirical_stderr = acc.stderr_of_mean();
  const double delta = noisy.noise_bound();
  const double trA = p.trace();
  const double trB = B.trace();
  out.bound = 8.0 * delta * delta / (rho * rho) * trB + 7.5 * rho * rho * trA * trA * trB;
  out.within = out.empirical <= out.bound;
  return out;
}

}  // namespace zo
