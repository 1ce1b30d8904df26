#include "zo/oracle.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "zo/rng.hpp"

namespace zo {
namespace {

constexpr std::uint64_t kNoiseStream = 0x4e4f4953;  // "NOIS"
constexpr std::uint64_t kTraceStream = 0x54524345;  // "TRCE"

void require_exact(const OracleHandle& o, const char* what) {
  if (!o.exact()) {
    throw UnsupportedError(std::string(what) + " requires a noise-free oracle");
  }
}

void require_finite_value(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericalError(std::string(what) + ": non-finite value");
}

}  // namespace

double point_hash_unit(const Vector& x, std::uint64_t seed) {
  std::uint64_t h = rng::mix64(seed ^ 0x9e3779b97f4a7c15ULL);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    // +0.0 folds -0.0 onto +0.0 so equal points hash equally.
    h = rng::mix64(h ^ std::bit_cast<std::uint64_t>(x[i] + 0.0));
  }
  const std::uint64_t bits = h >> 11;
  return static_cast<double>(bits) * (2.0 / static_cast<double>((1ULL << 53) - 1)) - 1.0;
}

// ---------------------------------------------------------------------------

OracleHandle::OracleHandle(const Problem& problem, NoiseModel noise, double delta)
    : problem_(&problem), noise_(noise), delta_(delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ConfigError("oracle: delta must be finite and non-negative");
  }
}

double OracleHandle::query(const Vector& x) {
  require_dim(x, dim(), "oracle query");
  if (!all_finite(x)) throw NumericalError("oracle query: non-finite point");
  const std::uint64_t index = calls_++;
  const double f = problem_->value(x);
  switch (noise_.kind) {
    case NoiseKind::None:
      return f;
    case NoiseKind::UniformRandom:
      return f + delta_ * rng::uniform_symmetric(noise_.seed, kNoiseStream, index, 0);
    case NoiseKind::DeterministicHash:
      return f + delta_ * point_hash_unit(x, noise_.seed);
  }
  return f;
}

// ---------------------------------------------------------------------------

double asoe(OracleHandle& o, double L, double H, const Vector& x, const Vector& y, double delta,
            const AsoeOptions& opts) {
  require_exact(o, "asoe");
  require_dim(x, o.dim(), "asoe");
  require_dim(y, o.dim(), "asoe");
  if (!(L > 0.0) || !(H > 0.0)) throw ConfigError("asoe: L and H must be positive");
  if (!(delta > 0.0)) throw ConfigError("asoe: delta must be positive");

  const Vector s = y - x;
  const double r = s.norm();
  if (r == 0.0) return o.query(x);

  const double r2 = r * r;
  double d_eff = delta;
  if (std::isfinite(opts.max_displacement)) {
    d_eff = std::min({d_eff, L * r2 * opts.max_displacement,
                      2.0 * H * r2 * r * opts.max_displacement});
  }
  const double t1 = d_eff / (L * r2);
  const double t2 = d_eff / (2.0 * H * r2 * r);

  const double f0 = o.query(x);
  const double f1 = o.query(x + t1 * s);
  const double fp = o.query(x + t2 * s);
  const double fm = o.query(x - t2 * s);

  const double w1 = L * r2 / d_eff;
  const double w2 = 2.0 * H * H * r2 * r2 * r2 / (d_eff * d_eff);
  const double out = f0 + w1 * (f1 - f0) + w2 * ((fp - f0) + (fm - f0));
  require_finite_value(out, "asoe");
  return out;
}

double asoe_rounding_floor(double L, double H, double r, double f_scale) {
  if (r == 0.0) return 0.0;
  const double u = 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, f_scale);
  const double r2 = r * r;
  const double first = std::sqrt(4.0 * L * r2 * u);
  const double second = std::cbrt(16.0 * H * H * r2 * r2 * r2 * u);
  return std::max(first, second);
}

Vector approximate_gradient(OracleHandle& o, double L, const Vector& x, double eps_A) {
  require_exact(o, "approximate_gradient");
  require_dim(x, o.dim(), "approximate_gradient");
  if (!(L > 0.0) || !(eps_A > 0.0)) {
    throw ConfigError("approximate_gradient: L and eps_A must be positive");
  }
  const auto d = static_cast<Eigen::Index>(o.dim());
  const double rho = 2.0 * eps_A / (static_cast<double>(d) * L);
  const double f0 = o.query(x);
  Vector v(d);
  Vector probe = x;
  for (Eigen::Index i = 0; i < d; ++i) {
    probe[i] = x[i] + rho;
    v[i] = (o.query(probe) - f0) / rho;
    probe[i] = x[i];
  }
  if (!all_finite(v)) throw NumericalError("approximate_gradient: non-finite result");
  return v;
}

TraceEstimate trace_estimate(OracleHandle& o, const Vector& x, double rho, std::size_t n_samples,
                             std::uint64_t seed) {
  require_exact(o, "trace_estimate");
  require_dim(x, o.dim(), "trace_estimate");
  if (n_samples == 0) throw ConfigError("trace_estimate: n_samples must be positive");
  if (!(rho > 0.0)) throw ConfigError("trace_estimate: rho must be positive");

  const std::size_t d = o.dim();
  const double f0 = o.query(x);
  Vector xi(static_cast<Eigen::Index>(d));
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    rng::fill_standard_normal(seed, kTraceStream, k, xi.data(), d);
    const double fp = o.query(x + rho * xi);
    const double fm = o.query(x - rho * xi);
    const double sample = ((fp - f0) + (fm - f0)) / (rho * rho);
    const double delta = sample - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (sample - mean);
  }
  TraceEstimate out;
  out.value = mean;
  out.samples = n_samples;
  out.stderr_ = n_samples > 1
                    ? std::sqrt(m2 / static_cast<double>(n_samples - 1) /
                                static_cast<double>(n_samples))
                    : std::numeric_limits<double>::infinity();
  return out;
}

// ---------------------------------------------------------------------------

TaylorModelOracle::TaylorModelOracle(OracleHandle& base, Vector center, Params params)
    : base_(&base),
      center_(std::move(center)),
      params_(params),
      start_calls_(base.calls()),
      max_delta_used_(params.delta) {
  require_exact(base, "TaylorModelOracle");
  require_dim(center_, base.dim(), "TaylorModelOracle center");
  if (!(params_.delta > 0.0)) throw ConfigError("TaylorModelOracle: delta must be positive");
  if (!(params_.prox_weight >= 0.0)) {
    throw ConfigError("TaylorModelOracle: prox weight must be non-negative");
  }
}

double TaylorModelOracle::query(const Vector& y) {
  require_dim(y, dim(), "TaylorModelOracle query");
  if (!all_finite(y)) throw NumericalError("TaylorModelOracle query: non-finite point");
  const double r = (y - center_).norm();
  double delta = params_.delta;
  if (params_.rounding_floor && r > 0.0) {
    delta = std::max(delta, asoe_rounding_floor(params_.L, params_.H, r, params_.value_scale));
  }
  max_delta_used_ = std::max(max_delta_used_, delta);
  const double model = asoe(*base_, params_.L, params_.H, center_, y, delta, params_.asoe);
  return model + 0.5 * params_.prox_weight * r * r;
}

RegularizedOracle::RegularizedOracle(ZerothOrderOracle& base, double coefficient)
    : base_(&base), coeff_(coefficient) {
  if (!(coefficient >= 0.0) || !std::isfinite(coefficient)) {
    throw ConfigError("RegularizedOracle: coefficient must be finite and non-negative");
  }
}

double RegularizedOracle::query(const Vector& x) {
  return base_->query(x) + 0.5 * coeff_ * x.squaredNorm();
}

}  // namespace zo
