#include "zo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "zo/rng.hpp"

namespace zo {
namespace {

constexpr std::uint64_t kRotationSalt = 0x524f54;  // "ROT"
constexpr std::uint64_t kLinearSalt = 0x4c494e;    // "LIN"
constexpr std::uint64_t kRidgeSalt = 0x524944;     // "RID"

Vector gaussian_vector(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                       std::size_t d) {
  Vector v(static_cast<Eigen::Index>(d));
  rng::fill_standard_normal(seed, stream, index, v.data(), d);
  return v;
}

double symmetric_min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double symmetric_max_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------
// HouseholderRotation

HouseholderRotation::HouseholderRotation(std::size_t d, std::size_t reflectors,
                                         std::uint64_t seed) {
  normals_.reserve(reflectors);
  for (std::size_t j = 0; j < reflectors; ++j) {
    Vector u = gaussian_vector(seed, kRotationSalt, j, d);
    const double n = u.norm();
    if (n == 0.0) continue;
    normals_.push_back(u / n);
  }
}

Vector HouseholderRotation::apply(const Vector& z) const {
  Vector x = z;
  for (auto it = normals_.rbegin(); it != normals_.rend(); ++it) {
    x -= (2.0 * it->dot(x)) * (*it);
  }
  return x;
}

Vector HouseholderRotation::apply_transpose(const Vector& x) const {
  Vector z = x;
  for (const auto& u : normals_) z -= (2.0 * u.dot(z)) * u;
  return z;
}

Matrix HouseholderRotation::dense(std::size_t d) const {
  Matrix q = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index c = 0; c < q.cols(); ++c) q.col(c) = apply(q.col(c));
  return q;
}

// ---------------------------------------------------------------------------
// Problem

Matrix Problem::hessian(const Vector& x) const {
  const auto d = static_cast<Eigen::Index>(dim());
  Matrix h(d, d);
  Vector e = Vector::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    e[j] = 1.0;
    h.col(j) = hessian_apply(x, e);
    e[j] = 0.0;
  }
  return 0.5 * (h + h.transpose());
}

// ---------------------------------------------------------------------------
// QuadraticProblem

QuadraticProblem::QuadraticProblem(std::vector<double> eigenvalues, HouseholderRotation rotation,
                                   Vector b)
    : eigenvalues_(std::move(eigenvalues)), rotation_(std::move(rotation)), b_(std::move(b)) {
  if (eigenvalues_.empty()) throw ConfigError("quadratic: empty spectrum");
  require_dim(b_, eigenvalues_.size(), "quadratic linear term");
  for (std::size_t i = 0; i < eigenvalues_.size(); ++i) {
    if (eigenvalues_[i] < 0.0 || (i > 0 && eigenvalues_[i] > eigenvalues_[i - 1])) {
      throw ConfigError("quadratic: eigenvalues must be non-negative and non-increasing");
    }
  }
  lambda_ = Eigen::Map<const Vector>(eigenvalues_.data(),
                                     static_cast<Eigen::Index>(eigenvalues_.size()));
}

double QuadraticProblem::value(const Vector& x) const {
  require_dim(x, dim(), "quadratic evaluate");
  const Vector z = rotation_.apply_transpose(x);
  return 0.5 * (lambda_.array() * z.array().square()).sum() + b_.dot(x);
}

Vector QuadraticProblem::gradient(const Vector& x) const {
  require_dim(x, dim(), "quadratic gradient");
  const Vector z = rotation_.apply_transpose(x);
  return rotation_.apply(lambda_.cwiseProduct(z)) + b_;
}

Vector QuadraticProblem::hessian_apply(const Vector& x, const Vector& v) const {
  require_dim(x, dim(), "quadratic hessian");
  require_dim(v, dim(), "quadratic hessian");
  return rotation_.apply(lambda_.cwiseProduct(rotation_.apply_transpose(v)));
}

Matrix QuadraticProblem::hessian(const Vector& x) const {
  require_dim(x, dim(), "quadratic hessian");
  return dense_matrix();
}

double QuadraticProblem::trace() const {
  return std::accumulate(eigenvalues_.begin(), eigenvalues_.end(), 0.0);
}

Matrix QuadraticProblem::dense_matrix() const {
  const Matrix q = rotation_.dense(dim());
  return q * lambda_.asDiagonal() * q.transpose();
}

std::optional<double> QuadraticProblem::optimal_value() const {
  const Vector c = rotation_.apply_transpose(b_);
  double f_star = 0.0;
  const double tol = 1e-14 * std::max(1.0, b_.norm());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (lambda_[i] > 0.0) {
      f_star -= 0.5 * c[i] * c[i] / lambda_[i];
    } else if (std::abs(c[i]) > tol) {
      return std::nullopt;  // unbounded below
    }
  }
  return f_star;
}

ProblemMeta QuadraticProblem::meta(const Vector& x0) const {
  ProblemMeta m;
  m.mu = mu();
  m.L = L();
  m.H = 0.0;
  const auto f_star = optimal_value();
  m.Delta = f_star ? value(x0) - *f_star : std::numeric_limits<double>::infinity();
  m.D = (m.mu > 0.0) ? std::sqrt(2.0 * m.Delta / m.mu) : std::numeric_limits<double>::infinity();
  return m;
}

QuadraticProblem make_quadratic(const SpectrumSpec& spec, std::size_t d, std::uint64_t seed,
                                bool rotate, BMode b_mode, std::size_t reflectors) {
  auto eigs = realize(spec, d);
  HouseholderRotation rotation = rotate ? HouseholderRotation(d, reflectors, seed)
                                        : HouseholderRotation();
  Vector b = Vector::Zero(static_cast<Eigen::Index>(d));
  if (b_mode == BMode::RandomUnit) {
    b = gaussian_vector(seed, kLinearSalt, 0, d);
    b /= b.norm();
  }
  return QuadraticProblem(std::move(eigs), std::move(rotation), std::move(b));
}

QuadraticOptimum optimum(const QuadraticProblem& p) {
  if (!(p.mu() > 0.0)) {
    throw UnsupportedError("optimum: closed form requires a positive smallest eigenvalue");
  }
  const auto& eigs = p.eigenvalues();
  const Vector c = p.rotation().apply_transpose(p.linear_term());
  Vector z(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) z[i] = -c[i] / eigs[static_cast<std::size_t>(i)];
  QuadraticOptimum out;
  out.x_star = p.rotation().apply(z);
  out.f_star = p.value(out.x_star);
  return out;
}

// ---------------------------------------------------------------------------
// Links and ridge-separable objectives

double Link::value(double t) const {
  switch (kind) {
    case LinkKind::Squared:
      return 0.5 * t * t;
    case LinkKind::Logistic:
      return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  }
  return 0.0;
}

double Link::d1(double t) const {
  switch (kind) {
    case LinkKind::Squared:
      return t;
    case LinkKind::Logistic:
      return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
  }
  return 0.0;
}

double Link::d2(double t) const {
  switch (kind) {
    case LinkKind::Squared:
      return 1.0;
    case LinkKind::Logistic: {
      const double s = d1(t);
      return s * (1.0 - s);
    }
  }
  return 0.0;
}

double Link::curvature_bound() const { return kind == LinkKind::Squared ? 1.0 : 0.25; }

double Link::third_derivative_bound() const {
  return kind == LinkKind::Squared ? 0.0 : 1.0 / (6.0 * std::sqrt(3.0));
}

bool check_link_curvature(const Link& link, double bound, double half_width, std::size_t points) {
  if (points < 2) points = 2;
  const double step = 2.0 * half_width / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = -half_width + step * static_cast<double>(i);
    if (std::abs(link.d2(t)) > bound) return false;
  }
  return true;
}

RidgeSeparableProblem::RidgeSeparableProblem(Matrix data, Link link)
    : data_(std::move(data)), link_(link) {
  if (data_.rows() == 0 || data_.cols() == 0) throw ConfigError("ridge: empty data");
}

double RidgeSeparableProblem::value(const Vector& x) const {
  require_dim(x, dim(), "ridge evaluate");
  const Vector t = data_ * x;
  double s = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) s += link_.value(t[i]);
  return s / static_cast<double>(samples());
}

Vector RidgeSeparableProblem::gradient(const Vector& x) const {
  require_dim(x, dim(), "ridge gradient");
  Vector t = data_ * x;
  for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = link_.d1(t[i]);
  return data_.transpose() * t / static_cast<double>(samples());
}

Vector RidgeSeparableProblem::hessian_apply(const Vector& x, const Vector& v) const {
  require_dim(x, dim(), "ridge hessian");
  require_dim(v, dim(), "ridge hessian");
  const Vector t = data_ * x;
  Vector w = data_ * v;
  for (Eigen::Index i = 0; i < t.size(); ++i) w[i] *= link_.d2(t[i]);
  return data_.transpose() * w / static_cast<double>(samples());
}

Matrix RidgeSeparableProblem::hessian(const Vector& x) const {
  require_dim(x, dim(), "ridge hessian");
  const Vector t = data_ * x;
  Vector w(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) w[i] = link_.d2(t[i]);
  return data_.transpose() * w.asDiagonal() * data_ / static_cast<double>(samples());
}

double RidgeSeparableProblem::R() const { return data_.rowwise().norm().maxCoeff(); }

double RidgeSeparableProblem::mean_squared_norm() const {
  return data_.rowwise().squaredNorm().mean();
}

Matrix RidgeSeparableProblem::second_moment() const {
  return data_.transpose() * data_ / static_cast<double>(samples());
}

std::optional<double> RidgeSeparableProblem::optimal_value() const {
  if (link_.kind == LinkKind::Squared) return 0.0;
  return std::nullopt;
}

ProblemMeta RidgeSeparableProblem::meta(const Vector& x0) const {
  require_dim(x0, dim(), "ridge meta");
  const Matrix s = second_moment();
  const double smax = symmetric_max_eigenvalue(s);
  ProblemMeta m;
  m.L = L0() * smax;
  m.mu = link_.kind == LinkKind::Squared ? std::max(0.0, symmetric_min_eigenvalue(s)) : 0.0;
  m.H = link_.third_derivative_bound() * R() * smax;
  if (link_.kind == LinkKind::Squared) {
    // minimized at the origin with value 0
    m.Delta = value(x0);
    m.D = m.mu > 0.0 ? std::sqrt(2.0 * m.Delta / m.mu) : std::numeric_limits<double>::infinity();
  } else {
    m.Delta = std::numeric_limits<double>::quiet_NaN();
    m.D = std::numeric_limits<double>::quiet_NaN();
  }
  return m;
}

RidgeSeparableProblem make_ridge(std::size_t d, std::size_t N, LinkKind link, std::uint64_t seed,
                                 double R) {
  if (d == 0 || N == 0) throw ConfigError("make_ridge: d and N must be positive");
  Matrix data(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < N; ++i) {
    Vector u = gaussian_vector(seed, kRidgeSalt, i, d);
    const double scale = rng::uniform_open(seed, kRidgeSalt + 1, i, 0);
    data.row(static_cast<Eigen::Index>(i)) = (R * scale / u.norm()) * u.transpose();
  }
  return RidgeSeparableProblem(std::move(data), Link{link});
}

// ---------------------------------------------------------------------------
// NonconvexTestProblem

NonconvexTestProblem::NonconvexTestProblem(Vector a, Vector b, HouseholderRotation rotation,
                                           double domain_radius)
    : a_(std::move(a)), b_(std::move(b)), rotation_(std::move(rotation)), radius_(domain_radius) {
  if (a_.size() == 0 || a_.size() != b_.size()) {
    throw ConfigError("nonconvex fixture: coefficient vectors must be non-empty and equal length");
  }
  if ((a_.array() <= 0.0).any() || (b_.array() <= 0.0).any()) {
    throw ConfigError("nonconvex fixture: coefficients must be positive");
  }
  if (!(radius_ > 0.0)) throw ConfigError("nonconvex fixture: domain radius must be positive");
}

double NonconvexTestProblem::value(const Vector& x) const {
  require_dim(x, dim(), "nonconvex evaluate");
  const Vector z = rotation_.apply_transpose(x);
  const auto z2 = z.array().square();
  return (0.25 * a_.array() * z2.square() - 0.5 * b_.array() * z2).sum();
}

Vector NonconvexTestProblem::gradient(const Vector& x) const {
  require_dim(x, dim(), "nonconvex gradient");
  const Vector z = rotation_.apply_transpose(x);
  const Vector gz = (a_.array() * z.array().cube() - b_.array() * z.array()).matrix();
  return rotation_.apply(gz);
}

Vector NonconvexTestProblem::hessian_apply(const Vector& x, const Vector& v) const {
  require_dim(x, dim(), "nonconvex hessian");
  require_dim(v, dim(), "nonconvex hessian");
  const Vector z = rotation_.apply_transpose(x);
  const Vector diag = (3.0 * a_.array() * z.array().square() - b_.array()).matrix();
  return rotation_.apply(diag.cwiseProduct(rotation_.apply_transpose(v)));
}

Matrix NonconvexTestProblem::hessian(const Vector& x) const {
  require_dim(x, dim(), "nonconvex hessian");
  const Vector z = rotation_.apply_transpose(x);
  const Vector diag = (3.0 * a_.array() * z.array().square() - b_.array()).matrix();
  const Matrix q = rotation_.dense(dim());
  return q * diag.asDiagonal() * q.transpose();
}

std::optional<double> NonconvexTestProblem::optimal_value() const {
  return -(b_.array().square() / (4.0 * a_.array())).sum();
}

double NonconvexTestProblem::hessian_lipschitz() const { return 6.0 * a_.maxCoeff() * radius_; }

double NonconvexTestProblem::gradient_lipschitz() const {
  double L = 0.0;
  for (Eigen::Index i = 0; i < a_.size(); ++i) {
    L = std::max({L, std::abs(3.0 * a_[i] * radius_ * radius_ - b_[i]), b_[i]});
  }
  return L;
}

ProblemMeta NonconvexTestProblem::meta(const Vector& x0) const {
  ProblemMeta m;
  m.mu = 0.0;
  m.L = gradient_lipschitz();
  m.H = hessian_lipschitz();
  m.Delta = value(x0) - *optimal_value();
  m.D = std::numeric_limits<double>::quiet_NaN();
  return m;
}

std::vector<Vector> NonconvexTestProblem::minimizers() const {
  const auto d = a_.size();
  std::vector<Vector> out;
  const std::size_t count = std::size_t{1} << static_cast<std::size_t>(d);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vector z(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double s = std::sqrt(b_[i] / a_[i]);
      z[i] = (mask >> static_cast<std::size_t>(i)) & 1U ? -s : s;
    }
    out.push_back(rotation_.apply(z));
  }
  return out;
}

// ---------------------------------------------------------------------------
// QuarticNormProblem

QuarticNormProblem::QuarticNormProblem(std::size_t d, double c4, double c2, double domain_radius)
    : d_(d), c4_(c4), c2_(c2), radius_(domain_radius) {
  if (d == 0 || !(c4 > 0.0) || !(c2 >= 0.0) || !(domain_radius > 0.0)) {
    throw ConfigError("quartic fixture: invalid parameters");
  }
}

double QuarticNormProblem::value(const Vector& x) const {
  require_dim(x, d_, "quartic evaluate");
  const double s = x.squaredNorm();
  return 0.25 * c4_ * s * s + 0.5 * c2_ * s;
}

Vector QuarticNormProblem::gradient(const Vector& x) const {
  require_dim(x, d_, "quartic gradient");
  return (c4_ * x.squaredNorm() + c2_) * x;
}

Vector QuarticNormProblem::hessian_apply(const Vector& x, const Vector& v) const {
  require_dim(x, d_, "quartic hessian");
  require_dim(v, d_, "quartic hessian");
  return (c4_ * x.squaredNorm() + c2_) * v + (2.0 * c4_ * x.dot(v)) * x;
}

Matrix QuarticNormProblem::hessian(const Vector& x) const {
  require_dim(x, d_, "quartic hessian");
  const auto n = static_cast<Eigen::Index>(d_);
  return (c4_ * x.squaredNorm() + c2_) * Matrix::Identity(n, n) + 2.0 * c4_ * x * x.transpose();
}

ProblemMeta QuarticNormProblem::meta(const Vector& x0) const {
  ProblemMeta m;
  m.mu = c2_;
  m.L = c2_ + 3.0 * c4_ * radius_ * radius_;
  m.H = 6.0 * c4_ * radius_;
  m.Delta = value(x0);
  m.D = x0.norm();  // radial sublevel sets
  return m;
}

// ---------------------------------------------------------------------------
// CubicPerturbedProblem

CubicPerturbedProblem::CubicPerturbedProblem(std::size_t d, double c, double domain_radius)
    : d_(d), c_(c), radius_(domain_radius) {
  if (d == 0 || !(domain_radius > 0.0)) throw ConfigError("cubic fixture: invalid parameters");
}

double CubicPerturbedProblem::value(const Vector& x) const {
  require_dim(x, d_, "cubic evaluate");
  return 0.5 * x.squaredNorm() + c_ * x.array().cube().sum();
}

Vector CubicPerturbedProblem::gradient(const Vector& x) const {
  require_dim(x, d_, "cubic gradient");
  return x + (3.0 * c_) * x.array().square().matrix();
}

Vector CubicPerturbedProblem::hessian_apply(const Vector& x, const Vector& v) const {
  require_dim(x, d_, "cubic hessian");
  require_dim(v, d_, "cubic hessian");
  return v + (6.0 * c_) * x.cwiseProduct(v);
}

Matrix CubicPerturbedProblem::hessian(const Vector& x) const {
  require_dim(x, d_, "cubic hessian");
  const auto n = static_cast<Eigen::Index>(d_);
  Matrix h = Matrix::Identity(n, n);
  h.diagonal() += (6.0 * c_) * x;
  return h;
}

ProblemMeta CubicPerturbedProblem::meta(const Vector& x0) const {
  ProblemMeta m;
  m.mu = std::max(0.0, 1.0 - 6.0 * std::abs(c_) * radius_);
  m.L = 1.0 + 6.0 * std::abs(c_) * radius_;
  m.H = 6.0 * std::abs(c_);
  m.Delta = std::numeric_limits<double>::quiet_NaN();
  m.D = std::numeric_limits<double>::quiet_NaN();
  (void)x0;
  return m;
}

double CubicPerturbedProblem::taylor2(const Vector& x, const Vector& y) const {
  const Vector s = y - x;
  return value(x) + gradient(x).dot(s) + 0.5 * s.dot(hessian_apply(x, s));
}

// ---------------------------------------------------------------------------
// Reference derivatives

ReferenceDerivatives reference_derivatives(const Problem& p, const Vector& x, HessianForm form,
                                           std::size_t dense_cap) {
  require_dim(x, p.dim(), "reference_derivatives");
  ReferenceDerivatives out;
  out.gradient = p.gradient(x);
  if (const auto* q = dynamic_cast<const QuadraticProblem*>(&p); q && form == HessianForm::Auto) {
    out.hessian = q->eigenvalues();
    return out;
  }
  const bool dense_ok = p.dim() <= dense_cap;
  if (form == HessianForm::Dense && !dense_ok) {
    throw UnsupportedError("reference_derivatives: dense Hessian requested with d = " +
                           std::to_string(p.dim()) + " above cap " + std::to_string(dense_cap));
  }
  if (form == HessianForm::Dense || (form == HessianForm::Auto && dense_ok)) {
    out.hessian = p.hessian(x);
  } else {
    const Problem* problem = &p;
    Vector at = x;
    out.hessian = std::function<Vector(const Vector&)>(
        [problem, at](const Vector& v) { return problem->hessian_apply(at, v); });
  }
  return out;
}

double min_hessian_eigenvalue(const Problem& p, const Vector& x, std::size_t dense_cap) {
  if (const auto* q = dynamic_cast<const QuadraticProblem*>(&p)) return q->mu();
  if (p.dim() > dense_cap) {
    throw UnsupportedError("min_hessian_eigenvalue: d = " + std::to_string(p.dim()) +
                           " above dense cap " + std::to_string(dense_cap));
  }
  return symmetric_min_eigenvalue(p.hessian(x));
}

double taylor_model(const Problem& p, const Vector& x, const Vector& y) {
  const Vector s = y - x;
  return p.value(x) + p.gradient(x).dot(s) + 0.5 * s.dot(p.hessian_apply(x, s));
}

}  // namespace zo
