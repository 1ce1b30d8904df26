#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "zo/spectrum.hpp"
#include "zo/types.hpp"

namespace zo {

/// Problem constants used by solver configuration and certification.
/// H = 0 for pure quadratics; D is the sublevel-set radius around the
/// optimum (infinite when the sublevel set is unbounded).
struct ProblemMeta {
  double mu = 0.0;
  double L = 0.0;
  double H = 0.0;
  double Delta = 0.0;
  double D = std::numeric_limits<double>::infinity();
};

/// Orthogonal map Q = P_1 P_2 ... P_k built from Householder reflectors
/// P_j = I - 2 u_j u_j^T. An empty list is the identity.
class HouseholderRotation {
 public:
  HouseholderRotation() = default;
  HouseholderRotation(std::size_t d, std::size_t reflectors, std::uint64_t seed);

  std::size_t reflectors() const { return normals_.size(); }
  bool is_identity() const { return normals_.empty(); }

  Vector apply(const Vector& z) const;            // Q z
  Vector apply_transpose(const Vector& x) const;  // Q^T x
  Matrix dense(std::size_t d) const;

 private:
  std::vector<Vector> normals_;
};

/// Smooth objective with reference derivatives. Solvers never see this
/// interface directly; they only query an oracle built on top of it.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Vector hessian_apply(const Vector& x, const Vector& v) const = 0;
  virtual Matrix hessian(const Vector& x) const;

  /// f* when known in closed form.
  virtual std::optional<double> optimal_value() const { return std::nullopt; }

  /// Constants valid on the problem's certified domain (mu, L, H);
  /// Delta and D are filled for the given start point where known.
  virtual ProblemMeta meta(const Vector& x0) const = 0;

  /// Radius of the ball on which L and H are certified (infinite where global).
  virtual double domain_radius() const { return std::numeric_limits<double>::infinity(); }
};

/// f(x) = 1/2 x^T A x + b^T x with A = Q diag(lambda) Q^T.
class QuadraticProblem final : public Problem {
 public:
  QuadraticProblem(std::vector<double> eigenvalues, HouseholderRotation rotation, Vector b);

  std::size_t dim() const override { return eigenvalues_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hessian_apply(const Vector& x, const Vector& v) const override;
  Matrix hessian(const Vector& x) const override;
  std::optional<double> optimal_value() const override;
  ProblemMeta meta(const Vector& x0) const override;

  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const HouseholderRotation& rotation() const { return rotation_; }
  const Vector& linear_term() const { return b_; }

  double L() const { return eigenvalues_.front(); }
  double mu() const { return eigenvalues_.back(); }
  double trace() const;

  /// Dense A (cross-check only).
  Matrix dense_matrix() const;

 private:
  Vector lambda_;
  std::vector<double> eigenvalues_;
  HouseholderRotation rotation_;
  Vector b_;
};

enum class BMode { Zero, RandomUnit };

QuadraticProblem make_quadratic(const SpectrumSpec& spec, std::size_t d, std::uint64_t seed,
                                bool rotate, BMode b_mode, std::size_t reflectors = 2);

struct QuadraticOptimum {
  Vector x_star;
  double f_star = 0.0;
};

/// Closed-form minimizer via the eigenbasis. Throws UnsupportedError when
/// the smallest eigenvalue is zero.
QuadraticOptimum optimum(const QuadraticProblem& p);

/// Scalar link function q with its first two derivatives.
enum class LinkKind { Squared, Logistic };

struct Link {
  LinkKind kind = LinkKind::Squared;

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  /// sup |q''|
  double curvature_bound() const;
  /// sup |q'''|
  double third_derivative_bound() const;
};

/// Checks sup |q''| <= bound by sampling q'' on a uniform grid over [-lo, lo].
bool check_link_curvature(const Link& link, double bound, double half_width = 50.0,
                          std::size_t points = 100001);

/// f(x) = (1/N) sum_i q(beta_i^T x). Rows of `data` are the beta_i.
class RidgeSeparableProblem final : public Problem {
 public:
  RidgeSeparableProblem(Matrix data, Link link);

  std::size_t dim() const override { return static_cast<std::size_t>(data_.cols()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hessian_apply(const Vector& x, const Vector& v) const override;
  Matrix hessian(const Vector& x) const override;
  /// 0 for the squared link (attained at the origin); unknown otherwise.
  std::optional<double> optimal_value() const override;
  ProblemMeta meta(const Vector& x0) const override;

  const Matrix& data() const { return data_; }
  const Link& link() const { return link_; }
  std::size_t samples() const { return static_cast<std::size_t>(data_.rows()); }
  double L0() const { return link_.curvature_bound(); }
  /// max_i ||beta_i||
  double R() const;
  /// (1/N) sum_i ||beta_i||^2
  double mean_squared_norm() const;
  /// (1/N) sum_i beta_i beta_i^T
  Matrix second_moment() const;

 private:
  Matrix data_;
  Link link_;
};

/// beta_i = R * u_i * s_i with u_i uniform on the sphere and s_i ~ U(0,1].
RidgeSeparableProblem make_ridge(std::size_t d, std::size_t N, LinkKind link, std::uint64_t seed,
                                 double R = 1.0);

/// f(x) = sum_i (a_i/4 z_i^4 - b_i/2 z_i^2), z = Q^T x. Strict saddle at
/// the origin; minima at z_i = +-sqrt(b_i/a_i).
class NonconvexTestProblem final : public Problem {
 public:
  NonconvexTestProblem(Vector a, Vector b, HouseholderRotation rotation, double domain_radius);

  std::size_t dim() const override { return static_cast<std::size_t>(a_.size()); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hessian_apply(const Vector& x, const Vector& v) const override;
  Matrix hessian(const Vector& x) const override;
  std::optional<double> optimal_value() const override;
  ProblemMeta meta(const Vector& x0) const override;
  double domain_radius() const override { return radius_; }

  /// H = 6 max a_i R
  double hessian_lipschitz() const;
  /// sup over the ball of the Hessian operator norm
  double gradient_lipschitz() const;
  /// The 2^d minimizers in original coordinates.
  std::vector<Vector> minimizers() const;

 private:
  Vector a_;
  Vector b_;
  HouseholderRotation rotation_;
  double radius_;
};

/// Convex quartic f(x) = (c4/4)||x||^4 + (c2/2)||x||^2, minimized at 0.
class QuarticNormProblem final : public Problem {
 public:
  QuarticNormProblem(std::size_t d, double c4, double c2, double domain_radius);

  std::size_t dim() const override { return d_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hessian_apply(const Vector& x, const Vector& v) const override;
  Matrix hessian(const Vector& x) const override;
  std::optional<double> optimal_value() const override { return 0.0; }
  ProblemMeta meta(const Vector& x0) const override;
  double domain_radius() const override { return radius_; }

 private:
  std::size_t d_;
  double c4_;
  double c2_;
  double radius_;
};

/// f(x) = 1/2 ||x||^2 + c sum_i x_i^3; Hessian I + 6c diag(x), so H = 6c.
class CubicPerturbedProblem final : public Problem {
 public:
  CubicPerturbedProblem(std::size_t d, double c, double domain_radius);

  std::size_t dim() const override { return d_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Vector hessian_apply(const Vector& x, const Vector& v) const override;
  Matrix hessian(const Vector& x) const override;
  ProblemMeta meta(const Vector& x0) const override;
  double domain_radius() const override { return radius_; }

  /// Second-order Taylor expansion f_x(y).
  double taylor2(const Vector& x, const Vector& y) const;

 private:
  std::size_t d_;
  double c_;
  double radius_;
};

/// Ground-truth derivatives (certification only).
struct ReferenceDerivatives {
  Vector gradient;
  /// Quadratics: the stored spectrum. Others: dense Hessian when d <= cap,
  /// otherwise a matrix-free Hessian-vector product.
  std::variant<std::vector<double>, Matrix, std::function<Vector(const Vector&)>> hessian;
};

enum class HessianForm { Auto, Dense, MatrixFree };

inline constexpr std::size_t kDenseHessianCap = 64;

ReferenceDerivatives reference_derivatives(const Problem& p, const Vector& x,
                                           HessianForm form = HessianForm::Auto,
                                           std::size_t dense_cap = kDenseHessianCap);

/// Smallest eigenvalue of the Hessian at x (stored spectrum for quadratics,
/// dense decomposition otherwise; throws UnsupportedError above the cap).
double min_hessian_eigenvalue(const Problem& p, const Vector& x,
                              std::size_t dense_cap = kDenseHessianCap);

/// Second-order Taylor expansion of p at x, evaluated at y, from reference
/// derivatives.
double taylor_model(const Problem& p, const Vector& x, const Vector& y);

}  // namespace zo
