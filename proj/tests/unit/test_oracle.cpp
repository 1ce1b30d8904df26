#include <gtest/gtest.h>

#include <cmath>

#include "zo/oracle.hpp"
#include "zo/rng.hpp"

using namespace zo;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Vector random_vector(std::size_t d, std::uint64_t seed, std::uint64_t index = 0) {
  Vector v(static_cast<Eigen::Index>(d));
  rng::fill_standard_normal(seed, 31, index, v.data(), d);
  return v;
}

double unit(std::uint64_t seed, std::uint64_t index) { return rng::uniform_open(seed, 32, index, 0); }

QuadraticProblem scalar_half_square() {
  return QuadraticProblem({1.0}, HouseholderRotation(), Vector::Zero(1));
}

}  // namespace

TEST(Oracle, ExactQueryCountsCalls) {
  const auto q = make_quadratic(spectrum::Flat{1.0}, 2, 0, false, BMode::Zero);
  OracleHandle o(q);
  EXPECT_EQ(o.query(vec({1, 1})), 1.0);
  EXPECT_EQ(o.calls(), 1u);
  EXPECT_EQ(o.noise_bound(), 0.0);
}

TEST(Oracle, RejectsBadInput) {
  const auto q = make_quadratic(spectrum::Flat{1.0}, 2, 0, false, BMode::Zero);
  OracleHandle o(q);
  EXPECT_THROW(o.query(vec({1, NAN})), NumericalError);
  EXPECT_THROW(o.query(vec({1, 2, 3})), DimensionError);
  EXPECT_THROW(OracleHandle(q, {}, -1.0), ConfigError);
}

TEST(Oracle, NoiseContractHoldsForEveryModel) {
  const auto q = make_quadratic(spectrum::PowerLaw{1.0, 1.0}, 3, 1, true, BMode::RandomUnit);
  for (NoiseKind k : {NoiseKind::None, NoiseKind::UniformRandom, NoiseKind::DeterministicHash}) {
    OracleHandle o(q, {k, 5}, 0.1);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100000; ++i) {
      const Vector x = random_vector(3, 2, i);
      worst = std::max(worst, std::abs(o.query(x) - q.value(x)));
    }
    EXPECT_LE(worst, 0.1);
    if (k != NoiseKind::None) {
      EXPECT_GT(worst, 0.09);
    }
    EXPECT_EQ(o.calls(), 100000u);
  }
}

TEST(Oracle, DeterministicHashIsConsistent) {
  const auto q = make_quadratic(spectrum::Flat{1.0}, 3, 0, false, BMode::Zero);
  OracleHandle o(q, {NoiseKind::DeterministicHash, 9}, 0.1);
  const Vector x = vec({0.3, -0.2, 0.0});
  const double a = o.query(x);
  const double b = o.query(x);
  EXPECT_EQ(a, b);
  EXPECT_EQ(o.calls(), 2u);
  EXPECT_EQ(o.query(vec({0.3, -0.2, -0.0})), a);
  EXPECT_NE(o.query(vec({0.3, -0.2, 1e-9})), a);
}

TEST(Asoe, HandExample) {
  const auto q = scalar_half_square();
  OracleHandle o(q);
  EXPECT_NEAR(asoe(o, 1.0, 1.0, vec({1}), vec({2}), 0.1), 2.05, 1e-12);
  EXPECT_EQ(o.calls(), 4u);
}

TEST(Asoe, ZeroDisplacementReturnsValueWithOneQuery) {
  const auto q = scalar_half_square();
  OracleHandle o(q);
  EXPECT_EQ(asoe(o, 1.0, 1.0, vec({3}), vec({3}), 0.1), 4.5);
  EXPECT_EQ(o.calls(), 1u);
}

TEST(Asoe, RequiresExactOracleAndPositiveParameters) {
  const auto q = scalar_half_square();
  OracleHandle noisy(q, {NoiseKind::UniformRandom, 1}, 0.01);
  EXPECT_THROW(asoe(noisy, 1, 1, vec({1}), vec({2}), 0.1), UnsupportedError);
  EXPECT_THROW(approximate_gradient(noisy, 1, vec({1}), 0.1), UnsupportedError);
  OracleHandle o(q);
  EXPECT_THROW(asoe(o, 0, 1, vec({1}), vec({2}), 0.1), ConfigError);
  EXPECT_THROW(asoe(o, 1, 1, vec({1}), vec({2}), 0.0), ConfigError);
}

TEST(Asoe, QuadraticWithinDelta) {
  const auto q = make_quadratic(spectrum::PowerLaw{2.0, 1.0}, 6, 3, true, BMode::RandomUnit);
  OracleHandle o(q);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Vector x = random_vector(6, 4, i);
    const Vector y = random_vector(6, 5, i);
    const double delta = std::pow(10.0, -4.0 + 3.0 * unit(6, i));
    const auto before = o.calls();
    // any H > 0 bounds the Hessian variation of a quadratic; floored as in the solvers
    const double v = asoe(o, q.L(), std::max(q.meta(x).H, 1e-6), x, y, delta);
    EXPECT_EQ(o.calls() - before, 4u);
    EXPECT_LE(std::abs(v - q.value(y)), delta);
  }
}

TEST(Asoe, CubicPerturbationWithinDelta) {
  const CubicPerturbedProblem p(4, 0.01, 1.0);
  OracleHandle o(p);
  const double L = 1.0 + 6.0 * 0.01;
  const double H = 0.06;
  for (std::uint64_t i = 0; i < 100; ++i) {
    Vector x = random_vector(4, 7, i);
    Vector y = random_vector(4, 8, i);
    x *= 0.5 * unit(9, i) / x.norm();
    y *= 0.5 * unit(10, i) / y.norm();
    const double delta = std::pow(10.0, -4.0 + 3.0 * unit(11, i));
    EXPECT_LE(std::abs(asoe(o, L, H, x, y, delta) - p.taylor2(x, y)), delta);
  }
  EXPECT_EQ(o.calls(), 400u);
}

TEST(Asoe, DisplacementCapKeepsProbesNearAndAccuracy) {
  const QuarticNormProblem p(3, 1.0, 1.0, 2.0);
  OracleHandle o(p);
  const Vector x = vec({0.5, -0.3, 0.2});
  const Vector y = x + vec({1e-5, 0, 0});
  AsoeOptions capped;
  capped.max_displacement = 1.0;
  const double exact = taylor_model(p, x, y);
  EXPECT_LE(std::abs(asoe(o, 13.0, 12.0, x, y, 1e-6, capped) - exact), 1e-6);
  // Without the cap the second-difference probe leaves the ball.
  EXPECT_GT(std::abs(asoe(o, 13.0, 12.0, x, y, 1e-6) - exact), 1e-6);
}

TEST(Asoe, RoundingFloorIsMonotoneInScale) {
  EXPECT_EQ(asoe_rounding_floor(1, 1, 0.0, 1), 0.0);
  EXPECT_LT(asoe_rounding_floor(1, 1, 1.0, 1), asoe_rounding_floor(1, 1, 1.0, 100));
  EXPECT_LT(asoe_rounding_floor(1, 1, 0.1, 1), asoe_rounding_floor(1, 1, 1.0, 1));
}

TEST(ApproximateGradient, HandExample) {
  const auto q = scalar_half_square();
  OracleHandle o(q);
  const Vector v = approximate_gradient(o, 1.0, vec({1}), 0.01);
  EXPECT_NEAR(v[0], 1.01, 1e-12);
  EXPECT_EQ(o.calls(), 2u);
}

TEST(ApproximateGradient, QuadraticAndLogisticWithinTolerance) {
  const auto iso = make_quadratic(spectrum::Flat{1.0}, 16, 0, false, BMode::Zero);
  const auto rot = make_quadratic(spectrum::PowerLaw{3.0, 1.0}, 12, 2, true, BMode::RandomUnit);
  const auto logi = make_ridge(8, 30, LinkKind::Logistic, 4);
  for (double eps : {1e-2, 1e-3}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      {
        OracleHandle o(iso);
        const Vector x = random_vector(16, 20, s);
        EXPECT_LE((approximate_gradient(o, 1.0, x, eps) - x).norm(), eps);
        EXPECT_EQ(o.calls(), 17u);
      }
      {
        OracleHandle o(rot);
        const Vector x = random_vector(12, 21, s);
        EXPECT_LE((approximate_gradient(o, rot.L(), x, eps) - rot.gradient(x)).norm(), eps);
      }
      {
        OracleHandle o(logi);
        const Vector x = random_vector(8, 22, s);
        const double L = logi.meta(x).L;
        EXPECT_LE((approximate_gradient(o, L, x, eps) - logi.gradient(x)).norm(), eps);
        EXPECT_EQ(o.calls(), 9u);
      }
    }
  }
}

TEST(TraceEstimate, DiagonalQuadratic) {
  const QuadraticProblem q({2, 1}, HouseholderRotation(), Vector::Zero(2));
  OracleHandle o(q);
  const auto t = trace_estimate(o, vec({0.3, 0.7}), 0.1, 50000, 3);
  EXPECT_NEAR(t.value, 3.0, 3.0 * t.stderr_);
  EXPECT_EQ(o.calls(), 100001u);
}

TEST(TraceEstimate, IdentityGivesDimension) {
  const auto q = make_quadratic(spectrum::Flat{1.0}, 10, 0, true, BMode::Zero);
  OracleHandle o(q);
  const auto t = trace_estimate(o, Vector::Zero(10), 0.1, 20000, 1);
  EXPECT_NEAR(t.value, 10.0, 4.0 * t.stderr_);
}

TEST(TraceEstimate, LinearIsExactlyZero) {
  const QuadraticProblem lin({0, 0, 0}, HouseholderRotation(), vec({1, -2, 0.5}));
  OracleHandle o(lin);
  const auto t = trace_estimate(o, Vector::Zero(3), 0.1, 1000, 2);
  EXPECT_EQ(t.value, 0.0);
  EXPECT_THROW(trace_estimate(o, Vector::Zero(3), 0.1, 0, 2), ConfigError);
}

TEST(TaylorModelOracle, ValueAndCallAccounting) {
  const CubicPerturbedProblem p(3, 0.01, 1.0);
  OracleHandle base(p);
  base.query(Vector::Zero(3));
  const Vector c = vec({0.1, 0.2, -0.1});
  TaylorModelOracle::Params params;
  params.L = 1.06;
  params.H = 0.06;
  params.delta = 1e-6;
  params.prox_weight = 2.0;
  TaylorModelOracle m(base, c, params);
  const Vector y = vec({0.3, 0.1, 0.0});
  const double expect = p.taylor2(c, y) + 0.5 * 2.0 * (y - c).squaredNorm();
  EXPECT_NEAR(m.query(y), expect, 1e-6);
  EXPECT_EQ(m.calls(), 4u);
  EXPECT_EQ(base.calls(), 5u);
  EXPECT_EQ(m.query(c), p.value(c));
  EXPECT_EQ(m.calls(), 5u);
  EXPECT_GE(m.noise_bound(), 1e-6);
}

TEST(RegularizedOracle, AddsQuadraticWithoutQueries) {
  const auto q = make_quadratic(spectrum::PowerLaw{1.0, 1.0}, 4, 1, true, BMode::RandomUnit);
  OracleHandle o(q);
  RegularizedOracle g(o, 0.3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Vector x = random_vector(4, 40, s);
    EXPECT_NEAR(g.query(x) - q.value(x), 0.15 * x.squaredNorm(), 1e-12 * (1 + std::abs(q.value(x))));
  }
  EXPECT_EQ(g.calls(), 20u);
  EXPECT_EQ(o.calls(), 20u);
}
