#include <gtest/gtest.h>

#include <cmath>

#include "zo/estimators.hpp"
#include "zo/harness.hpp"
#include "zo/problems.hpp"
#include "zo/rng.hpp"
#include "zo/solvers.hpp"

using namespace zo;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

RunControl gap_control(const Problem& p, double f_star) {
  RunControl c;
  c.gap = [&p, f_star](const Vector& x) { return p.value(x) - f_star; };
  return c;
}

}  // namespace

TEST(Rg, StepRules) {
  RgConfig cfg;
  cfg.trace_A = 4.0;
  EXPECT_DOUBLE_EQ(rg_step(cfg), 1.0 / 48.0);
  cfg.trace_A.reset();
  EXPECT_THROW(rg_step(cfg), ConfigError);
  cfg.step_mode = StepMode::Manual;
  cfg.h = 0.3;
  EXPECT_DOUBLE_EQ(rg_step(cfg), 0.3);
}

TEST(Rg, SingleStepByHand) {
  const QuadraticProblem q({1.0}, HouseholderRotation(), Vector::Zero(1));
  OracleHandle o(q);
  RgConfig cfg;
  cfg.step_mode = StepMode::Manual;
  cfg.h = 0.5;
  cfg.rho = 0.1;
  cfg.max_iters = 1;
  RunControl c;
  c.direction = [](std::uint64_t) { return vec({1.0}); };
  const auto t = rg_rho(o, vec({1.0}), cfg, c);
  EXPECT_NEAR(t.x_out[0], 1.0 - 0.5 * 1.05, 1e-12);
  EXPECT_EQ(t.oracle_calls, 2u);
  EXPECT_EQ(t.status, Status::MaxIters);
}

TEST(Rg, ReplayingSamplerDirectionsReproducesRun) {
  const auto q = make_quadratic(spectrum::PowerLaw{1.0, 1.0}, 6, 3, true, BMode::RandomUnit);
  RgConfig cfg;
  cfg.trace_A = 2.45;
  cfg.max_iters = 500;
  cfg.seed = 17;
  OracleHandle a(q), b(q);
  const auto base = rg_rho(a, Vector::Ones(6), cfg);
  const DirectionSampler s(17, 0x5247);
  RunControl c;
  c.direction = [&s](std::uint64_t k) { return s.draw(k, 6); };
  const auto replay = rg_rho(b, Vector::Ones(6), cfg, c);
  EXPECT_EQ(base.x_out, replay.x_out);
  EXPECT_EQ(a.calls(), 1000u);
}

TEST(Rg, ContractsOnStronglyConvexQuadratic) {
  const auto q = make_quadratic(spectrum::Flat{1.0}, 4, 2, true, BMode::RandomUnit);
  const auto opt = optimum(q);
  OracleHandle o(q);
  RgConfig cfg;
  cfg.trace_A = 4.0;
  cfg.rho = 1e-8;
  cfg.max_iters = 5000;
  cfg.target_gap = 1e-8 * (q.value(Vector::Zero(4)) - opt.f_star);
  const auto t = rg_rho(o, Vector::Zero(4), cfg, gap_control(q, opt.f_star));
  EXPECT_EQ(t.status, Status::TargetReached);
  EXPECT_EQ(t.oracle_calls, 2 * t.iterations);
  EXPECT_EQ(o.calls(), t.oracle_calls);
}

TEST(Rg, TargetAtStartStopsWithoutQueries) {
  const auto q = make_quadratic(spectrum::Flat{1.0}, 3, 0, false, BMode::Zero);
  OracleHandle o(q);
  RgConfig cfg;
  cfg.trace_A = 3.0;
  cfg.target_gap = 1.0;
  const auto t = rg_rho(o, Vector::Zero(3), cfg, gap_control(q, 0.0));
  EXPECT_EQ(t.status, Status::TargetReached);
  EXPECT_EQ(t.iterations, 0u);
  EXPECT_EQ(o.calls(), 0u);
}

TEST(Rg, WeaklyConvexGapDecreases) {
  const QuadraticProblem q({1.0, 0.0}, HouseholderRotation(), Vector::Zero(2));
  OracleHandle o(q);
  RgConfig cfg;
  cfg.trace_A = 1.0;
  cfg.max_iters = 2000;
  const auto t = rg_rho(o, vec({1.0, 1.0}), cfg, gap_control(q, 0.0));
  ASSERT_TRUE(t.final_gap.has_value());
  EXPECT_LT(*t.final_gap, 1e-2 * 0.5);
}

TEST(Zhb, StepAndMomentum) {
  ZhbConfig cfg;
  cfg.ed_half = 2.0;
  cfg.c_step = 4.0;
  cfg.mu = 0.01;
  EXPECT_DOUBLE_EQ(zhb_step(cfg), 1.0 / 64.0);
  EXPECT_DOUBLE_EQ(zhb_momentum(cfg), 0.0125);
  cfg.ed_half = 0.1;
  cfg.c_step = 1.0;
  cfg.mu = 1.0;
  EXPECT_THROW(zhb_momentum(cfg), ConfigError);
  cfg.mu = 0.0;
  EXPECT_THROW(zhb_momentum(cfg), ConfigError);
}

TEST(Zhb, ReplayAndConvergence) {
  const auto q = make_quadratic(spectrum::PowerLawWithFloor{1.0, 2.0, 0.05}, 8, 5, true,
                                BMode::RandomUnit);
  const auto opt = optimum(q);
  const auto eigs = realize(spectrum::PowerLawWithFloor{1.0, 2.0, 0.05}, 8);
  ZhbConfig cfg;
  cfg.mu = eigs.back();
  for (double e : eigs) cfg.ed_half += std::sqrt(e);
  cfg.max_iters = 20000;
  cfg.seed = 3;
  const double gap0 = q.value(Vector::Zero(8)) - opt.f_star;
  cfg.target_gap = 1e-4 * gap0;
  OracleHandle a(q), b(q);
  const auto t = zhb(a, Vector::Zero(8), cfg, gap_control(q, opt.f_star));
  EXPECT_EQ(t.status, Status::TargetReached);
  const DirectionSampler s(3, 0x5a4842);
  RunControl c = gap_control(q, opt.f_star);
  c.direction = [&s](std::uint64_t k) { return s.draw(k, 8); };
  const auto replay = zhb(b, Vector::Zero(8), cfg, c);
  EXPECT_EQ(t.x_out, replay.x_out);
  EXPECT_EQ(t.iterations, replay.iterations);
}

TEST(Zhb, RepeatsPickLowestReportedValue) {
  const auto q = make_quadratic(spectrum::Flat{1.0}, 4, 1, true, BMode::RandomUnit);
  ZhbConfig cfg;
  cfg.mu = 1.0;
  cfg.ed_half = 4.0;
  cfg.max_iters = 50;
  cfg.repeats = 3;
  OracleHandle o(q);
  const auto t = zhb(o, Vector::Zero(4), cfg);
  EXPECT_EQ(t.oracle_calls, 3u * (2u * 50u + 1u));
  EXPECT_EQ(o.calls(), t.oracle_calls);
  EXPECT_EQ(t.reported_value, q.value(t.x_out));
  for (std::size_t r = 0; r < 3; ++r) {
    ZhbConfig single = cfg;
    single.repeats = 1;
    single.seed = r == 0 ? cfg.seed : rng::derive_seed(cfg.seed, r);
    OracleHandle s(q);
    EXPECT_LE(t.reported_value, q.value(zhb(s, Vector::Zero(4), single).x_out));
  }
}

TEST(Zhb, RegularizedReachesEpsOnSingularQuadratic) {
  const QuadraticProblem q({1.0, 0.0}, HouseholderRotation(), Vector::Zero(2));
  OracleHandle o(q);
  ZhbConfig cfg;
  cfg.ed_half = 1.0;
  cfg.max_iters = 50000;
  cfg.target_gap = 0.05;
  const Vector x0 = vec({1.0, 1.0});
  const auto t = zhb_regularized(o, x0, 0.05, x0.norm(), cfg, gap_control(q, 0.0));
  EXPECT_EQ(t.status, Status::TargetReached);
  EXPECT_LE(*t.final_gap, 0.05);
  EXPECT_THROW(zhb_regularized(o, x0, 0.05, 0.0, cfg), ConfigError);
}

TEST(Anpe, StepWeightRecursion) {
  EXPECT_DOUBLE_EQ(anpe_step_weight(1.0, 0.0), 1.0);
  EXPECT_NEAR(anpe_step_weight(1.0, 1.0), 0.5 * (1.0 + std::sqrt(5.0)), 1e-15);
  // a^2 = lambda (A + a)
  const double a = anpe_step_weight(0.3, 2.0);
  EXPECT_NEAR(a * a, 0.3 * (2.0 + a), 1e-14);
}

TEST(Anpe, RejectsInvalidSigmas) {
  const QuarticNormProblem p(2, 1.0, 1.0, 2.0);
  OracleHandle o(p);
  AnpeConfig cfg;
  cfg.sigma_u = 0.6;
  EXPECT_THROW(anpe_zo(o, vec({0.5, 0.5}), p.meta(vec({0.5, 0.5})), cfg), ConfigError);
}

TEST(Anpe, QuarticBracketsAndAudit) {
  const QuarticNormProblem p(4, 1.0, 1.0, 2.0);
  OracleHandle o(p);
  const Vector x0 = Vector::Constant(4, 0.5);
  AnpeConfig cfg;
  cfg.target_gap = 1e-2;
  const auto t = anpe_zo(o, x0, p.meta(x0), cfg, gap_control(p, 0.0));
  EXPECT_EQ(t.status, Status::TargetReached);
  EXPECT_EQ(o.calls(), t.oracle_calls);
  ASSERT_FALSE(t.outer.empty());
  for (const auto& r : t.outer) {
    EXPECT_TRUE(r.bracket_ok);
    EXPECT_LE(r.depth, 60u);
  }
}

TEST(Cubic, TolerancesShrinkWithDelta) {
  const auto a = cubic_tolerances(1e-2, 1.0, 0.0);
  const auto b = cubic_tolerances(1e-2, 1.0, 10.0);
  EXPECT_GT(a.eps_C, 0.0);
  EXPECT_LT(b.eps_C, a.eps_C);
  EXPECT_LT(b.eps_D, a.eps_D);
  EXPECT_THROW(cubic_tolerances(0.0, 1.0, 1.0), ConfigError);
}

TEST(Cubic, EscapesSaddleAndCertifies) {
  const NonconvexTestProblem p(vec({1, 1}), vec({1, 1}), HouseholderRotation(), 2.0);
  OracleHandle o(p);
  const Vector x0 = vec({0.1, 0.1});
  CubicConfig cfg;
  cfg.eps = 1e-2;
  const auto t = cubic_zo(o, x0, p.meta(x0), cfg, gap_control(p, -0.5));
  EXPECT_EQ(t.status, Status::TargetReached);
  EXPECT_EQ(o.calls(), t.oracle_calls);
  const auto c = certify(p, t.x_out, cfg.eps, std::sqrt(p.meta(x0).H * cfg.eps));
  EXPECT_LE(c.grad_norm, 3.0 * cfg.eps);
  EXPECT_GE(c.min_hessian_eig, -2.0 * std::sqrt(p.meta(x0).H * cfg.eps));
  double prev = p.value(x0) + 0.5;
  for (const auto& r : t.outer) {
    // the final solve at r_u is inexact, so |y - x| may sit slightly above r
    EXPECT_LE(r.bracket_value, 4.0 * r.lambda);
    EXPECT_LT(r.f_gap, prev);
    prev = r.f_gap;
  }
}

TEST(Cubic, RequiresPositiveCurvatureConstant) {
  const QuadraticProblem q({1.0, 1.0}, HouseholderRotation(), Vector::Zero(2));
  OracleHandle o(q);
  EXPECT_THROW(cubic_zo(o, vec({1, 1}), q.meta(vec({1, 1})), CubicConfig{}), ConfigError);
}
