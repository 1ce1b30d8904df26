#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "zo/effdim.hpp"
#include "zo/problems.hpp"

using namespace zo;

TEST(EdExact, HandValues) {
  EXPECT_DOUBLE_EQ(ed_exact({4, 1}, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(ed_exact(std::vector<double>(7, 1.0), 0.3), 7.0);
  EXPECT_NEAR(ed_exact({1, 0.25, 1.0 / 9.0}, 1.0), 49.0 / 36.0, 1e-15);
  EXPECT_THROW(ed_exact({1}, 0.0), ConfigError);
}

TEST(EdExact, MonotoneInAlpha) {
  const auto small = realize(spectrum::PowerLaw{1.0, 1.5}, 50);
  const auto big = realize(spectrum::PowerLawWithFloor{1.0, 1.0, 1.0}, 50);
  double prev_small = INFINITY, prev_big = 0.0;
  for (double a : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    EXPECT_LE(ed_exact(small, a), prev_small);
    EXPECT_GE(ed_exact(big, a), prev_big);
    prev_small = ed_exact(small, a);
    prev_big = ed_exact(big, a);
  }
}

TEST(EdExact, Homogeneity) {
  auto e = realize(spectrum::PowerLaw{1.0, 2.0}, 30);
  const double lam = 3.7;
  for (double a : {0.5, 1.0, 2.0}) {
    std::vector<double> scaled = e;
    for (double& v : scaled) v *= lam;
    EXPECT_NEAR(ed_exact(scaled, a), std::pow(lam, a) * ed_exact(e, a), 1e-12 * ed_exact(scaled, a));
  }
}

TEST(EdExact, BelowDTimesLToAlpha) {
  const auto e = realize(spectrum::PowerLawWithFloor{2.0, 0.5, 0.1}, 100);
  for (double a : {0.5, 1.0, 2.0}) EXPECT_LE(ed_exact(e, a), 100.0 * std::pow(e.front(), a));
}

TEST(PowerLawBound, SpotValues) {
  EXPECT_NEAR(ed_powerlaw_bound(1.0, 3.0, 0.5, 1000), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(ed_powerlaw_bound(1.0, 2.0, 0.5, 4), std::log(9.0), 1e-12);
  EXPECT_NEAR(ed_powerlaw_bound(1.0, 1.0, 1.0, 4), std::log(9.0), 1e-12);
  // alpha beta < 1 branch
  EXPECT_NEAR(ed_powerlaw_bound(4.0, 1.0, 0.5, 8), 2.0 * std::sqrt(9.0) / 0.5, 1e-12);
}

TEST(PowerLawBound, DominatesExactOnGrid) {
  for (double C : {0.5, 1.0, 3.0}) {
    for (double beta : {0.5, 1.0, 2.0, 3.0}) {
      for (double alpha : {0.25, 0.5, 1.0, 2.0}) {
        for (std::size_t d : {1u, 2u, 10u, 100u, 1000u, 10000u}) {
          const double exact = ed_exact(realize(spectrum::PowerLaw{C, beta}, d), alpha);
          EXPECT_LE(exact, ed_powerlaw_bound(C, beta, alpha, d) * (1 + 1e-12))
              << C << " " << beta << " " << alpha << " " << d;
        }
      }
    }
  }
}

TEST(RidgeBound, SpotValues) {
  EXPECT_DOUBLE_EQ(ed_ridge_bound(1.0, 1.0, 1.0, 10).paper, 1.0);
  EXPECT_NEAR(ed_ridge_bound(1.0, 1.0, 0.5, 100).paper, 10.0, 1e-12);
  EXPECT_NEAR(ed_ridge_bound(2.0, 3.0, 1.0, 5).corrected, 18.0, 1e-12);
  EXPECT_NEAR(ed_ridge_bound(2.0, 3.0, 1.0, 5, 4.0).corrected, 8.0, 1e-12);
}

TEST(RidgeBound, CorrectedDominatesExactSquaredLoss) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = make_ridge(16, 32, LinkKind::Squared, seed, 1.0 + 0.1 * seed);
    Eigen::SelfAdjointEigenSolver<Matrix> es(r.L0() * r.second_moment(), Eigen::EigenvaluesOnly);
    std::vector<double> eigs;
    for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
      eigs.push_back(std::max(0.0, es.eigenvalues()[i]));
    }
    for (double a : {0.5, 1.0}) {
      const auto b = ed_ridge_bound(r.L0(), r.R(), a, 16, r.mean_squared_norm());
      EXPECT_LE(ed_exact(eigs, a), b.corrected * (1 + 1e-12));
      const auto fallback = ed_ridge_bound(r.L0(), r.R(), a, 16);
      EXPECT_LE(ed_exact(eigs, a), fallback.corrected * (1 + 1e-12));
    }
  }
}

TEST(NnTraceBound, Values) {
  EXPECT_DOUBLE_EQ(nn_trace_bound(2, 3, 5), 30.0);
  EXPECT_DOUBLE_EQ(nn_trace_bound(1, 1, 1), 1.0);
  EXPECT_DOUBLE_EQ(nn_trace_bound(0.5, 2, 2), 2.0);
}

TEST(EffDimReport, ExactAndPowerLaw) {
  const auto r = effdim_report(spectrum::PowerLaw{1.0, 3.0}, 500, 0.5);
  ASSERT_TRUE(r.exact.has_value());
  ASSERT_EQ(r.bounds.size(), 1u);
  EXPECT_EQ(r.bounds[0].first, "powerlaw");
  EXPECT_LE(*r.exact, r.bounds[0].second);
  const auto flat = effdim_report(spectrum::Flat{4.0}, 9, 0.5);
  EXPECT_DOUBLE_EQ(*flat.exact, 18.0);
  EXPECT_TRUE(flat.bounds.empty());
}
