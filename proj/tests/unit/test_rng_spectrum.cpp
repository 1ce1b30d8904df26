#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "zo/estimators.hpp"
#include "zo/rng.hpp"
#include "zo/spectrum.hpp"

using namespace zo;

TEST(Rng, CounterBasedValuesArePure) {
  EXPECT_EQ(rng::hash(1, 2, 3, 4), rng::hash(1, 2, 3, 4));
  EXPECT_NE(rng::hash(1, 2, 3, 4), rng::hash(1, 2, 3, 5));
  EXPECT_NE(rng::hash(1, 2, 3, 4), rng::hash(2, 2, 3, 4));
  EXPECT_EQ(rng::standard_normal(7, 1, 9, 3), rng::standard_normal(7, 1, 9, 3));
}

TEST(Rng, FillMatchesScalarDraws) {
  double out[7];
  rng::fill_standard_normal(11, 5, 42, out, 7);
  for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(out[j], rng::standard_normal(11, 5, 42, j));
}

TEST(Rng, UniformRanges) {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = rng::uniform_open(3, 1, i, 0);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double s = rng::uniform_symmetric(3, 1, i, 0);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(DirectionSampler, MomentsWithinThreeSigma) {
  const DirectionSampler s(123, 9);
  const std::size_t d = 4;
  const std::size_t n = 100000;
  Vector sum = Vector::Zero(d), sq = Vector::Zero(d);
  for (std::size_t k = 0; k < n; ++k) {
    const Vector xi = s.draw(k, d);
    sum += xi;
    sq += xi.cwiseAbs2();
  }
  for (std::size_t j = 0; j < d; ++j) {
    EXPECT_LT(std::abs(sum[j] / n), 3.0 / std::sqrt(n));
    // var of xi^2 is 2
    EXPECT_LT(std::abs(sq[j] / n - 1.0), 3.0 * std::sqrt(2.0 / n));
  }
}

TEST(DirectionSampler, IdenticalCoordinatesGiveIdenticalDirections) {
  const DirectionSampler a(5, 1), b(5, 1), c(5, 2);
  EXPECT_EQ(a.draw(17, 9), b.draw(17, 9));
  EXPECT_NE(a.draw(17, 9), c.draw(17, 9));
}

TEST(Spectrum, FlatAndPowerLaw) {
  EXPECT_EQ(realize(spectrum::Flat{1.0}, 3), (std::vector<double>{1, 1, 1}));
  const auto p = realize(spectrum::PowerLaw{1.0, 2.0}, 3);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_DOUBLE_EQ(p[1], 0.25);
  EXPECT_DOUBLE_EQ(p[2], 1.0 / 9.0);
}

TEST(Spectrum, PowerLawWithFloorTrace) {
  const auto e = realize(spectrum::PowerLawWithFloor{1.0, 3.0, 0.01}, 256);
  double tr = 0.0;
  for (double v : e) tr += v;
  // direct high-precision summation of 0.01 + i^-3
  EXPECT_NEAR(tr, 3.76204930350917805823653910268, 1e-13);
  EXPECT_DOUBLE_EQ(e.back(), 0.01 + 1.0 / (256.0 * 256.0 * 256.0));
}

TEST(Spectrum, RealizedListsAreNonIncreasingAndNonNegative) {
  for (const SpectrumSpec& s :
       {SpectrumSpec{spectrum::Flat{2.0}}, SpectrumSpec{spectrum::PowerLaw{3.0, 0.7}},
        SpectrumSpec{spectrum::PowerLawWithFloor{1.0, 3.0, 1e-3}}}) {
    const auto e = realize(s, 500);
    for (std::size_t i = 0; i < e.size(); ++i) {
      EXPECT_GE(e[i], 0.0);
      if (i) {
        EXPECT_LE(e[i], e[i - 1]);
      }
    }
  }
}

TEST(Spectrum, ExplicitLengthMismatchIsConfigError) {
  EXPECT_THROW(realize(spectrum::Explicit{{3, 2, 1}}, 4), ConfigError);
  EXPECT_THROW(realize(spectrum::Explicit{{1, 2}}, 2), ConfigError);
  EXPECT_THROW(realize(spectrum::Explicit{{1, -1}}, 2), ConfigError);
}

TEST(Spectrum, ParseAndFormatRoundTrip) {
  for (const std::string t : {"flat(1)", "powerlaw(1,2)", "powerlaw_floor(1,3,0.01)",
                              "explicit(4;1;0.5)"}) {
    const SpectrumSpec s = parse_spectrum(t);
    EXPECT_EQ(realize(parse_spectrum(to_string(s)), s.index() == 3 ? 3 : 5),
              realize(s, s.index() == 3 ? 3 : 5));
  }
  EXPECT_THROW(parse_spectrum("zigzag(1)"), ConfigError);
  EXPECT_THROW(parse_spectrum("powerlaw(1)"), ConfigError);
}

TEST(Spectrum, CsvIngestion) {
  const auto path = std::filesystem::temp_directory_path() / "zo_spectrum_test.csv";
  {
    std::ofstream out(path);
    out << "# top eigenvalues\n4\n\n1 # inline\n0.5\n";
  }
  EXPECT_EQ(read_spectrum_csv(path.string()), (std::vector<double>{4, 1, 0.5}));
  EXPECT_EQ(realize(spectrum::FromCsv{path.string()}, 3), (std::vector<double>{4, 1, 0.5}));
  EXPECT_THROW(realize(spectrum::FromCsv{path.string()}, 4), ConfigError);
  write_spectrum_csv(path.string(), {3, 2});
  EXPECT_EQ(read_spectrum_csv(path.string()), (std::vector<double>{3, 2}));
  std::filesystem::remove(path);
}

TEST(Spectrum, WithFloor) {
  const auto s = with_floor(spectrum::PowerLawWithFloor{1.0, 3.0, 0.01}, 0.5);
  EXPECT_DOUBLE_EQ(realize(s, 2)[1], 0.5 + 0.125);
  EXPECT_EQ(realize(with_floor(spectrum::Flat{1.0}, 0.2), 2), (std::vector<double>{0.2, 0.2}));
  EXPECT_THROW(with_floor(spectrum::Explicit{{1.0}}, 0.1), ConfigError);
}
