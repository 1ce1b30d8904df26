#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "zo/config.hpp"

using namespace zo;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesSectionsAndValues) {
  const auto cfg = parse_config(R"(
# sweep over spectra
[problem]
type = quadratic
spectrum = powerlaw_floor(1,3,0.01)   # decaying
d = 64
rotate = false
[solver]
name = zhb
c_step = 4
rho = 1e-7
[sweep]
mu = 0.01, 0.0025
[run]
seeds = 10
target_rel = 1e-3
)");
  EXPECT_EQ(cfg.problem.kind, ProblemKind::Quadratic);
  EXPECT_EQ(cfg.problem.d, 64u);
  EXPECT_FALSE(cfg.problem.rotate);
  EXPECT_EQ(cfg.solver.kind, SolverKind::Zhb);
  EXPECT_DOUBLE_EQ(cfg.solver.zhb.c_step, 4.0);
  EXPECT_TRUE(cfg.solver.rho_set);
  EXPECT_EQ(cfg.sweep.mu, (std::vector<double>{0.01, 0.0025}));
  EXPECT_EQ(cfg.seeds, 10u);
  ASSERT_TRUE(cfg.target_rel.has_value());
  EXPECT_DOUBLE_EQ(*cfg.target_rel, 1e-3);
  EXPECT_EQ(cell_count(cfg), 2u);
  EXPECT_NO_THROW(validate(cfg));
}

TEST(Config, DottedKeysWithoutSections) {
  const auto cfg = parse_config("problem.type = ridge\nproblem.link = logistic\nsolver.name = rg\n");
  EXPECT_EQ(cfg.problem.kind, ProblemKind::Ridge);
  EXPECT_EQ(cfg.problem.link, LinkKind::Logistic);
  EXPECT_FALSE(cfg.solver.rho_set);
}

TEST(Config, UnknownKeyIsNamed) {
  const auto msg = message_of([] { parse_config("[solver]\nstepsize = 3\n"); });
  EXPECT_NE(msg.find("solver.stepsize"), std::string::npos) << msg;
}

TEST(Config, BadValueIsNamed) {
  const auto msg = message_of([] { parse_config("problem.d = twelve\n"); });
  EXPECT_NE(msg.find("problem.d"), std::string::npos) << msg;
  EXPECT_NE(message_of([] { parse_config("solver.name = newton\n"); }), "");
  EXPECT_NE(message_of([] { parse_config("problem.spectrum = zigzag(1)\n"); }), "");
}

TEST(Config, DuplicateAndMalformedLines) {
  EXPECT_NE(message_of([] { parse_key_values("a = 1\na = 2\n"); }).find("duplicate"),
            std::string::npos);
  EXPECT_NE(message_of([] { parse_key_values("[problem\n"); }), "");
  EXPECT_NE(message_of([] { parse_key_values("just text\n"); }), "");
  const auto kv = parse_key_values("[s]\nk = v # c\n\n");
  EXPECT_EQ(kv.at("s.k"), "v");
}

TEST(Config, SubsolverRhoDisablesBalancing) {
  auto cfg = parse_config("sub.rho = 1e-5\n");
  EXPECT_FALSE(cfg.solver.anpe.sub.balanced_rho);
  EXPECT_FALSE(cfg.solver.cubic.sub.balanced_rho);
}

TEST(Config, CellCapAndExclusiveTargets) {
  auto cfg = parse_config("sweep.d = 1,2,3,4\nsweep.mu = 0.1,0.2,0.3\nrun.cell_cap = 10\n");
  EXPECT_EQ(cell_count(cfg), 12u);
  EXPECT_NE(message_of([&] { validate(cfg); }).find("run.cell_cap"), std::string::npos);
  auto both = parse_config("run.target_gap = 1\nrun.target_rel = 0.1\n");
  EXPECT_THROW(validate(both), ConfigError);
  auto zero = parse_config("run.seeds = 0\n");
  EXPECT_THROW(validate(zero), ConfigError);
}

TEST(Config, MissingSpectrumFileIsRejected) {
  auto cfg = parse_config("problem.spectrum = csv(/nonexistent/spectrum.csv)\n");
  EXPECT_NE(message_of([&] { validate(cfg); }).find("problem.spectrum"), std::string::npos);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "zo_config_test.ini";
  {
    std::ofstream out(path);
    out << "[problem]\nd = 5\n";
  }
  EXPECT_EQ(load_config(path.string()).problem.d, 5u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path.string()), ConfigError);
}

TEST(Config, EveryListedKeyIsAccepted) {
  ASSERT_FALSE(config_keys().empty());
  for (const auto& [key, help] : config_keys()) {
    EXPECT_FALSE(help.empty()) << key;
    const auto msg = message_of([&key] {
      ExperimentConfig c;
      apply_key(c, key, "");
    });
    EXPECT_EQ(msg.find("unknown config key"), std::string::npos) << key;
  }
}
