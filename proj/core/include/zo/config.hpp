#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zo/solvers.hpp"
#include "zo/spectrum.hpp"

namespace zo {

enum class ProblemKind { Quadratic, Ridge, Quartic, Nonconvex };
enum class SolverKind { Rg, Zhb, ZhbRegularized, Anpe, Cubic };
enum class StartKind { Isotropic, Zero };

std::string to_string(ProblemKind k);
std::string to_string(SolverKind k);
SolverKind parse_solver(const std::string& s);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Quadratic;
  SpectrumSpec spectrum = spectrum::Flat{1.0};
  std::size_t d = 8;
  std::uint64_t seed = 1;
  bool rotate = true;
  std::size_t reflectors = 2;
  BMode b_mode = BMode::Zero;
  /// x0 = x* + x0_radius * u (u uniform on the sphere), or the origin
  StartKind start = StartKind::Isotropic;
  double x0_radius = 1.0;
  // ridge
  LinkKind link = LinkKind::Squared;
  std::size_t samples = 64;
  double R = 1.0;
  // quartic / nonconvex fixtures
  double domain_radius = 2.0;
};

struct SolverSpec {
  SolverKind kind = SolverKind::Rg;
  RgConfig rg{};
  ZhbConfig zhb{};
  /// zhb_regularized: eps and D (D defaults to ||x0 - x*_min-norm|| where known)
  double reg_eps = 1e-2;
  std::optional<double> reg_D;
  AnpeConfig anpe{};
  CubicConfig cubic{};
  bool paper_constants = false;
  /// false: rg / zhb use rho = 1e-6 max(1, ||x0||)
  bool rho_set = false;
};

/// Values per sweep axis; an empty axis uses the base value.
struct SweepSpec {
  std::vector<std::size_t> d;
  std::vector<double> mu;
  std::vector<SpectrumSpec> spectrum;
  std::vector<SolverKind> solver;
};

struct ExperimentConfig {
  ProblemSpec problem{};
  SolverSpec solver{};
  SweepSpec sweep{};
  std::size_t seeds = 1;
  std::uint64_t seed = 0;
  /// absolute gap target, or relative to f(x0) - f*
  std::optional<double> target_gap;
  std::optional<double> target_rel;
  std::size_t cell_cap = 512;
  std::string output;
};

/// Raw dotted key = value pairs. "[section]" lines prefix following keys;
/// '#' starts a comment.
std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& origin = "config");

/// Applies one key. Throws ConfigError naming the key when it is unknown or
/// its value does not parse.
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig parse_config(const std::string& text, const std::string& origin = "config");
ExperimentConfig load_config(const std::string& path);

/// Every accepted key with a one-line description.
const std::vector<std::pair<std::string, std::string>>& config_keys();

/// Checks cross-key constraints (cell cap, referenced files).
void validate(const ExperimentConfig& cfg);

std::size_t cell_count(const ExperimentConfig& cfg);

}  // namespace zo
