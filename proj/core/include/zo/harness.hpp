#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zo/config.hpp"
#include "zo/problems.hpp"
#include "zo/solvers.hpp"

namespace zo {

// ---------------------------------------------------------------------------
// CSV rows

struct ResultRow {
  std::string run_id;
  std::string solver;
  std::size_t d = 0;
  double mu = 0.0;
  double tr_A = 0.0;
  double ed_half = 0.0;
  Status status = Status::MaxIters;
  std::uint64_t iters = 0;
  std::uint64_t oracle_calls = 0;
  double final_gap = 0.0;
  std::int64_t wall_ns = 0;
};

/// Column order of the CSV schema.
const std::vector<std::string>& csv_columns();

/// Doubles are written with 17 significant digits so rows read back exactly.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);
std::vector<ResultRow> read_csv(const std::string& path);

/// Row formatted without wall_ns (determinism comparisons).
std::string stable_key(const ResultRow& row);

// ---------------------------------------------------------------------------
// Experiments

/// One realized sweep cell.
struct Cell {
  std::size_t index = 0;
  ProblemSpec problem;
  SolverKind solver = SolverKind::Rg;
};

std::vector<Cell> expand_cells(const ExperimentConfig& cfg);

/// Problem instance plus its ground truth, built from a ProblemSpec.
struct Instance {
  std::unique_ptr<Problem> problem;
  std::optional<double> f_star;
  /// minimizer used for the isotropic start (min-norm for singular quadratics)
  std::optional<Vector> x_star;
  double mu = kNaN;
  double tr_A = kNaN;
  double ed_half = kNaN;
};

Instance build_instance(const ProblemSpec& spec);

/// Start point for seed index `s` of a cell.
Vector start_point(const Instance& inst, const ProblemSpec& spec, std::uint64_t seed);

struct SingleRun {
  ResultRow row;
  RunTrace trace;
};

SingleRun run_single(const ExperimentConfig& cfg, const Cell& cell, std::size_t seed_index);

/// Worker count: ZO_THREADS when set, else hardware concurrency.
std::size_t worker_count();

/// All (cell, seed) rows in deterministic order.
std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, std::size_t threads = 0);

// ---------------------------------------------------------------------------
// Certification

struct Certificate {
  std::optional<bool> is_eps_optimal;
  bool is_ssp = false;
  double grad_norm = 0.0;
  double min_hessian_eig = 0.0;
  std::optional<double> gap;
};

Certificate certify(const Problem& p, const Vector& x, double eps, double delta,
                    std::size_t dense_cap = kDenseHessianCap);

// ---------------------------------------------------------------------------
// Scaling fits

enum class ScalingAxis { D, EdHalf, InvMuSqrt, TrOverMu };

ScalingAxis parse_axis(const std::string& s);
std::string to_string(ScalingAxis a);

struct CellSummary {
  std::string solver;
  std::size_t d = 0;
  double mu = 0.0;
  double tr_A = 0.0;
  double ed_half = 0.0;
  double x = 0.0;
  std::size_t runs = 0;
  std::size_t reached = 0;
  double median_calls = kNaN;
  double iqr_calls = kNaN;
  bool used = false;
};

struct ScalingReport {
  ScalingAxis axis = ScalingAxis::D;
  std::vector<CellSummary> cells;
  double slope = kNaN;
  double slope_stderr = kNaN;
  double intercept = kNaN;
  std::size_t points = 0;
};

/// Log-log least squares of median oracle calls against the axis, over
/// cells that reached the target in at least half their runs.
ScalingReport fit_scaling(const std::vector<ResultRow>& rows, ScalingAxis axis);

double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

// ---------------------------------------------------------------------------
// Moment validation

enum class CheckStatus { Pass, Fail, InsufficientPrecision };

std::string to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct MomentValidation {
  std::vector<CheckResult> checks;
  bool passed() const;
};

MomentValidation validate_moments(std::size_t d = 8, std::size_t n_samples = 200000,
                                  std::uint64_t seed = 0);

}  // namespace zo
