#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <Eigen/Eigenvalues>

#include "zo/effdim.hpp"
#include "zo/harness.hpp"
#include "zo/rng.hpp"

namespace zo {
namespace {

constexpr std::uint64_t kStartStream = 0x5354415254;  // "START"

template <class T>
std::vector<T> or_base(const std::vector<T>& axis, const T& base) {
  return axis.empty() ? std::vector<T>{base} : axis;
}

// Minimum-norm minimizer of a quadratic when it exists.
std::optional<Vector> min_norm_minimizer(const QuadraticProblem& q) {
  if (!q.optimal_value()) return std::nullopt;
  const Vector c = q.rotation().apply_transpose(q.linear_term());
  Vector z = Vector::Zero(c.size());
  const auto& eigs = q.eigenvalues();
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double l = eigs[static_cast<std::size_t>(i)];
    if (l > 0.0) z[i] = -c[i] / l;
  }
  return q.rotation().apply(z);
}

std::uint64_t run_seed(const ExperimentConfig& cfg, const Cell& cell, std::size_t s) {
  return rng::derive_seed(rng::derive_seed(cfg.seed, cell.index), s);
}

}  // namespace

std::vector<Cell> expand_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  const auto spectra = or_base(cfg.sweep.spectrum, cfg.problem.spectrum);
  const auto dims = or_base(cfg.sweep.d, cfg.problem.d);
  const auto solvers = or_base(cfg.sweep.solver, cfg.solver.kind);
  for (const auto& spec : spectra) {
    for (std::size_t d : dims) {
      const std::vector<std::optional<double>> mus = [&] {
        std::vector<std::optional<double>> out;
        if (cfg.sweep.mu.empty()) out.emplace_back(std::nullopt);
        for (double m : cfg.sweep.mu) out.emplace_back(m);
        return out;
      }();
      for (const auto& mu : mus) {
        for (SolverKind s : solvers) {
          Cell c;
          c.index = cells.size();
          c.problem = cfg.problem;
          c.problem.spectrum = mu ? with_floor(spec, *mu) : spec;
          c.problem.d = d;
          c.solver = s;
          cells.push_back(std::move(c));
        }
      }
    }
  }
  return cells;
}

Instance build_instance(const ProblemSpec& spec) {
  Instance inst;
  switch (spec.kind) {
    case ProblemKind::Quadratic: {
      auto q = std::make_unique<QuadraticProblem>(
          make_quadratic(spec.spectrum, spec.d, spec.seed, spec.rotate, spec.b_mode,
                         spec.reflectors));
      inst.f_star = q->optimal_value();
      inst.x_star = min_norm_minimizer(*q);
      inst.mu = q->mu();
      inst.tr_A = q->trace();
      inst.ed_half = ed_exact(q->eigenvalues(), 0.5);
      inst.problem = std::move(q);
      break;
    }
    case ProblemKind::Ridge: {
      auto r = std::make_unique<RidgeSeparableProblem>(
          make_ridge(spec.d, spec.samples, spec.link, spec.seed, spec.R));
      const Matrix S = r->L0() * r->second_moment();
      Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
      std::vector<double> eigs;
      for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
        eigs.push_back(std::max(0.0, es.eigenvalues()[i]));
      }
      inst.tr_A = S.trace();
      inst.ed_half = ed_exact(eigs, 0.5);
      inst.mu = r->meta(Vector::Zero(static_cast<Eigen::Index>(spec.d))).mu;
      if (spec.link == LinkKind::Squared) {
        inst.f_star = 0.0;
        inst.x_star = Vector::Zero(static_cast<Eigen::Index>(spec.d));
      }
      inst.problem = std::move(r);
      break;
    }
    case ProblemKind::Quartic: {
      const double c4 = 1.0;
      const double c2 = 1.0;
      const double R2 = spec.domain_radius * spec.domain_radius;
      inst.problem = std::make_unique<QuarticNormProblem>(spec.d, c4, c2, spec.domain_radius);
      inst.f_star = 0.0;
      inst.x_star = Vector::Zero(static_cast<Eigen::Index>(spec.d));
      inst.mu = c2;
      const double dm1 = static_cast<double>(spec.d) - 1.0;
      inst.tr_A = dm1 * (c2 + c4 * R2) + (c2 + 3.0 * c4 * R2);
      inst.ed_half = dm1 * std::sqrt(c2 + c4 * R2) + std::sqrt(c2 + 3.0 * c4 * R2);
      break;
    }
    case ProblemKind::Nonconvex: {
      const auto n = static_cast<Eigen::Index>(spec.d);
      HouseholderRotation rot = spec.rotate
                                    ? HouseholderRotation(spec.d, spec.reflectors, spec.seed)
                                    : HouseholderRotation();
      auto p = std::make_unique<NonconvexTestProblem>(Vector::Ones(n), Vector::Ones(n), rot,
                                                      spec.domain_radius);
      inst.f_star = p->optimal_value();
      // Starts are drawn around the saddle at the origin.
      inst.x_star = Vector::Zero(n);
      inst.mu = 0.0;
      inst.problem = std::move(p);
      break;
    }
  }
  return inst;
}

Vector start_point(const Instance& inst, const ProblemSpec& spec, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(spec.d);
  if (spec.start == StartKind::Zero) return Vector::Zero(n);
  Vector u(n);
  rng::fill_standard_normal(seed, kStartStream, 0, u.data(), spec.d);
  u /= u.norm();
  const Vector anchor = inst.x_star ? *inst.x_star : Vector::Zero(n);
  return anchor + spec.x0_radius * u;
}

SingleRun run_single(const ExperimentConfig& cfg, const Cell& cell, std::size_t seed_index) {
  const std::uint64_t seed = run_seed(cfg, cell, seed_index);
  const Instance inst = build_instance(cell.problem);
  const Problem& p = *inst.problem;
  const Vector x0 = start_point(inst, cell.problem, seed);
  OracleHandle oracle(p);

  RunControl control;
  if (inst.f_star) {
    const double fs = *inst.f_star;
    control.gap = [&p, fs](const Vector& x) { return p.value(x) - fs; };
  }
  if (std::isfinite(p.domain_radius())) {
    const double R = p.domain_radius();
    control.in_domain = [R](const Vector& x) { return x.norm() <= R; };
  }
  std::optional<double> target = cfg.target_gap;
  if (cfg.target_rel && inst.f_star) target = *cfg.target_rel * (p.value(x0) - *inst.f_star);

  const bool theory_c = cfg.solver.paper_constants;
  const double rho = cfg.solver.rho_set ? cfg.solver.rg.rho : 1e-6 * std::max(1.0, x0.norm());
  RunTrace trace;
  switch (cell.solver) {
    case SolverKind::Rg: {
      RgConfig r = cfg.solver.rg;
      r.rho = rho;
      if (r.step_mode == StepMode::PaperTrace) r.trace_A = inst.tr_A;
      r.seed = seed;
      r.target_gap = target;
      trace = rg_rho(oracle, x0, r, control);
      break;
    }
    case SolverKind::Zhb: {
      ZhbConfig z = cfg.solver.zhb;
      z.rho = rho;
      z.mu = inst.mu;
      z.ed_half = inst.ed_half;
      if (theory_c) z.c_step = kTheoreticalZhbStepConstant;
      z.seed = seed;
      z.target_gap = target;
      trace = zhb(oracle, x0, z, control);
      break;
    }
    case SolverKind::ZhbRegularized: {
      ZhbConfig z = cfg.solver.zhb;
      z.rho = rho;
      z.ed_half = inst.ed_half;
      if (theory_c) z.c_step = kTheoreticalZhbStepConstant;
      z.seed = seed;
      z.target_gap = target;
      double D = cfg.solver.reg_D.value_or(kNaN);
      if (!cfg.solver.reg_D) {
        if (!inst.x_star) throw ConfigError("zhb_regularized: set solver.D for this problem");
        D = (x0 - *inst.x_star).norm();
      }
      trace = zhb_regularized(oracle, x0, cfg.solver.reg_eps, D, z, control);
      break;
    }
    case SolverKind::Anpe: {
      AnpeConfig a = cfg.solver.anpe;
      a.target_gap = target;
      a.sub.zhb.seed = seed;
      if (theory_c) a.sub.zhb.c_step = kTheoreticalZhbStepConstant;
      trace = anpe_zo(oracle, x0, p.meta(x0), a, control);
      break;
    }
    case SolverKind::Cubic: {
      CubicConfig c = cfg.solver.cubic;
      c.sub.zhb.seed = seed;
      if (theory_c) c.sub.zhb.c_step = kTheoreticalZhbStepConstant;
      trace = cubic_zo(oracle, x0, p.meta(x0), c, control);
      break;
    }
  }
  if (trace.oracle_calls != oracle.calls()) {
    throw Error("oracle audit failed: trace reports " + std::to_string(trace.oracle_calls) +
                " calls, handle counted " + std::to_string(oracle.calls()));
  }

  SingleRun out;
  char id[48];
  std::snprintf(id, sizeof id, "c%04zu-s%03zu", cell.index, seed_index);
  out.row.run_id = id;
  out.row.solver = to_string(cell.solver);
  out.row.d = cell.problem.d;
  out.row.mu = inst.mu;
  out.row.tr_A = inst.tr_A;
  out.row.ed_half = inst.ed_half;
  out.row.status = trace.status;
  out.row.iters = trace.iterations;
  out.row.oracle_calls = trace.oracle_calls;
  out.row.final_gap = trace.final_gap.value_or(kNaN);
  out.row.wall_ns = trace.wall_ns;
  out.trace = std::move(trace);
  return out;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("ZO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, std::size_t threads) {
  validate(cfg);
  const auto cells = expand_cells(cfg);
  const std::size_t tasks = cells.size() * cfg.seeds;
  std::vector<ResultRow> rows(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      try {
        rows[t] = run_single(cfg, cells[t / cfg.seeds], t % cfg.seeds).row;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  const std::size_t n = std::max<std::size_t>(1, std::min(threads ? threads : worker_count(), tasks));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

}  // namespace zo
