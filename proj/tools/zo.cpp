// zo: command-line front end for the zeroth-order solvers and experiment harness.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zo/effdim.hpp"
#include "zo/harness.hpp"

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  bool paper_constants = false;
  std::optional<std::uint64_t> max_iters;
  bool quiet = false;
};

zo::ExperimentConfig make_config(const std::string& path, const std::vector<std::string>& sets,
                                 const Globals& g) {
  zo::ExperimentConfig cfg = path.empty() ? zo::ExperimentConfig{} : zo::load_config(path);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw zo::ConfigError("--set expects key=value, got '" + kv + "'");
    zo::apply_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) cfg.seed = *g.seed;
  if (g.paper_constants) cfg.solver.paper_constants = true;
  if (g.max_iters) zo::apply_key(cfg, "solver.max_iters", std::to_string(*g.max_iters));
  zo::validate(cfg);
  return cfg;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_solve(const std::string& config, const std::vector<std::string>& sets,
              const std::string& trace_out, const Globals& g) {
  const zo::ExperimentConfig cfg = make_config(config, sets, g);
  const auto cells = zo::expand_cells(cfg);
  const zo::SingleRun run = zo::run_single(cfg, cells.front(), 0);
  const auto& r = run.row;
  if (!g.quiet) {
    std::cout << "solver        " << r.solver << "\n"
              << "d             " << r.d << "\n"
              << "status        " << zo::to_string(r.status) << "\n"
              << "iterations    " << r.iters << "\n"
              << "oracle_calls  " << r.oracle_calls << "\n"
              << "final_gap     " << num(r.final_gap) << "\n"
              << "wall_ms       " << num(static_cast<double>(r.wall_ns) * 1e-6) << "\n";
    if (cfg.solver.kind == zo::SolverKind::Cubic) {
      const zo::Instance inst = zo::build_instance(cells.front().problem);
      const double eps = cfg.solver.cubic.eps;
      const double H = inst.problem->meta(run.trace.x_out).H;
      const auto c = zo::certify(*inst.problem, run.trace.x_out, eps, std::sqrt(H * eps));
      std::cout << "grad_norm     " << num(c.grad_norm) << "\n"
                << "min_hess_eig  " << num(c.min_hessian_eig) << "\n"
                << "is_ssp        " << (c.is_ssp ? "yes" : "no") << "\n";
    }
  }
  if (!trace_out.empty()) {
    std::ofstream out(trace_out);
    if (!out) throw zo::ConfigError("cannot write trace '" + trace_out + "'");
    out << "iteration,oracle_calls,f_gap,f_gap_y,grad_norm,wall_ns\n";
    for (const auto& t : run.trace.records) {
      out << t.iteration << ',' << t.oracle_calls << ',' << num(t.f_gap) << ','
          << num(t.f_gap_y) << ',' << num(t.grad_norm) << ',' << t.wall_ns << '\n';
    }
  }
  return 0;
}

int cmd_bench_run(const std::string& config, const std::vector<std::string>& sets,
                  const std::string& out, const Globals& g) {
  zo::ExperimentConfig cfg = make_config(config, sets, g);
  if (!out.empty()) cfg.output = out;
  if (cfg.output.empty()) throw zo::ConfigError("bench run: no output path (--out or run.output)");
  const auto parent = std::filesystem::path(cfg.output).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw zo::ConfigError("output directory does not exist: '" + parent.string() + "'");
  }
  const auto rows = zo::run_experiment(cfg);
  zo::write_csv(cfg.output, rows);
  if (!g.quiet) {
    std::size_t reached = 0;
    for (const auto& r : rows) reached += r.status == zo::Status::TargetReached;
    std::cout << rows.size() << " runs, " << reached << " reached target -> " << cfg.output
              << "\n";
  }
  return 0;
}

int cmd_bench_fit(const std::string& in, const std::string& axis, const std::string& solver,
                  const Globals& g) {
  auto rows = zo::read_csv(in);
  if (!solver.empty()) {
    std::erase_if(rows, [&](const zo::ResultRow& r) { return r.solver != solver; });
  }
  const zo::ScalingReport rep = zo::fit_scaling(rows, zo::parse_axis(axis));
  if (!g.quiet) {
    std::cout << "solver,d,mu,tr_A,ed_half,x,runs,reached,median_calls,iqr_calls,used\n";
    for (const auto& c : rep.cells) {
      std::cout << c.solver << ',' << c.d << ',' << num(c.mu) << ',' << num(c.tr_A) << ','
                << num(c.ed_half) << ',' << num(c.x) << ',' << c.runs << ',' << c.reached << ','
                << num(c.median_calls) << ',' << num(c.iqr_calls) << ',' << (c.used ? 1 : 0)
                << '\n';
    }
  }
  std::cout << "slope " << num(rep.slope) << " +- " << num(rep.slope_stderr) << " vs "
            << zo::to_string(rep.axis) << " over " << rep.points << " cells\n";
  return 0;
}

int cmd_effdim(const std::string& spectrum, double alpha, std::size_t d) {
  zo::SpectrumSpec spec = std::filesystem::is_regular_file(spectrum)
                              ? zo::SpectrumSpec{zo::spectrum::FromCsv{spectrum}}
                              : zo::parse_spectrum(spectrum);
  if (d == 0) {
    if (!std::holds_alternative<zo::spectrum::FromCsv>(spec) &&
        !std::holds_alternative<zo::spectrum::Explicit>(spec)) {
      throw zo::ConfigError("effdim: --d is required for generated spectra");
    }
    d = std::holds_alternative<zo::spectrum::Explicit>(spec)
            ? std::get<zo::spectrum::Explicit>(spec).eigenvalues.size()
            : zo::read_spectrum_csv(std::get<zo::spectrum::FromCsv>(spec).path).size();
  }
  const zo::EffDimReport rep = zo::effdim_report(spec, d, alpha);
  std::cout << "spectrum " << zo::to_string(spec) << "\n"
            << "d        " << d << "\n"
            << "alpha    " << num(alpha) << "\n";
  if (rep.exact) std::cout << "exact    " << std::to_string(*rep.exact) << "\n";
  for (const auto& [name, v] : rep.bounds) std::cout << name << " bound  " << num(v) << "\n";
  return 0;
}

int cmd_validate(std::size_t d, std::size_t n, const Globals& g) {
  const zo::MomentValidation v = zo::validate_moments(d, n, g.seed.value_or(0));
  for (const auto& c : v.checks) {
    if (g.quiet && c.status == zo::CheckStatus::Pass) continue;
    std::cout << zo::to_string(c.status) << ' ' << c.name << ": " << c.detail << '\n';
  }
  std::cout << (v.passed() ? "all checks passed" : "validation did not pass") << '\n';
  return v.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zeroth-order optimization with effective-dimension aware solvers"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "master seed");
  app.add_flag("--paper-constants", g.paper_constants, "use the theoretical step constants");
  app.add_option("--max-iters", g.max_iters, "iteration cap for rg / zhb");
  app.add_flag("-q,--quiet", g.quiet, "reduce output");

  std::string config, trace_out, out, in, axis = "d", solver_filter, spectrum_text;
  std::vector<std::string> sets;
  double alpha = 0.5;
  std::size_t d = 0;
  std::size_t vd = 8, vn = 200000;

  auto* solve = app.add_subcommand("solve", "run one configuration (first cell, first seed)");
  solve->add_option("-c,--config", config, "config file")->check(CLI::ExistingFile);
  solve->add_option("--set", sets, "key=value override (repeatable)");
  solve->add_option("--trace", trace_out, "write the iteration trace as CSV");

  auto* bench = app.add_subcommand("bench", "batch experiments");
  bench->require_subcommand(1);
  auto* run = bench->add_subcommand("run", "run every sweep cell and seed");
  run->add_option("-c,--config", config, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--set", sets, "key=value override (repeatable)");
  run->add_option("-o,--out", out, "output CSV");
  auto* fit = bench->add_subcommand("fit", "log-log scaling fit over a results CSV");
  fit->add_option("-i,--in", in, "results CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--axis", axis, "d | ed_half | inv_mu_sqrt | tr_over_mu");
  fit->add_option("--solver", solver_filter, "only rows of this solver");

  auto* effdim = app.add_subcommand("effdim", "effective dimension and its bounds");
  effdim->add_option("--spectrum", spectrum_text, "spectrum spec or eigenvalue CSV")->required();
  effdim->add_option("--alpha", alpha, "exponent");
  effdim->add_option("--d", d, "dimension (generated spectra)");

  auto* validate = app.add_subcommand("validate-moments", "Monte Carlo estimator checks");
  validate->add_option("--d", vd, "dimension (<= 32)");
  validate->add_option("--samples", vn, "samples per check");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return cmd_solve(config, sets, trace_out, g);
    if (*run) return cmd_bench_run(config, sets, out, g);
    if (*fit) return cmd_bench_fit(in, axis, solver_filter, g);
    if (*effdim) return cmd_effdim(spectrum_text, alpha, d);
    if (*validate) return cmd_validate(vd, vn, g);
  } catch (const zo::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
