#include <cmath>

#include "recorder.hpp"
#include "zo/estimators.hpp"
#include "zo/solvers.hpp"

namespace zo {
namespace {

constexpr std::uint64_t kRgStream = 0x5247;  // "RG"

}  // namespace

double rg_step(const RgConfig& cfg) {
  double h = cfg.h;
  if (cfg.step_mode == StepMode::PaperTrace) {
    if (!cfg.trace_A || !(*cfg.trace_A > 0.0)) {
      throw ConfigError("rg_rho: trace step mode needs a positive tr(A)");
    }
    h = 1.0 / (12.0 * *cfg.trace_A);
  }
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("rg_rho: step must be positive");
  return h;
}

RunTrace rg_rho(ZerothOrderOracle& o, const Vector& x0, const RgConfig& cfg,
                const RunControl& control) {
  require_dim(x0, o.dim(), "rg_rho start");
  const double h = rg_step(cfg);
  if (!(cfg.rho > 0.0)) throw ConfigError("rg_rho: rho must be positive");

  const DirectionSampler sampler(cfg.seed, kRgStream);
  detail::Recorder rec(control, o);
  RunTrace trace;
  Vector x = x0;
  Vector xi(x0.size());
  rec.record(trace, 0, x);
  if (rec.reached(cfg.target_gap, x)) {
    rec.finish(trace, 0, x, Status::TargetReached);
    return trace;
  }

  for (std::uint64_t k = 0; k < cfg.max_iters; ++k) {
    if (control.direction) {
      xi = control.direction(k);
    } else {
      sampler.draw_into(k, xi);
    }
    const double f0 = o.query(x);
    const double f1 = o.query(x + cfg.rho * xi);
    x -= (h * (f1 - f0) / cfg.rho) * xi;
    const std::uint64_t done = k + 1;
    if (!all_finite(x)) {
      rec.finish(trace, done, x, Status::Diverged);
      return trace;
    }
    if (rec.outside(x)) {
      rec.finish(trace, done, x, Status::LeftDomain);
      return trace;
    }
    if (rec.reached(cfg.target_gap, x)) {
      rec.finish(trace, done, x, Status::TargetReached);
      return trace;
    }
    if (rec.due(done)) rec.record(trace, done, x);
  }
  rec.finish(trace, cfg.max_iters, x, Status::MaxIters);
  return trace;
}

}  // namespace zo
