#include <cmath>

#include "recorder.hpp"
#include "zo/estimators.hpp"
#include "zo/rng.hpp"
#include "zo/solvers.hpp"

namespace zo {
namespace {

constexpr std::uint64_t kZhbStream = 0x5a4842;  // "ZHB"

RunTrace zhb_once(ZerothOrderOracle& o, const Vector& x0, const ZhbConfig& cfg,
                  std::uint64_t seed, const RunControl& control) {
  const double h = zhb_step(cfg);
  const double beta = zhb_momentum(cfg);
  const DirectionSampler sampler(seed, kZhbStream);
  detail::Recorder rec(control, o);
  RunTrace trace;

  Vector x = x0;
  Vector v = Vector::Zero(x0.size());
  Vector y = x0;
  Vector xi(x0.size());
  Vector x_next(x0.size());
  rec.record(trace, 0, x, &y);
  if (rec.reached(cfg.target_gap, x)) {
    rec.finish(trace, 0, x, Status::TargetReached, &y);
    return trace;
  }

  for (std::uint64_t n = 0; n < cfg.max_iters; ++n) {
    if (control.direction) {
      xi = control.direction(n);
    } else {
      sampler.draw_into(n, xi);
    }
    y = x + (1.0 - beta) * v;
    const double f0 = o.query(y);
    const double f1 = o.query(y + cfg.rho * xi);
    x_next = y - (h * (f1 - f0) / cfg.rho) * xi;
    v = x_next - x;
    x = x_next;
    const std::uint64_t done = n + 1;
    if (!all_finite(x)) {
      rec.finish(trace, done, x, Status::Diverged, &y);
      return trace;
    }
    if (rec.outside(x)) {
      rec.finish(trace, done, x, Status::LeftDomain, &y);
      return trace;
    }
    if (rec.reached(cfg.target_gap, x)) {
      rec.finish(trace, done, x, Status::TargetReached, &y);
      return trace;
    }
    if (rec.due(done)) rec.record(trace, done, x, &y);
  }
  rec.finish(trace, cfg.max_iters, x, Status::MaxIters, &y);
  return trace;
}

}  // namespace

double zhb_step(const ZhbConfig& cfg) {
  if (!(cfg.ed_half > 0.0) || !(cfg.c_step > 0.0)) {
    throw ConfigError("zhb: ed_half and c_step must be positive");
  }
  const double s = cfg.c_step * cfg.ed_half;
  return 1.0 / (s * s);
}

double zhb_momentum(const ZhbConfig& cfg) {
  if (!(cfg.mu > 0.0)) throw ConfigError("zhb: mu must be positive");
  const double beta = std::sqrt(zhb_step(cfg) * cfg.mu);
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ConfigError("zhb: momentum beta = sqrt(h mu) = " + std::to_string(beta) +
                      " outside (0, 1)");
  }
  return beta;
}

RunTrace zhb(ZerothOrderOracle& o, const Vector& x0, const ZhbConfig& cfg,
             const RunControl& control) {
  require_dim(x0, o.dim(), "zhb start");
  if (!(cfg.rho > 0.0)) throw ConfigError("zhb: rho must be positive");
  zhb_momentum(cfg);
  if (cfg.repeats <= 1) return zhb_once(o, x0, cfg, cfg.seed, control);

  const std::uint64_t start = o.calls();
  RunTrace best;
  bool have = false;
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t seed = r == 0 ? cfg.seed : rng::derive_seed(cfg.seed, r);
    RunTrace t = zhb_once(o, x0, cfg, seed, control);
    t.reported_value = all_finite(t.x_out) ? o.query(t.x_out) : kNaN;
    const bool better = std::isfinite(t.reported_value) &&
                        (!have || !std::isfinite(best.reported_value) ||
                         t.reported_value < best.reported_value);
    if (!have || better) {
      best = std::move(t);
      have = true;
    }
  }
  best.oracle_calls = o.calls() - start;
  return best;
}

RunTrace zhb_regularized(ZerothOrderOracle& o, const Vector& x0, double eps, double D,
                         ZhbConfig cfg, const RunControl& control) {
  if (!(eps > 0.0) || !(D > 0.0) || !std::isfinite(D)) {
    throw ConfigError("zhb_regularized: eps and D must be positive and finite");
  }
  const double c = eps / (D * D);
  RegularizedOracle g(o, c);
  cfg.mu = c;
  cfg.ed_half += static_cast<double>(o.dim()) * std::sqrt(c);
  return zhb(g, x0, cfg, control);
}

}  // namespace zo
