#include "subproblem.hpp"

#include <algorithm>
#include <cmath>

#include "zo/rng.hpp"

namespace zo::detail {

std::uint64_t subproblem_budget(double beta, double kappa, double reduction,
                                const SubsolverConfig& cfg) {
  const double ratio = cfg.log_slack * std::max(1.0, kappa) / std::max(reduction, 1e-300);
  const double logs = std::log(std::max(ratio, std::exp(1.0)));
  const double n = std::ceil(cfg.rate_factor / beta * logs);
  if (!std::isfinite(n)) return cfg.max_iters;
  return std::clamp(static_cast<std::uint64_t>(n), cfg.min_iters, cfg.max_iters);
}

SubproblemResult solve_subproblem(OracleHandle& o, const TaylorSubproblem& sp,
                                  const SubsolverConfig& cfg, std::uint64_t seed) {
  SubproblemResult out;
  out.delta = std::max(cfg.delta_min, cfg.delta_fraction * sp.tol);

  TaylorModelOracle::Params params;
  params.L = sp.L;
  params.H = sp.H;
  params.delta = out.delta;
  params.prox_weight = sp.prox_weight;
  params.rounding_floor = cfg.rounding_floor;
  params.value_scale = sp.value_scale;
  params.asoe.max_displacement = cfg.max_displacement;
  TaylorModelOracle model(o, sp.center, params);

  ZhbConfig z = cfg.zhb;
  z.mu = sp.mu_sub;
  z.ed_half = sp.ed_half;
  z.seed = rng::derive_seed(cfg.zhb.seed, seed);
  z.target_gap.reset();
  if (cfg.balanced_rho) {
    const auto d = static_cast<double>(sp.center.size());
    z.rho = std::sqrt(out.delta / (d * sp.L_sub));
  }
  const double beta = zhb_momentum(z);
  const double reduction = sp.initial_gap > 0.0 ? sp.tol / sp.initial_gap : 1.0;
  out.budget = subproblem_budget(beta, sp.L_sub / sp.mu_sub, reduction, cfg);
  z.max_iters = out.budget;

  RunControl control;
  control.stride = std::numeric_limits<std::size_t>::max();
  const Vector c = sp.center;
  const double esc = sp.escape_radius;
  if (std::isfinite(esc)) {
    control.in_domain = [c, esc](const Vector& y) { return (y - c).norm() <= esc; };
  }

  RunTrace t;
  try {
    t = zhb(model, sp.center, z, control);
  } catch (const NumericalError&) {
    out.diverged = true;
    out.y = sp.center;
    return out;
  }
  out.iterations = t.iterations;
  out.y = t.x_out;
  out.escaped = t.status == Status::LeftDomain;
  out.diverged = t.status == Status::Diverged;
  return out;
}

}  // namespace zo::detail
