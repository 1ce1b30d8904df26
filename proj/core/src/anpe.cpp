#include <cmath>
#include <optional>

#include "recorder.hpp"
#include "subproblem.hpp"
#include "zo/solvers.hpp"

namespace zo {

double anpe_step_weight(double lambda, double A) {
  return 0.5 * (lambda + std::sqrt(lambda * lambda + 4.0 * lambda * A));
}

double anpe_eps_b_factor(double sigma, double sigma_u, double L, double lambda) {
  const double s2 = (sigma - sigma_u) * (sigma - sigma_u);
  return s2 / (2.0 * lambda * (L * lambda + 1.0 + s2) * (L + 1.0 / lambda));
}

namespace {

struct Candidate {
  Vector y;
  Vector x_tilde;
  double a = 0.0;
  double phi = 0.0;
  std::uint64_t inner = 0;
};

}  // namespace

RunTrace anpe_zo(OracleHandle& o, const Vector& x0, const ProblemMeta& meta,
                 const AnpeConfig& cfg, const RunControl& control) {
  require_dim(x0, o.dim(), "anpe_zo start");
  const double sigma_l = 0.5 * cfg.sigma_u;
  if (!(0.0 < sigma_l && sigma_l < cfg.sigma_u && cfg.sigma_u < cfg.sigma && cfg.sigma < 1.0)) {
    throw ConfigError("anpe_zo: need 0 < sigma_l < sigma_u < sigma < 1");
  }
  if (!(meta.L > 0.0) || !std::isfinite(meta.L)) throw ConfigError("anpe_zo: L must be finite");
  if (!std::isfinite(meta.H)) throw ConfigError("anpe_zo: H must be finite");
  const double H = std::max(meta.H, cfg.H_floor);
  const double L = meta.L;
  const bool need_D = !cfg.lambda0 || !cfg.eps_A;
  if (need_D && !(meta.D > 0.0 && std::isfinite(meta.D))) {
    throw ConfigError("anpe_zo: defaults for lambda0 and eps_A need a finite D > 0");
  }
  if (cfg.N == 0) throw ConfigError("anpe_zo: N must be positive");
  const double n15 = std::pow(static_cast<double>(cfg.N), 1.5);
  const double eps_A = cfg.eps_A.value_or(0.5 * meta.D / n15);
  double lambda =
      cfg.lambda0.value_or(sigma_l * std::sqrt(1.0 - cfg.sigma * cfg.sigma) / (16.0 * meta.D * H));
  if (!(lambda > 0.0) || !(eps_A > 0.0)) {
    throw ConfigError("anpe_zo: lambda0 and eps_A must be positive");
  }
  const double lo = 2.0 * sigma_l / H;
  const double hi = 2.0 * cfg.sigma_u / H;
  const auto d = static_cast<double>(o.dim());

  detail::Recorder rec(control, o);
  RunTrace trace;
  Vector x = x0;
  Vector y = x0;
  double A = 0.0;
  std::uint64_t solves = 0;
  rec.record(trace, 0, y);
  if (rec.reached(cfg.target_gap, y)) {
    rec.finish(trace, 0, y, Status::TargetReached);
    return trace;
  }

  for (std::size_t k = 0; k < cfg.N; ++k) {
    std::optional<double> lam_lo;  // phi too small
    std::optional<double> lam_hi;  // phi too large
    double lam = lambda;
    std::optional<Candidate> accepted;
    std::size_t depth = 0;
    std::uint64_t inner = 0;
    while (depth < cfg.depth_cap) {
      ++depth;
      Candidate c;
      c.a = anpe_step_weight(lam, A);
      c.x_tilde = (A * y + c.a * x) / (A + c.a);

      const double L_sub = L + 1.0 / lam;
      const double mu_sub = std::max(meta.mu, 0.0) + 1.0 / lam;
      // Gap of the subproblem at its center is at least ||g||^2 / (2 L_sub),
      // which makes eps_B computed from it a valid (smaller) tolerance.
      const Vector g = approximate_gradient(o, L, c.x_tilde, eps_A);
      const double g2 = g.squaredNorm();
      detail::TaylorSubproblem sp;
      sp.center = c.x_tilde;
      sp.prox_weight = 1.0 / lam;
      sp.L = L;
      sp.H = H;
      sp.mu_sub = mu_sub;
      sp.L_sub = L_sub;
      sp.ed_half = d * std::sqrt(L_sub);
      sp.tol = std::max(anpe_eps_b_factor(cfg.sigma, cfg.sigma_u, L, lam) * g2 / (2.0 * L_sub),
                        1e-300);
      sp.initial_gap = g2 / (2.0 * mu_sub);
      const auto res = detail::solve_subproblem(o, sp, cfg.sub, ++solves);
      inner += res.iterations;
      if (res.diverged || !all_finite(res.y)) break;
      c.y = res.y;
      c.phi = lam * (c.y - c.x_tilde).norm();
      c.inner = res.iterations;

      if (c.phi <= lo) {
        lam_lo = lam;
        lam = lam_hi ? std::sqrt(*lam_lo * *lam_hi) : 2.0 * lam;
      } else if (c.phi >= hi) {
        lam_hi = lam;
        lam = lam_lo ? std::sqrt(*lam_lo * *lam_hi) : 0.5 * lam;
      } else {
        accepted = std::move(c);
        break;
      }
    }

    OuterRecord orec;
    orec.step = k + 1;
    orec.depth = depth;
    orec.bracket_lo = lo;
    orec.bracket_hi = hi;
    orec.inner_iterations = inner;
    if (!accepted) {
      orec.lambda = lam;
      orec.oracle_calls = rec.calls();
      trace.outer.push_back(orec);
      rec.finish(trace, k, y, Status::Diverged);
      return trace;
    }

    const double a = accepted->a;
    const Vector v = approximate_gradient(o, L, accepted->y, eps_A / a);
    x -= a * v;
    A += a;
    y = accepted->y;
    lambda = lam;

    orec.lambda = lam;
    orec.a = a;
    orec.A = A;
    orec.bracket_value = accepted->phi;
    orec.bracket_ok = lo <= accepted->phi && accepted->phi <= hi;
    orec.oracle_calls = rec.calls();
    if (control.gap) orec.f_gap = control.gap(y);
    trace.outer.push_back(orec);

    const std::uint64_t done = k + 1;
    if (!all_finite(x) || !all_finite(y)) {
      rec.finish(trace, done, y, Status::Diverged);
      return trace;
    }
    if (rec.outside(y)) {
      rec.finish(trace, done, y, Status::LeftDomain);
      return trace;
    }
    if (rec.reached(cfg.target_gap, y)) {
      rec.finish(trace, done, y, Status::TargetReached);
      return trace;
    }
    rec.record(trace, done, y);
  }
  rec.finish(trace, cfg.N, y, Status::MaxIters);
  return trace;
}

}  // namespace zo
