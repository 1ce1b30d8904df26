#include <algorithm>
#include <cmath>

#include "recorder.hpp"
#include "subproblem.hpp"
#include "zo/solvers.hpp"

namespace zo {

CubicTolerances cubic_tolerances(double eps, double H, double Delta, double margin) {
  if (!(eps > 0.0) || !(H > 0.0)) throw ConfigError("cubic tolerances: eps and H must be positive");
  const double delta = std::max(Delta, 0.0);
  const double k = 16.0 * std::cbrt(24.0 * delta / H) / std::sqrt(eps * H) + 1.0;
  CubicTolerances t;
  t.eps_C = margin * std::min({eps / (800.0 * k), eps / 800.0,
                               std::pow(eps / H, 1.5) / 2000.0});
  t.eps_D = margin * std::min(std::sqrt(eps / H) / (200.0 * k), std::sqrt(eps / (40000.0 * H)));
  return t;
}

namespace {

struct SearchResult {
  Vector y;
  double r = 0.0;
  std::size_t depth = 0;
  std::uint64_t inner = 0;
  bool ok = false;
};

class RadiusSearch {
 public:
  RadiusSearch(OracleHandle& o, const Vector& x, const ProblemMeta& meta, const CubicConfig& cfg,
               double eps_C, double grad_sq, double value_scale, std::uint64_t& solves)
      : o_(o),
        x_(x),
        meta_(meta),
        cfg_(cfg),
        eps_C_(eps_C),
        grad_sq_(grad_sq),
        value_scale_(value_scale),
        solves_(solves) {}

  // Returns whether ||y - x|| <= r.
  bool solve(double r, Vector& y) {
    ++depth_;
    const double rH = r * meta_.H;
    detail::TaylorSubproblem sp;
    sp.center = x_;
    sp.prox_weight = rH;
    sp.L = meta_.L;
    sp.H = meta_.H;
    sp.mu_sub = 0.5 * rH;
    sp.L_sub = meta_.L + rH;
    sp.ed_half = static_cast<double>(o_.dim()) * std::sqrt(meta_.L + rH);
    sp.tol = eps_C_;
    sp.initial_gap = grad_sq_ / (2.0 * sp.mu_sub);
    sp.value_scale = value_scale_;
    // Anything beyond 4r is classified as "> r"; stopping there also
    // bounds the cost of solves on indefinite models.
    sp.escape_radius = 4.0 * r;
    const auto res = detail::solve_subproblem(o_, sp, cfg_.sub, ++solves_);
    inner_ += res.iterations;
    y = res.y;
    if (res.escaped || res.diverged || !all_finite(y)) return false;
    return (y - x_).norm() <= r;
  }

  SearchResult run(double r_start) {
    SearchResult out;
    double r = r_start;
    double r_l = 0.0;
    double r_u = std::numeric_limits<double>::infinity();
    const double eps_D = eps_D_;
    Vector y;
    while (true) {
      if (depth_ >= cfg_.depth_cap) return fail(out);
      if (solve(r, y)) {
        r_u = r;
        r *= 0.5;
      } else {
        r_l = r;
        r *= 2.0;
      }
      if ((r_l > 0.0 && std::isfinite(r_u)) || r_u < eps_D) break;
    }
    while (r_u - r_l >= eps_D) {
      if (depth_ >= cfg_.depth_cap) return fail(out);
      r = 0.5 * (r_u + r_l);
      if (solve(r, y)) {
        r_u = r;
      } else {
        r_l = r;
      }
    }
    const bool inside = solve(r_u, y);
    out.y = y;
    out.r = r_u;
    out.depth = depth_;
    out.inner = inner_;
    out.ok = all_finite(y) && (inside || (y - x_).norm() <= 4.0 * r_u);
    return out;
  }

  void set_eps_D(double v) { eps_D_ = v; }

 private:
  SearchResult fail(SearchResult& out) {
    out.depth = depth_;
    out.inner = inner_;
    out.ok = false;
    return out;
  }

  OracleHandle& o_;
  const Vector& x_;
  const ProblemMeta& meta_;
  const CubicConfig& cfg_;
  double eps_C_;
  double eps_D_ = 0.0;
  double grad_sq_;
  double value_scale_;
  std::uint64_t& solves_;
  std::size_t depth_ = 0;
  std::uint64_t inner_ = 0;
};

}  // namespace

RunTrace cubic_zo(OracleHandle& o, const Vector& x0, const ProblemMeta& meta,
                  const CubicConfig& cfg, const RunControl& control) {
  require_dim(x0, o.dim(), "cubic_zo start");
  if (!(meta.H > 0.0) || !std::isfinite(meta.H)) throw ConfigError("cubic_zo: H must be positive");
  if (!(meta.L > 0.0) || !std::isfinite(meta.L)) throw ConfigError("cubic_zo: L must be positive");
  if (!(cfg.eps > 0.0) || !(cfg.r0 > 0.0)) throw ConfigError("cubic_zo: eps and r0 must be positive");
  if (cfg.eps_C && !(*cfg.eps_C > 0.0)) throw ConfigError("cubic_zo: eps_C must be positive");
  if (cfg.eps_D && !(*cfg.eps_D > 0.0)) throw ConfigError("cubic_zo: eps_D must be positive");

  const double stop_radius = std::sqrt(cfg.eps / meta.H);
  detail::Recorder rec(control, o);
  RunTrace trace;
  Vector x = x0;
  double r = cfg.r0;
  std::uint64_t solves = 0;
  rec.record(trace, 0, x);

  const double f0 = o.query(x0);
  double best = f0;
  double f_x = f0;
  std::size_t k = 0;
  while (r >= stop_radius) {
    if (k >= cfg.max_outer) {
      rec.finish(trace, k, x, Status::MaxIters);
      return trace;
    }
    if (k > 0) {
      f_x = o.query(x);
      best = std::min(best, f_x);
    }
    const double Delta = cfg.Delta.value_or(f0 - best);
    const auto tol = cubic_tolerances(cfg.eps, meta.H, Delta);
    const double eps_C = cfg.eps_C.value_or(tol.eps_C);
    const double eps_D = cfg.eps_D.value_or(tol.eps_D);

    // Scale of the subproblem's initial gap: ||grad||^2 from d+1 queries.
    const double g_prec = std::max(0.1 * cfg.eps, 1e-8);
    const Vector g = approximate_gradient(o, meta.L, x, g_prec);

    RadiusSearch search(o, x, meta, cfg, eps_C, g.squaredNorm(), std::abs(f_x), solves);
    search.set_eps_D(eps_D);
    const auto res = search.run(r);

    OuterRecord orec;
    orec.step = k + 1;
    orec.lambda = res.r;
    orec.depth = res.depth;
    orec.inner_iterations = res.inner;
    orec.bracket_hi = res.r;
    if (!res.ok) {
      orec.oracle_calls = rec.calls();
      trace.outer.push_back(orec);
      rec.finish(trace, k, x, Status::Diverged);
      return trace;
    }
    orec.bracket_value = (res.y - x).norm();
    orec.bracket_ok = orec.bracket_value <= res.r;
    x = res.y;
    r = res.r;
    ++k;
    orec.oracle_calls = rec.calls();
    if (control.gap) orec.f_gap = control.gap(x);
    trace.outer.push_back(orec);
    if (rec.outside(x)) {
      rec.finish(trace, k, x, Status::LeftDomain);
      return trace;
    }
    rec.record(trace, k, x);
  }
  rec.finish(trace, k, x, Status::TargetReached);
  return trace;
}

}  // namespace zo
