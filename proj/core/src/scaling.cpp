#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "zo/harness.hpp"

namespace zo {

ScalingAxis parse_axis(const std::string& s) {
  if (s == "d") return ScalingAxis::D;
  if (s == "ed_half") return ScalingAxis::EdHalf;
  if (s == "inv_mu_sqrt") return ScalingAxis::InvMuSqrt;
  if (s == "tr_over_mu") return ScalingAxis::TrOverMu;
  throw ConfigError("unknown scaling axis '" + s + "' (d, ed_half, inv_mu_sqrt, tr_over_mu)");
}

std::string to_string(ScalingAxis a) {
  switch (a) {
    case ScalingAxis::D: return "d";
    case ScalingAxis::EdHalf: return "ed_half";
    case ScalingAxis::InvMuSqrt: return "inv_mu_sqrt";
    case ScalingAxis::TrOverMu: return "tr_over_mu";
  }
  return "?";
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - w) + v[hi] * w;
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

namespace {

double axis_value(const CellSummary& c, ScalingAxis a) {
  switch (a) {
    case ScalingAxis::D: return static_cast<double>(c.d);
    case ScalingAxis::EdHalf: return c.ed_half;
    case ScalingAxis::InvMuSqrt: return 1.0 / std::sqrt(c.mu);
    case ScalingAxis::TrOverMu: return c.tr_A / c.mu;
  }
  return kNaN;
}

}  // namespace

ScalingReport fit_scaling(const std::vector<ResultRow>& rows, ScalingAxis axis) {
  ScalingReport rep;
  rep.axis = axis;
  using Key = std::tuple<std::string, std::size_t, double, double, double>;
  std::map<Key, std::size_t> index;
  std::vector<std::vector<double>> calls;
  for (const auto& r : rows) {
    const Key k{r.solver, r.d, r.mu, r.tr_A, r.ed_half};
    auto it = index.find(k);
    if (it == index.end()) {
      it = index.emplace(k, rep.cells.size()).first;
      CellSummary c;
      c.solver = r.solver;
      c.d = r.d;
      c.mu = r.mu;
      c.tr_A = r.tr_A;
      c.ed_half = r.ed_half;
      rep.cells.push_back(c);
      calls.emplace_back();
    }
    CellSummary& c = rep.cells[it->second];
    ++c.runs;
    if (r.status == Status::TargetReached) {
      ++c.reached;
      calls[it->second].push_back(static_cast<double>(r.oracle_calls));
    }
  }

  std::vector<double> lx, ly;
  std::set<double> distinct;
  for (std::size_t i = 0; i < rep.cells.size(); ++i) {
    CellSummary& c = rep.cells[i];
    c.x = axis_value(c, axis);
    if (!calls[i].empty()) {
      c.median_calls = median(calls[i]);
      c.iqr_calls = quantile(calls[i], 0.75) - quantile(calls[i], 0.25);
    }
    c.used = 2 * c.reached >= c.runs && c.reached > 0 && std::isfinite(c.x) && c.x > 0.0 &&
             c.median_calls > 0.0;
    if (c.used) {
      lx.push_back(std::log(c.x));
      ly.push_back(std::log(c.median_calls));
      distinct.insert(c.x);
    }
  }
  if (distinct.size() < 3) {
    throw Error("fit_scaling: need at least 3 distinct " + to_string(axis) +
                " values among cells reaching the target, have " +
                std::to_string(distinct.size()));
  }

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  rep.slope = sxy / sxx;
  rep.intercept = my - rep.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - rep.intercept - rep.slope * lx[i];
    ssr += e * e;
  }
  rep.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  rep.points = lx.size();
  return rep;
}

}  // namespace zo
