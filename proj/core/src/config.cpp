#include "zo/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace zo {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ConfigError("config key '" + key + "': cannot parse '" + value + "' as " + expected);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, raw, "a number");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    bad_value(key, raw, "a non-negative integer");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string v = lower(trim(raw));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, raw, "a boolean");
}

std::vector<std::string> split(const std::string& raw, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

SpectrumSpec to_spectrum(const std::string& key, const std::string& raw) {
  try {
    return parse_spectrum(raw);
  } catch (const ConfigError& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

using Setter = std::function<void(ExperimentConfig&, const std::string& key, const std::string&)>;

struct KeyDef {
  std::string name;
  std::string help;
  Setter set;
};

const std::vector<KeyDef>& key_table() {
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> t;
    auto add = [&](std::string name, std::string help, Setter s) {
      t.push_back({std::move(name), std::move(help), std::move(s)});
    };
    // problem
    add("problem.type", "quadratic | ridge | quartic | nonconvex",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          const auto s = lower(trim(v));
          if (s == "quadratic") c.problem.kind = ProblemKind::Quadratic;
          else if (s == "ridge") c.problem.kind = ProblemKind::Ridge;
          else if (s == "quartic") c.problem.kind = ProblemKind::Quartic;
          else if (s == "nonconvex") c.problem.kind = ProblemKind::Nonconvex;
          else bad_value(k, v, "a problem type");
        });
    add("problem.spectrum", "spectrum, e.g. flat(1), powerlaw_floor(1,3,0.01), csv(path)",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.problem.spectrum = to_spectrum(k, v);
        });
    add("problem.d", "dimension", [](ExperimentConfig& c, const std::string& k,
                                     const std::string& v) { c.problem.d = to_uint(k, v); });
    add("problem.seed", "problem generator seed",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.problem.seed = to_uint(k, v);
        });
    add("problem.rotate", "apply a Householder rotation to quadratics",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.problem.rotate = to_bool(k, v);
        });
    add("problem.reflectors", "number of Householder reflectors",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.problem.reflectors = to_uint(k, v);
        });
    add("problem.b", "linear term: zero | random_unit",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          const auto s = lower(trim(v));
          if (s == "zero") c.problem.b_mode = BMode::Zero;
          else if (s == "random_unit") c.problem.b_mode = BMode::RandomUnit;
          else bad_value(k, v, "zero or random_unit");
        });
    add("problem.x0", "start: isotropic (x* + radius * random unit) | zero",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          const auto s = lower(trim(v));
          if (s == "isotropic") c.problem.start = StartKind::Isotropic;
          else if (s == "zero") c.problem.start = StartKind::Zero;
          else bad_value(k, v, "isotropic or zero");
        });
    add("problem.x0_radius", "distance of the isotropic start from x*",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.problem.x0_radius = to_double(k, v);
        });
    add("problem.link", "ridge link: squared | logistic",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          const auto s = lower(trim(v));
          if (s == "squared") c.problem.link = LinkKind::Squared;
          else if (s == "logistic") c.problem.link = LinkKind::Logistic;
          else bad_value(k, v, "squared or logistic");
        });
    add("problem.samples", "ridge sample count N",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.problem.samples = to_uint(k, v);
        });
    add("problem.R", "ridge row-norm bound", [](ExperimentConfig& c, const std::string& k,
                                                const std::string& v) { c.problem.R = to_double(k, v); });
    add("problem.domain_radius", "certified ball radius for quartic / nonconvex fixtures",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.problem.domain_radius = to_double(k, v);
        });
    // solver
    add("solver.name", "rg | zhb | zhb_regularized | anpe | cubic",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          try {
            c.solver.kind = parse_solver(v);
          } catch (const ConfigError&) {
            bad_value(k, v, "a solver name");
          }
        });
    add("solver.rho", "smoothing radius for rg / zhb (default 1e-6 max(1, |x0|))",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.rg.rho = c.solver.zhb.rho = to_double(k, v);
          c.solver.rho_set = true;
        });
    add("solver.max_iters", "iteration cap for rg / zhb",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.rg.max_iters = c.solver.zhb.max_iters = to_uint(k, v);
        });
    add("solver.step", "rg step: 'paper' for 1/(12 tr A), or a number",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          if (lower(trim(v)) == "paper") {
            c.solver.rg.step_mode = StepMode::PaperTrace;
          } else {
            c.solver.rg.step_mode = StepMode::Manual;
            c.solver.rg.h = to_double(k, v);
          }
        });
    add("solver.c_step", "zhb step constant (h = 1/(c ED_1/2)^2)",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.zhb.c_step = to_double(k, v);
        });
    add("solver.repeats", "zhb independent repeats",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.zhb.repeats = to_uint(k, v);
        });
    add("solver.paper_constants", "use the theoretical zhb step constant (14400)",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.paper_constants = to_bool(k, v);
        });
    add("solver.eps", "zhb_regularized target eps",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.reg_eps = to_double(k, v);
        });
    add("solver.D", "zhb_regularized distance bound D",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.reg_D = to_double(k, v);
        });
    // anpe
    add("anpe.sigma", "sigma", [](ExperimentConfig& c, const std::string& k,
                                  const std::string& v) { c.solver.anpe.sigma = to_double(k, v); });
    add("anpe.sigma_u", "sigma_u (sigma_l = sigma_u / 2)",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.anpe.sigma_u = to_double(k, v);
        });
    add("anpe.N", "outer iterations", [](ExperimentConfig& c, const std::string& k,
                                         const std::string& v) { c.solver.anpe.N = to_uint(k, v); });
    add("anpe.lambda0", "initial lambda",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.anpe.lambda0 = to_double(k, v);
        });
    add("anpe.eps_A", "gradient precision eps_A",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.anpe.eps_A = to_double(k, v);
        });
    add("anpe.H_floor", "floor on H", [](ExperimentConfig& c, const std::string& k,
                                         const std::string& v) { c.solver.anpe.H_floor = to_double(k, v); });
    // cubic
    add("cubic.eps", "target eps", [](ExperimentConfig& c, const std::string& k,
                                      const std::string& v) { c.solver.cubic.eps = to_double(k, v); });
    add("cubic.r0", "initial radius", [](ExperimentConfig& c, const std::string& k,
                                         const std::string& v) { c.solver.cubic.r0 = to_double(k, v); });
    add("cubic.eps_C", "subproblem tolerance",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.cubic.eps_C = to_double(k, v);
        });
    add("cubic.eps_D", "bisection tolerance",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.cubic.eps_D = to_double(k, v);
        });
    add("cubic.Delta", "upper estimate of f(x0) - f*",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.cubic.Delta = to_double(k, v);
        });
    add("cubic.max_outer", "outer iteration cap",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.cubic.max_outer = to_uint(k, v);
        });
    // inner solves (shared by anpe and cubic)
    auto subs = [](ExperimentConfig& c) {
      return std::array<SubsolverConfig*, 2>{&c.solver.anpe.sub, &c.solver.cubic.sub};
    };
    add("sub.rho", "inner zhb smoothing radius (default: balanced against the asoe accuracy)",
        [subs](ExperimentConfig& c, const std::string& k, const std::string& v) {
          for (auto* s : subs(c)) {
            s->zhb.rho = to_double(k, v);
            s->balanced_rho = false;
          }
        });
    add("sub.c_step", "inner zhb step constant",
        [subs](ExperimentConfig& c, const std::string& k, const std::string& v) {
          for (auto* s : subs(c)) s->zhb.c_step = to_double(k, v);
        });
    add("sub.rate_factor", "inner iteration budget factor",
        [subs](ExperimentConfig& c, const std::string& k, const std::string& v) {
          for (auto* s : subs(c)) s->rate_factor = to_double(k, v);
        });
    add("sub.max_iters", "inner iteration cap",
        [subs](ExperimentConfig& c, const std::string& k, const std::string& v) {
          for (auto* s : subs(c)) s->max_iters = to_uint(k, v);
        });
    add("sub.delta_fraction", "asoe delta as a fraction of the inner tolerance",
        [subs](ExperimentConfig& c, const std::string& k, const std::string& v) {
          for (auto* s : subs(c)) s->delta_fraction = to_double(k, v);
        });
    add("sub.max_displacement", "asoe probe cap relative to the step length (inf = none)",
        [subs](ExperimentConfig& c, const std::string& k, const std::string& v) {
          for (auto* s : subs(c)) s->max_displacement = to_double(k, v);
        });
    // sweep
    add("sweep.d", "comma-separated dimensions",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.sweep.d.clear();
          for (const auto& s : split(v, ',')) c.sweep.d.push_back(to_uint(k, s));
        });
    add("sweep.mu", "comma-separated strong-convexity floors",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.sweep.mu.clear();
          for (const auto& s : split(v, ',')) c.sweep.mu.push_back(to_double(k, s));
        });
    add("sweep.spectrum", "'|'-separated spectra",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.sweep.spectrum.clear();
          for (const auto& s : split(v, '|')) c.sweep.spectrum.push_back(to_spectrum(k, s));
        });
    add("sweep.solver", "comma-separated solver names",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.sweep.solver.clear();
          for (const auto& s : split(v, ',')) {
            try {
              c.sweep.solver.push_back(parse_solver(s));
            } catch (const ConfigError&) {
              bad_value(k, s, "a solver name");
            }
          }
        });
    // run
    add("run.seeds", "seeds per cell", [](ExperimentConfig& c, const std::string& k,
                                          const std::string& v) { c.seeds = to_uint(k, v); });
    add("run.seed", "base seed", [](ExperimentConfig& c, const std::string& k,
                                    const std::string& v) { c.seed = to_uint(k, v); });
    add("run.target_gap", "absolute gap target",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.target_gap = to_double(k, v);
        });
    add("run.target_rel", "gap target relative to f(x0) - f*",
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.target_rel = to_double(k, v);
        });
    add("run.cell_cap", "maximum sweep cells", [](ExperimentConfig& c, const std::string& k,
                                                  const std::string& v) { c.cell_cap = to_uint(k, v); });
    add("run.output", "CSV output path",
        [](ExperimentConfig& c, const std::string&, const std::string& v) { c.output = trim(v); });
    return t;
  }();
  return table;
}

}  // namespace

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Quadratic:
      return "quadratic";
    case ProblemKind::Ridge:
      return "ridge";
    case ProblemKind::Quartic:
      return "quartic";
    case ProblemKind::Nonconvex:
      return "nonconvex";
  }
  return "unknown";
}

std::string to_string(SolverKind k) {
  switch (k) {
    case SolverKind::Rg:
      return "rg";
    case SolverKind::Zhb:
      return "zhb";
    case SolverKind::ZhbRegularized:
      return "zhb_regularized";
    case SolverKind::Anpe:
      return "anpe";
    case SolverKind::Cubic:
      return "cubic";
  }
  return "unknown";
}

SolverKind parse_solver(const std::string& raw) {
  const auto s = lower(trim(raw));
  if (s == "rg") return SolverKind::Rg;
  if (s == "zhb") return SolverKind::Zhb;
  if (s == "zhb_regularized") return SolverKind::ZhbRegularized;
  if (s == "anpe") return SolverKind::Anpe;
  if (s == "cubic") return SolverKind::Cubic;
  throw ConfigError("unknown solver '" + raw + "'");
}

std::map<std::string, std::string> parse_key_values(const std::string& text,
                                                    const std::string& origin) {
  std::map<std::string, std::string> out;
  std::stringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (out.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    out[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& def : key_table()) {
    if (def.name == key) {
      def.set(cfg, key, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  for (const auto& [k, v] : parse_key_values(text, origin)) apply_key(cfg, k, v);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto cfg = parse_config(ss.str(), path);
  validate(cfg);
  return cfg;
}

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& def : key_table()) out.emplace_back(def.name, def.help);
    return out;
  }();
  return keys;
}

std::size_t cell_count(const ExperimentConfig& cfg) {
  auto n = [](std::size_t s) { return s == 0 ? std::size_t{1} : s; };
  return n(cfg.sweep.d.size()) * n(cfg.sweep.mu.size()) * n(cfg.sweep.spectrum.size()) *
         n(cfg.sweep.solver.size());
}

void validate(const ExperimentConfig& cfg) {
  const std::size_t cells = cell_count(cfg);
  if (cells > cfg.cell_cap) {
    throw ConfigError("sweep has " + std::to_string(cells) + " cells, above run.cell_cap = " +
                      std::to_string(cfg.cell_cap));
  }
  if (cfg.seeds == 0) throw ConfigError("config key 'run.seeds' must be positive");
  auto check_file = [](const SpectrumSpec& s, const char* key) {
    if (const auto* f = std::get_if<spectrum::FromCsv>(&s)) {
      if (!std::filesystem::exists(f->path)) {
        throw ConfigError(std::string("config key '") + key + "': file '" + f->path +
                          "' does not exist");
      }
    }
  };
  check_file(cfg.problem.spectrum, "problem.spectrum");
  for (const auto& s : cfg.sweep.spectrum) check_file(s, "sweep.spectrum");
  if (cfg.target_gap && cfg.target_rel) {
    throw ConfigError("config keys 'run.target_gap' and 'run.target_rel' are exclusive");
  }
}

}  // namespace zo
