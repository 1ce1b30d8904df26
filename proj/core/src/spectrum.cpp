#include "zo/spectrum.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace zo {
namespace {

void validate_list(const std::vector<double>& eigs, const std::string& origin) {
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (!std::isfinite(eigs[i]) || eigs[i] < 0.0) {
      throw ConfigError(origin + ": eigenvalue " + std::to_string(i) +
                        " is negative or non-finite");
    }
    if (i > 0 && eigs[i] > eigs[i - 1]) {
      throw ConfigError(origin + ": eigenvalues must be non-increasing (index " +
                        std::to_string(i) + ")");
    }
  }
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_number(const std::string& token, const std::string& context) {
  const std::string t = trim(token);
  double value = 0.0;
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty()) {
    throw ConfigError(context + ": cannot parse number '" + t + "'");
  }
  return value;
}

std::vector<double> split_numbers(const std::string& args, char sep, const std::string& context) {
  std::vector<double> out;
  std::stringstream ss(args);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(parse_number(item, context));
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string("spectrum parameter ") + name + " must be positive");
  }
}

}  // namespace

std::vector<double> realize(const SpectrumSpec& spec, std::size_t d) {
  if (d == 0) throw ConfigError("spectrum: dimension must be positive");
  std::vector<double> eigs;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, spectrum::Flat>) {
          require_positive(s.level, "level");
          eigs.assign(d, s.level);
        } else if constexpr (std::is_same_v<T, spectrum::PowerLaw>) {
          require_positive(s.C, "C");
          require_positive(s.beta, "beta");
          eigs.resize(d);
          for (std::size_t i = 0; i < d; ++i) {
            eigs[i] = s.C / std::pow(static_cast<double>(i + 1), s.beta);
          }
        } else if constexpr (std::is_same_v<T, spectrum::PowerLawWithFloor>) {
          require_positive(s.C, "C");
          require_positive(s.beta, "beta");
          require_positive(s.floor, "floor");
          eigs.resize(d);
          for (std::size_t i = 0; i < d; ++i) {
            eigs[i] = s.floor + s.C / std::pow(static_cast<double>(i + 1), s.beta);
          }
        } else if constexpr (std::is_same_v<T, spectrum::Explicit>) {
          eigs = s.eigenvalues;
        } else {
          eigs = read_spectrum_csv(s.path);
        }
      },
      spec);
  if (eigs.size() != d) {
    throw ConfigError("spectrum: list has " + std::to_string(eigs.size()) +
                      " eigenvalues but dimension is " + std::to_string(d));
  }
  validate_list(eigs, "spectrum");
  return eigs;
}

std::vector<double> read_spectrum_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("spectrum csv: cannot open '" + path + "'");
  std::vector<double> eigs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    eigs.push_back(parse_number(t, path + ":" + std::to_string(lineno)));
  }
  validate_list(eigs, path);
  return eigs;
}

void write_spectrum_csv(const std::string& path, const std::vector<double>& eigenvalues) {
  std::ofstream out(path);
  if (!out) throw ConfigError("spectrum csv: cannot write '" + path + "'");
  out << "# eigenvalues, descending\n";
  for (double v : eigenvalues) out << format_double(v) << '\n';
}

SpectrumSpec parse_spectrum(const std::string& raw) {
  const std::string text = trim(raw);
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') {
    throw ConfigError("spectrum: expected kind(args), got '" + text + "'");
  }
  std::string kind = trim(std::string_view(text).substr(0, open));
  std::transform(kind.begin(), kind.end(), kind.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const std::string args = text.substr(open + 1, text.size() - open - 2);
  if (kind == "csv") return spectrum::FromCsv{trim(args)};
  if (kind == "explicit") return spectrum::Explicit{split_numbers(args, ';', "explicit spectrum")};

  const auto nums = split_numbers(args, ',', "spectrum " + kind);
  auto expect = [&](std::size_t n) {
    if (nums.size() != n) {
      throw ConfigError("spectrum " + kind + ": expected " + std::to_string(n) + " arguments");
    }
  };
  if (kind == "flat") {
    expect(1);
    return spectrum::Flat{nums[0]};
  }
  if (kind == "powerlaw") {
    expect(2);
    return spectrum::PowerLaw{nums[0], nums[1]};
  }
  if (kind == "powerlaw_floor") {
    expect(3);
    return spectrum::PowerLawWithFloor{nums[0], nums[1], nums[2]};
  }
  throw ConfigError("spectrum: unknown kind '" + kind + "'");
}

std::string to_string(const SpectrumSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, spectrum::Flat>) {
          return "flat(" + format_double(s.level) + ")";
        } else if constexpr (std::is_same_v<T, spectrum::PowerLaw>) {
          return "powerlaw(" + format_double(s.C) + "," + format_double(s.beta) + ")";
        } else if constexpr (std::is_same_v<T, spectrum::PowerLawWithFloor>) {
          return "powerlaw_floor(" + format_double(s.C) + "," + format_double(s.beta) + "," +
                 format_double(s.floor) + ")";
        } else if constexpr (std::is_same_v<T, spectrum::Explicit>) {
          std::string out = "explicit(";
          for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
            if (i) out += ';';
            out += format_double(s.eigenvalues[i]);
          }
          return out + ")";
        } else {
          return "csv(" + s.path + ")";
        }
      },
      spec);
}

SpectrumSpec with_floor(const SpectrumSpec& spec, double mu) {
  if (const auto* f = std::get_if<spectrum::Flat>(&spec)) {
    (void)f;
    return spectrum::Flat{mu};
  }
  if (const auto* p = std::get_if<spectrum::PowerLawWithFloor>(&spec)) {
    auto copy = *p;
    copy.floor = mu;
    return copy;
  }
  throw ConfigError("spectrum " + to_string(spec) + " has no floor to override with mu");
}

}  // namespace zo
