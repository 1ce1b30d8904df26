#pragma once

#include <string>
#include <variant>
#include <vector>

#include "zo/types.hpp"

namespace zo {

namespace spectrum {

struct Flat {
  double level = 1.0;
};

/// lambda_i = C / i^beta, i = 1..d
struct PowerLaw {
  double C = 1.0;
  double beta = 1.0;
};

/// lambda_i = floor + C / i^beta
struct PowerLawWithFloor {
  double C = 1.0;
  double beta = 1.0;
  double floor = 0.0;
};

struct Explicit {
  std::vector<double> eigenvalues;
};

struct FromCsv {
  std::string path;
};

}  // namespace spectrum

using SpectrumSpec = std::variant<spectrum::Flat, spectrum::PowerLaw, spectrum::PowerLawWithFloor,
                                  spectrum::Explicit, spectrum::FromCsv>;

/// Realized eigenvalue list (non-increasing, non-negative) at dimension d.
/// Throws ConfigError when an explicit or CSV list does not have length d
/// or violates ordering/sign.
std::vector<double> realize(const SpectrumSpec& spec, std::size_t d);

/// One non-negative eigenvalue per line, descending; blank lines and '#'
/// comments ignored.
std::vector<double> read_spectrum_csv(const std::string& path);
void write_spectrum_csv(const std::string& path, const std::vector<double>& eigenvalues);

/// Parses "flat(1)", "powerlaw(1,2)", "powerlaw_floor(1,3,0.01)",
/// "explicit(4;1;0.5)" and "csv(path)".
SpectrumSpec parse_spectrum(const std::string& text);
std::string to_string(const SpectrumSpec& spec);

/// Returns a copy of `spec` whose strong-convexity floor is `mu`
/// (Flat: level, PowerLawWithFloor: floor). Other kinds reject.
SpectrumSpec with_floor(const SpectrumSpec& spec, double mu);

}  // namespace zo
