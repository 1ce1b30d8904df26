#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace zo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or unrealizable configuration (bad spectrum length, unknown key, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Operation requested outside the supported regime (singular optimum, dense Hessian above cap).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Non-finite inputs or results.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(const Vector& x, std::size_t d, const char* what) {
  if (static_cast<std::size_t>(x.size()) != d) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(d) +
                         ", got " + std::to_string(x.size()));
  }
}

inline bool all_finite(const Vector& x) { return x.allFinite(); }

}  // namespace zo
