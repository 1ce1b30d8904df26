#include "zo/trace.hpp"

namespace zo {

std::string to_string(Status s) {
  switch (s) {
    case Status::TargetReached:
      return "TargetReached";
    case Status::MaxIters:
      return "MaxIters";
    case Status::Diverged:
      return "Diverged";
    case Status::LeftDomain:
      return "LeftDomain";
  }
  return "Unknown";
}

Status parse_status(const std::string& s) {
  if (s == "TargetReached") return Status::TargetReached;
  if (s == "MaxIters") return Status::MaxIters;
  if (s == "Diverged") return Status::Diverged;
  if (s == "LeftDomain") return Status::LeftDomain;
  throw ConfigError("unknown status '" + s + "'");
}

}  // namespace zo
