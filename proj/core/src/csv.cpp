#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zo/harness.hpp"

namespace zo {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, std::size_t line) {
  if (s == "nan" || s == "-nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

template <class T>
T parse_int(const std::string& s, std::size_t line) {
  T v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

void write_row(std::ostream& out, const ResultRow& r, bool with_wall) {
  out << r.run_id << ',' << r.solver << ',' << r.d << ',' << fmt(r.mu) << ',' << fmt(r.tr_A)
      << ',' << fmt(r.ed_half) << ',' << to_string(r.status) << ',' << r.iters << ','
      << r.oracle_calls << ',' << fmt(r.final_gap);
  if (with_wall) out << ',' << r.wall_ns;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {"run_id", "solver",   "d",      "mu",
                                                "tr_A",   "ed_half",  "status", "iters",
                                                "oracle_calls", "final_gap", "wall_ns"};
  return cols;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    write_row(out, r, true);
    out << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write csv '" + path + "'");
  write_csv(out, rows);
  if (!out) throw ConfigError("error while writing csv '" + path + "'");
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (header) {
      header = false;
      if (f != csv_columns()) throw ConfigError("csv: unexpected header");
      continue;
    }
    if (f.size() != csv_columns().size()) {
      throw ConfigError("csv line " + std::to_string(lineno) + ": expected " +
                        std::to_string(csv_columns().size()) + " fields");
    }
    ResultRow r;
    r.run_id = f[0];
    r.solver = f[1];
    r.d = parse_int<std::size_t>(f[2], lineno);
    r.mu = parse_double(f[3], lineno);
    r.tr_A = parse_double(f[4], lineno);
    r.ed_half = parse_double(f[5], lineno);
    r.status = parse_status(f[6]);
    r.iters = parse_int<std::uint64_t>(f[7], lineno);
    r.oracle_calls = parse_int<std::uint64_t>(f[8], lineno);
    r.final_gap = parse_double(f[9], lineno);
    r.wall_ns = parse_int<std::int64_t>(f[10], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv '" + path + "'");
  return read_csv(in);
}

std::string stable_key(const ResultRow& row) {
  std::ostringstream os;
  write_row(os, row, false);
  return os.str();
}

}  // namespace zo
