#include "pwcmm/csv_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pwcmm {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !cell.empty();
}

} // namespace

std::vector<double> read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  bool saw_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> cells = split_csv(t);
    const std::string& cell = cells.size() >= 2 ? cells[1] : cells[0];
    double v = 0.0;
    if (!parse_double(cell, v)) {
      // A single non-numeric header row is allowed before the data.
      if (!saw_data) {
        saw_data = true;
        continue;
      }
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": cannot parse '" + cell +
                               "' as a number");
    }
    if (!std::isfinite(v))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-finite value");
    saw_data = true;
    values.push_back(v);
  }
  if (values.size() < 2)
    throw std::runtime_error(path + ": need at least 2 samples, got " +
                             std::to_string(values.size()));
  return values;
}

std::vector<double> read_csv_column(const std::string& path, int col) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::vector<std::string> cells = split_csv(t);
    if (col >= static_cast<int>(cells.size()) || cells[col].empty()) continue;
    double v = 0.0;
    if (!parse_double(cells[col], v)) {
      if (!header_skipped) {
        header_skipped = true;
        continue;
      }
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": cannot parse '" +
                               cells[col] + "'");
    }
    header_skipped = true;
    values.push_back(v);
  }
  return values;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace pwcmm
