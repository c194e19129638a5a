#pragma once

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "memsim/errors.hpp"
#include "memsim/loop.hpp"
#include "memsim/timeseries.hpp"

namespace memsim::csv {

/// Scientific notation with 17 significant digits; round-trips doubles exactly.
inline std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline void write_timeseries(std::ostream& out, const TimeSeries& ts) {
  out << "t,u,y";
  for (std::size_t k = 0; k < ts.x.size(); ++k) out << ",x" << k;
  out << '\n';
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out << format(ts.t[i]) << ',' << format(ts.u[i]) << ',' << format(ts.y[i]);
    for (const auto& xs : ts.x) out << ',' << format(xs[i]);
    out << '\n';
  }
}

inline void write_loop(std::ostream& out, const HysteresisLoop& loop) {
  out << "u,y\n";
  for (const auto& p : loop.points()) out << format(p.u) << ',' << format(p.y) << '\n';
}

/// Header row plus numeric columns.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name)
        return columns[i];
    throw InputError("CSV has no column '" + name + "'");
  }

  bool has(const std::string& name) const {
    for (const auto& h : header)
      if (h == name)
        return true;
    return false;
  }
};

namespace detail {

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream s(line);
  while (std::getline(s, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

} // namespace detail

inline Table read(std::istream& in) {
  Table t;
  std::string line;
  if (!std::getline(in, line))
    throw InputError("CSV is empty");
  t.header = detail::split(line);
  if (t.header.empty())
    throw InputError("CSV header is empty");
  t.columns.assign(t.header.size(), {});
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto cells = detail::split(line);
    if (cells.size() != t.header.size())
      throw InputError("CSV line " + std::to_string(lineno) + ": expected " +
                       std::to_string(t.header.size()) + " fields");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const char* s = cells[i].c_str();
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(s, &end);
      if (end == s || *end != '\0' || !std::isfinite(v))
        throw InputError("CSV line " + std::to_string(lineno) + ": '" + cells[i] +
                         "' is not a number");
      t.columns[i].push_back(v);
    }
  }
  return t;
}

} // namespace memsim::csv
