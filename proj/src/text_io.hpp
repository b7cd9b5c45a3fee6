#pragma once
// Shared helpers for the line-oriented text formats.

#include "fracperim/error.hpp"
#include "fracperim/grid.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fracperim::detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_spec_line(std::ostream& out, const GridSpec& spec) {
  out << spec.dim << ' ' << fmt17(spec.h);
  for (int a = 0; a < spec.dim; ++a) out << ' ' << fmt17(spec.origin[a]);
  for (int a = 0; a < spec.dim; ++a) out << ' ' << spec.cells[a];
  out << '\n';
}

inline GridSpec read_spec_line(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "missing grid spec line");
  std::istringstream ls(line);
  GridSpec spec;
  if (!(ls >> spec.dim)) throw Error(ErrorCode::Parse, "bad grid spec line");
  if (spec.dim != 1 && spec.dim != 2) throw Error(ErrorCode::Parse, "grid dim must be 1 or 2");
  ls >> spec.h;
  for (int a = 0; a < spec.dim; ++a) ls >> spec.origin[a];
  for (int a = 0; a < spec.dim; ++a) ls >> spec.cells[a];
  if (!ls) throw Error(ErrorCode::Parse, "bad grid spec line");
  spec.validate();
  return spec;
}

/// Reads one line and compares it (minus a trailing CR) to `header`.
inline void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw Error(ErrorCode::Parse, "expected header '" + header + "'");
}

}  // namespace fracperim::detail
