#include "fracperim/grid_geometry.hpp"

#include "fracperim/error.hpp"
#include "text_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace fracperim {
namespace {

using detail::expect_header;
using detail::fmt17;
using detail::read_spec_line;
using detail::write_spec_line;

void require_same_spec(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw Error(ErrorCode::IncompatibleGrid, "grid specs differ");
}

void check_axis(const GridSpec& spec, int axis) {
  if (axis < 0 || axis >= spec.dim) throw Error(ErrorCode::InvalidParameter, "axis out of range");
}

}  // namespace

GridSpec grid_for_shape(const ShapeSpec& shape, double h, int margin_cells) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidParameter, "cell size must be positive");
  if (margin_cells < 0) throw Error(ErrorCode::InvalidParameter, "margin must be nonnegative");
  const Bounds b = shape.bounds();
  GridSpec spec;
  spec.dim = shape.dim();
  spec.h = h;
  for (int a = 0; a < spec.dim; ++a) {
    const double lo = std::floor(b.lo[a] / h) - margin_cells;
    const double hi = std::ceil(b.hi[a] / h) + margin_cells;
    spec.origin[a] = lo * h;
    spec.cells[a] = static_cast<int>(hi - lo);
  }
  spec.validate();
  return spec;
}

GridSet rasterize(const ShapeSpec& shape, const GridSpec& spec, int margin_cells) {
  spec.validate();
  if (shape.dim() != spec.dim) throw Error(ErrorCode::IncompatibleGrid, "shape and grid dimensions differ");
  const Bounds b = shape.bounds();
  const double slack = 1e-9 * spec.h;
  for (int a = 0; a < spec.dim; ++a) {
    const double lo = spec.origin[a] + margin_cells * spec.h;
    const double hi = spec.origin[a] + (spec.cells[a] - margin_cells) * spec.h;
    if (b.lo[a] < lo - slack || b.hi[a] > hi + slack)
      throw Error(ErrorCode::DomainTooSmall, "shape (plus margin) exceeds the grid extents");
  }
  GridSet out(spec);
  for (int j = 0; j < spec.cells[1]; ++j) {
    const double y = spec.dim == 2 ? spec.center(1, j) : 0.0;
    if (spec.dim == 2 && (y < b.lo[1] || y > b.hi[1])) continue;
    for (int i = 0; i < spec.cells[0]; ++i) {
      const double x = spec.center(0, i);
      if (x < b.lo[0] || x > b.hi[0]) continue;
      if (shape.contains(x, y)) out.set(i, j, true);
    }
  }
  return out;
}

GridSet set_algebra(const GridSet& a, const GridSet& b, SetOp op) {
  require_same_spec(a.spec(), b.spec());
  std::vector<std::uint8_t> occ(a.occupancy().size());
  for (std::size_t k = 0; k < occ.size(); ++k) {
    const bool x = a.occupancy()[k] != 0;
    const bool y = b.occupancy()[k] != 0;
    bool r = false;
    switch (op) {
      case SetOp::Union: r = x || y; break;
      case SetOp::Intersect: r = x && y; break;
      case SetOp::SymmDiff: r = x != y; break;
      case SetOp::Complement: r = !x; break;
    }
    occ[k] = r ? 1 : 0;
  }
  return GridSet(a.spec(), std::move(occ));
}

GridSet reflect(const GridSet& e, int axis, double plane) {
  const GridSpec& spec = e.spec();
  check_axis(spec, axis);
  const double twice = 2.0 * (plane - spec.origin[axis]) / spec.h;
  const double k = std::round(twice);
  if (std::abs(twice - k) > 1e-9 * std::max(1.0, std::abs(k)))
    throw Error(ErrorCode::Quantization, "reflection plane is not on a grid line or cell-center line");
  const long twice_plane = static_cast<long>(k);
  GridSet out(spec);
  for (int j = 0; j < spec.cells[1]; ++j) {
    for (int i = 0; i < spec.cells[0]; ++i) {
      if (!e.at(i, j)) continue;
      std::array<long, 2> idx{i, j};
      idx[axis] = twice_plane - 1 - idx[axis];
      if (!spec.in_range(static_cast<int>(idx[0]), static_cast<int>(idx[1])) ||
          idx[axis] < 0 || idx[axis] >= spec.cells[axis])
        throw Error(ErrorCode::DomainTooSmall, "reflected set leaves the grid");
      out.set(static_cast<int>(idx[0]), static_cast<int>(idx[1]), true);
    }
  }
  return out;
}

GridSet steiner_symmetrize(const GridSet& e, int axis) {
  const GridSpec& spec = e.spec();
  check_axis(spec, axis);
  if (e.empty()) throw Error(ErrorCode::EmptySet, "Steiner symmetrization of an empty set");
  const int other = 1 - axis;
  const int n = spec.cells[axis];
  const int lines = spec.cells[other];
  GridSet out(spec);
  for (int l = 0; l < lines; ++l) {
    auto cell = [&](int t) {
      std::array<int, 2> idx{};
      idx[axis] = t;
      idx[other] = l;
      return idx;
    };
    int k = 0;
    for (int t = 0; t < n; ++t) {
      const auto c = cell(t);
      k += e.at(c[0], c[1]) ? 1 : 0;
    }
    const int start = (n - k + 1) / 2;
    for (int t = start; t < start + k; ++t) {
      const auto c = cell(t);
      out.set(c[0], c[1], true);
    }
  }
  return out;
}

GridSet enlarge_to_contain(const GridSet& e, const CellBox& box) {
  const GridSpec& spec = e.spec();
  std::array<int, 2> lo{0, 0};
  std::array<int, 2> hi{spec.cells[0], spec.cells[1]};
  for (int a = 0; a < spec.dim; ++a) {
    lo[a] = std::min(0, box.lo[a]);
    hi[a] = std::max(spec.cells[a], box.hi[a]);
  }
  if (lo == std::array<int, 2>{0, 0} && hi == spec.cells) return e;
  GridSpec bigger = spec;
  for (int a = 0; a < spec.dim; ++a) {
    bigger.origin[a] = spec.origin[a] + lo[a] * spec.h;
    bigger.cells[a] = hi[a] - lo[a];
  }
  GridSet out(bigger);
  for (int j = 0; j < spec.cells[1]; ++j)
    for (int i = 0; i < spec.cells[0]; ++i)
      if (e.at(i, j)) out.set(i - lo[0], j - lo[1], true);
  return out;
}

Bisection bisect_halves(const GridSet& e, int axis) {
  const GridSpec& spec = e.spec();
  check_axis(spec, axis);
  if (e.empty()) throw Error(ErrorCode::EmptySet, "bisection of an empty set");
  const int n = spec.cells[axis];
  std::vector<long> slab(n, 0);
  for (int j = 0; j < spec.cells[1]; ++j)
    for (int i = 0; i < spec.cells[0]; ++i)
      if (e.at(i, j)) ++slab[axis == 0 ? i : j];
  const long total = static_cast<long>(e.count());

  // suffix[p] = cells with index >= p
  std::vector<long> suffix(n + 1, 0);
  for (int p = n - 1; p >= 0; --p) suffix[p] = suffix[p + 1] + slab[p];
  int best = 0;
  long best_err = std::abs(2 * suffix[0] - total);
  for (int p = 1; p <= n; ++p) {
    const long err = std::abs(2 * suffix[p] - total);
    if (err < best_err) {
      best_err = err;
      best = p;
    }
  }

  const CellBox bb = e.bounding_box();
  CellBox need = bb;
  need.lo[axis] = std::min({bb.lo[axis], 2 * best - bb.hi[axis]});
  need.hi[axis] = std::max({bb.hi[axis], 2 * best - bb.lo[axis]});
  GridSet big = enlarge_to_contain(e, need);
  const int shift = std::min(0, need.lo[axis]);
  const int p = best - shift;
  const GridSpec& bs = big.spec();

  GridSet plus(bs);
  GridSet minus(bs);
  for (int j = 0; j < bs.cells[1]; ++j) {
    for (int i = 0; i < bs.cells[0]; ++i) {
      if (!big.at(i, j)) continue;
      std::array<int, 2> idx{i, j};
      std::array<int, 2> mirror = idx;
      mirror[axis] = 2 * p - 1 - idx[axis];
      GridSet& target = idx[axis] >= p ? plus : minus;
      target.set(idx[0], idx[1], true);
      target.set(mirror[0], mirror[1], true);
    }
  }

  Bisection out;
  out.axis = axis;
  out.plane_index = best;
  out.plane = spec.origin[axis] + best * spec.h;
  out.snap_error = 0.5 * static_cast<double>(best_err) * spec.cell_volume();
  out.plus = std::move(plus);
  out.minus = std::move(minus);
  return out;
}

GridSet translate_cells(const GridSet& e, int di, int dj) {
  const GridSpec& spec = e.spec();
  GridSet out(spec);
  for (int j = 0; j < spec.cells[1]; ++j) {
    for (int i = 0; i < spec.cells[0]; ++i) {
      if (!e.at(i, j)) continue;
      if (!spec.in_range(i + di, j + dj))
        throw Error(ErrorCode::DomainTooSmall, "translated set leaves the grid");
      out.set(i + di, j + dj, true);
    }
  }
  return out;
}

std::size_t symmetry_defect(const GridSet& e, int axis) {
  const GridSpec& spec = e.spec();
  check_axis(spec, axis);
  std::size_t defect = 0;
  for (int j = 0; j < spec.cells[1]; ++j) {
    for (int i = 0; i < spec.cells[0]; ++i) {
      const int mi = axis == 0 ? spec.cells[0] - 1 - i : i;
      const int mj = axis == 1 ? spec.cells[1] - 1 - j : j;
      if (e.at(i, j) != e.at(mi, mj)) ++defect;
    }
  }
  return defect;
}

void write_grid_set(std::ostream& out, const GridSet& e) {
  const GridSpec& spec = e.spec();
  out << "FRACGRID v1\n";
  write_spec_line(out, spec);
  for (int j = 0; j < spec.cells[1]; ++j) {
    std::string row(static_cast<std::size_t>(spec.cells[0]), '0');
    for (int i = 0; i < spec.cells[0]; ++i)
      if (e.at(i, j)) row[static_cast<std::size_t>(i)] = '1';
    out << row << '\n';
  }
}

GridSet read_grid_set(std::istream& in) {
  expect_header(in, "FRACGRID v1");
  const GridSpec spec = read_spec_line(in);
  GridSet out(spec);
  for (int j = 0; j < spec.cells[1]; ++j) {
    std::string row;
    if (!std::getline(in, row)) throw Error(ErrorCode::Parse, "missing grid row");
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (static_cast<int>(row.size()) != spec.cells[0]) throw Error(ErrorCode::Parse, "grid row has wrong length");
    for (int i = 0; i < spec.cells[0]; ++i) {
      const char c = row[static_cast<std::size_t>(i)];
      if (c != '0' && c != '1') throw Error(ErrorCode::Parse, "grid rows hold only 0 and 1");
      out.set(i, j, c == '1');
    }
  }
  return out;
}

void write_grid_function(std::ostream& out, const GridFunction& g) {
  const GridSpec& spec = g.spec();
  out << "FRACFUN v1\n";
  write_spec_line(out, spec);
  for (int j = 0; j < spec.cells[1]; ++j) {
    for (int i = 0; i < spec.cells[0]; ++i) {
      if (i) out << ' ';
      out << fmt17(g.at(i, j));
    }
    out << '\n';
  }
}

GridFunction read_grid_function(std::istream& in) {
  expect_header(in, "FRACFUN v1");
  const GridSpec spec = read_spec_line(in);
  std::vector<double> values(spec.size());
  for (auto& v : values) {
    if (!(in >> v)) throw Error(ErrorCode::Parse, "missing grid function value");
  }
  return GridFunction(spec, std::move(values));
}

}  // namespace fracperim
