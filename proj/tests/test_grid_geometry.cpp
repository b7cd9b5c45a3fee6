#include "doctest.h"

#include "fracperim/error.hpp"
#include "fracperim/grid_geometry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace fracperim;

namespace {

GridSet line_set(int n, std::initializer_list<int> occupied, double h = 1.0) {
  GridSet e(GridSpec::line(n, h));
  for (int i : occupied) e.set(i, 0, true);
  return e;
}

std::vector<int> occupied_1d(const GridSet& e) {
  std::vector<int> out;
  for (auto c : e.occupied_cells()) out.push_back(c[0]);
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("grid spec invariants") {
  const GridSpec g = GridSpec::plane(4, 3, 0.25, -1.0, 2.0);
  CHECK(g.center(0, 0) == -0.875);
  CHECK(g.center(1, 2) == 2.625);
  CHECK(g.size() == 12);
  CHECK(code_of([] { GridSpec::line(4, 0.0).validate(); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { GridSpec::plane(0, 3, 1.0).validate(); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("rasterize: aligned interval, disk measure, empty region") {
  const GridSet e = rasterize(ShapeSpec(Interval{0.0, 2.0}), GridSpec::line(8, 0.5), 0);
  CHECK(occupied_1d(e) == std::vector<int>{0, 1, 2, 3});
  CHECK(e.measure() == 2.0);

  const ShapeSpec disk(Ball{2, {0.0, 0.0}, 1.0});
  const GridSet d = rasterize(disk, grid_for_shape(disk, 0.01, 2));
  CHECK(std::abs(d.measure() - std::numbers::pi) < 0.01 * std::numbers::pi);

  // Cell-center count oracle, independent of the rasterizer.
  const GridSpec spec = grid_for_shape(disk, 0.05, 2);
  std::size_t count = 0;
  for (int j = 0; j < spec.cells[1]; ++j)
    for (int i = 0; i < spec.cells[0]; ++i) {
      const double x = spec.center(0, i), y = spec.center(1, j);
      if (x * x + y * y < 1.0) ++count;
    }
  CHECK(rasterize(disk, spec).count() == count);

  // Error decreases as h halves.
  double previous = 1.0;
  for (double h : {1.0 / 16, 1.0 / 64, 1.0 / 256}) {
    const double err = std::abs(rasterize(disk, grid_for_shape(disk, h, 2)).measure() - std::numbers::pi);
    CHECK(err <= 4.0 * 2.0 * std::numbers::pi * h);
    CHECK(err < previous);
    previous = err;
  }

  const ShapeSpec tiny(Ball{2, {0.3, 0.3}, 0.01});
  const GridSet none = rasterize(tiny, GridSpec::plane(4, 4, 1.0, -2.0, -2.0));
  CHECK(none.empty());
  CHECK(none.measure() == 0.0);

  CHECK(code_of([&] { rasterize(disk, GridSpec::plane(4, 4, 0.25, -0.5, -0.5)); }) == ErrorCode::DomainTooSmall);
}

TEST_CASE("set algebra") {
  const GridSet a = line_set(4, {0, 1});
  const GridSet b = line_set(4, {1, 2});
  CHECK(occupied_1d(set_algebra(a, b, SetOp::SymmDiff)) == std::vector<int>{0, 2});
  CHECK(set_algebra(a, a, SetOp::SymmDiff).empty());
  CHECK(occupied_1d(set_algebra(a, b, SetOp::Union)) == std::vector<int>{0, 1, 2});
  CHECK(occupied_1d(set_algebra(a, b, SetOp::Intersect)) == std::vector<int>{1});
  CHECK(occupied_1d(set_algebra(a, b, SetOp::Complement)) == std::vector<int>{2, 3});
  const GridSet c = line_set(4, {3});
  CHECK(set_algebra(a, c, SetOp::SymmDiff).count() == a.count() + c.count());

  const ShapeSpec e1(Ellipse{{0.1, 0.0}, 1.0, 0.6});
  const ShapeSpec e2(Ball{2, {0.5, 0.2}, 0.7});
  const GridSpec spec = GridSpec::plane(64, 64, 1.0 / 16, -2.0, -2.0);
  const GridSet x = rasterize(e1, spec), y = rasterize(e2, spec);
  CHECK(set_algebra(x, y, SetOp::SymmDiff).count() ==
        x.count() + y.count() - 2 * set_algebra(x, y, SetOp::Intersect).count());

  CHECK(code_of([&] { set_algebra(a, line_set(5, {0}), SetOp::Union); }) == ErrorCode::IncompatibleGrid);
}

TEST_CASE("reflect") {
  CHECK(occupied_1d(reflect(line_set(4, {0, 1}), 0, 2.0)) == std::vector<int>{2, 3});
  const GridSet e = line_set(6, {0, 2, 5});
  CHECK(reflect(reflect(e, 0, 3.0), 0, 3.0) == e);
  CHECK(occupied_1d(reflect(line_set(6, {1, 2}), 0, 2.5)) == std::vector<int>{2, 3});
  CHECK(reflect(e, 0, 3.0).count() == e.count());

  const ShapeSpec disk(Ball{2, {0.0, 0.0}, 0.8});
  const GridSet d = rasterize(disk, grid_for_shape(disk, 0.1, 2));
  CHECK(reflect(d, 0, 0.0) == d);
  CHECK(reflect(d, 1, 0.0) == d);

  CHECK(code_of([&] { reflect(e, 0, 1.3); }) == ErrorCode::Quantization);
}

TEST_CASE("steiner symmetrization") {
  GridSet col(GridSpec::plane(1, 4, 1.0));
  col.set(0, 0, true);
  col.set(0, 2, true);
  const GridSet sym = steiner_symmetrize(col, 1);
  CHECK(!sym.at(0, 0));
  CHECK(sym.at(0, 1));
  CHECK(sym.at(0, 2));
  CHECK(!sym.at(0, 3));
  CHECK(steiner_symmetrize(sym, 1) == sym);

  // Odd leftover: extra cell on the positive side.
  CHECK(occupied_1d(steiner_symmetrize(line_set(4, {0}), 0)) == std::vector<int>{2});
  CHECK(occupied_1d(steiner_symmetrize(line_set(5, {0, 4}), 0)) == std::vector<int>{2, 3});

  GridSet ell(GridSpec::plane(6, 6, 1.0));
  for (int j = 0; j < 5; ++j) ell.set(0, j, true);
  for (int i = 0; i < 4; ++i) ell.set(i, 0, true);
  for (int axis : {0, 1}) {
    const GridSet s = steiner_symmetrize(ell, axis);
    CHECK(s.count() == ell.count());
    CHECK(steiner_symmetrize(s, axis) == s);
  }
}

TEST_CASE("bisect halves") {
  const GridSet four = line_set(4, {0, 1, 2, 3});
  const Bisection b4 = bisect_halves(four, 0);
  CHECK(b4.plane == 2.0);
  CHECK(b4.plus.count() == 4);
  CHECK(b4.minus.count() == 4);
  CHECK(b4.snap_error == 0.0);
  CHECK(occupied_1d(b4.plus) == occupied_1d(b4.minus));

  const GridSet gappy = line_set(6, {0, 1, 2, 5});
  const Bisection bg = bisect_halves(gappy, 0);
  CHECK(bg.plus.count() == 4);
  CHECK(bg.minus.count() == 4);
  CHECK(bg.snap_error == 0.0);
  // Tie between the grid lines at 2 and 3 resolves to the smaller coordinate.
  CHECK(bg.plane == 2.0);
  for (const GridSet* f : {&bg.plus, &bg.minus}) CHECK(reflect(*f, 0, bg.plane) == *f);

  const ShapeSpec disk(Ball{2, {0.0, 0.0}, 0.8});
  const GridSet d = rasterize(disk, grid_for_shape(disk, 0.1, 2));
  const Bisection bd = bisect_halves(d, 0);
  CHECK(bd.plus == d);
  CHECK(bd.minus == d);

  const ShapeSpec egg(Ellipse{{0.23, 0.0}, 1.1, 0.6});
  const GridSet e = rasterize(egg, grid_for_shape(egg, 1.0 / 32, 2));
  const Bisection be = bisect_halves(e, 0);
  for (const GridSet* f : {&be.plus, &be.minus}) {
    CHECK(reflect(*f, 0, be.plane) == *f);
    CHECK(std::abs(f->measure() - e.measure()) <= 2.0 * (1.0 / 32) * 1.2 + 1e-12);
  }
}

TEST_CASE("grid file formats round-trip") {
  const ShapeSpec egg(Ellipse{{0.2, -0.1}, 0.9, 0.5});
  const GridSet e = rasterize(egg, grid_for_shape(egg, 0.1, 2));
  std::stringstream ss;
  write_grid_set(ss, e);
  CHECK(ss.str().rfind("FRACGRID v1\n", 0) == 0);
  CHECK(read_grid_set(ss) == e);

  GridFunction g(GridSpec::line(5, 0.3, -0.6));
  g.set(1, 0, 0.5);
  g.set(2, 0, 1.0 / 3.0);
  std::stringstream sf;
  write_grid_function(sf, g);
  CHECK(read_grid_function(sf) == g);

  std::stringstream bad("FRACGRID v2\n");
  CHECK(code_of([&] { read_grid_set(bad); }) == ErrorCode::Parse);
}

TEST_CASE("shape specs") {
  const ShapeSpec ellipse = ShapeSpec::parse("kind=ellipse a=1.2 b=0.8333 cx=0 cy=0");
  CHECK(ellipse.volume() == doctest::Approx(std::numbers::pi * 1.2 * 0.8333));
  CHECK(ShapeSpec::parse(ellipse.describe()).volume() == doctest::Approx(ellipse.volume()).epsilon(1e-15));
  CHECK(ShapeSpec(Ball{2, {0, 0}, 2.0}).perimeter() == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(ShapeSpec(Ellipse{{0, 0}, 1.0, 1.0}).perimeter() == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  const ShapeSpec fd(FourierDisk{{0, 0}, 1.0, 0.1, 3});
  CHECK(fd.volume() == doctest::Approx(std::numbers::pi * (1.0 + 0.5 * 0.01)).epsilon(1e-13));
  CHECK(fd.normalized_to_unit_ball().volume() == doctest::Approx(std::numbers::pi).epsilon(1e-13));
  CHECK_THROWS_AS(ShapeSpec(FourierDisk{{0, 0}, 1.0, 1.2, 3}), Error);
  CHECK_THROWS_AS(ShapeSpec(ShapeUnion{{ShapeSpec(Ball{2, {0, 0}, 1.0}), ShapeSpec(Ball{2, {0.5, 0}, 1.0})}}), Error);
  const ShapeSpec pair(DiskPair{{-0.5, 0.0}, 1.0, {0.5, 0.0}, 1.0});
  // Two unit disks at distance 1: lens area 2*pi/3 - sqrt(3)/2.
  CHECK(pair.volume() == doctest::Approx(2.0 * std::numbers::pi - (2.0 * std::numbers::pi / 3.0 - std::sqrt(3.0) / 2.0)));
}
