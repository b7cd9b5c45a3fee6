#include "doctest.h"

#include "fracperim/deficit.hpp"
#include "fracperim/error.hpp"
#include "fracperim/grid_geometry.hpp"
#include "fracperim/kernel.hpp"
#include "fracperim/shape.hpp"
#include "oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace fracperim;

namespace {

constexpr double pi = std::numbers::pi;

GridSet raster(const ShapeSpec& shape, double h, int margin = 6) {
  return rasterize(shape, grid_for_shape(shape, h, margin), margin);
}

ShapeSpec two_intervals(double a0, double a1, double b0, double b1) {
  return ShapeSpec(ShapeUnion{{ShapeSpec(Interval{a0, a1}), ShapeSpec(Interval{b0, b1})}});
}

// Exhaustive 1D scan: overlap of the union of occupied cells with (c-r, c+r)
// evaluated cell by cell on a fine lattice of centers.
double exhaustive_asymmetry_1d(const GridSet& e, double step) {
  const GridSpec& spec = e.spec();
  const double r = 0.5 * e.measure();
  double best = 0.0;
  const double lo = spec.origin[0], hi = spec.origin[0] + spec.cells[0] * spec.h;
  for (double c = lo; c <= hi; c += step) {
    double ov = 0.0;
    for (int i = 0; i < spec.cells[0]; ++i) {
      if (!e.at(i)) continue;
      const double a = spec.origin[0] + i * spec.h;
      ov += std::max(0.0, std::min(a + spec.h, c + r) - std::max(a, c - r));
    }
    best = std::max(best, ov);
  }
  return 2.0 * (e.measure() - best) / e.measure();
}

// Overlap of the union of occupied cells with a disk, by subsampling each cell.
double sampled_overlap(const GridSet& e, double cx, double cy, double r, int sub) {
  const GridSpec& spec = e.spec();
  const double d = spec.h / sub;
  long hits = 0;
  for (auto cell : e.occupied_cells()) {
    const double x0 = spec.origin[0] + cell[0] * spec.h, y0 = spec.origin[1] + cell[1] * spec.h;
    for (int q = 0; q < sub; ++q)
      for (int p = 0; p < sub; ++p)
        if (std::hypot(x0 + (p + 0.5) * d - cx, y0 + (q + 0.5) * d - cy) <= r) ++hits;
  }
  return hits * d * d;
}

}  // namespace

TEST_CASE("equivalent radius") {
  CHECK(equivalent_radius(raster(ShapeSpec(Interval{0.0, 2.0}), 0.25)) == doctest::Approx(1.0).epsilon(1e-15));
  GridSet square(GridSpec::plane(8, 8, 1.0));
  for (int j = 2; j < 6; ++j)
    for (int i = 2; i < 6; ++i) square.set(i, j, true);
  CHECK(equivalent_radius(square) == doctest::Approx(std::sqrt(16.0 / pi)).epsilon(1e-15));
  GridSet one(GridSpec::plane(4, 4, std::sqrt(pi)));
  one.set(1, 1, true);
  CHECK(equivalent_radius(one) == doctest::Approx(1.0).epsilon(1e-14));
  GridSet four(GridSpec::plane(4, 4, std::sqrt(pi)));
  for (int k = 0; k < 4; ++k) four.set(k, 2, true);
  CHECK(equivalent_radius(four) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(equivalent_radius(GridSet(GridSpec::line(4, 1.0))), Error);
}

TEST_CASE("exact disk overlap") {
  // Full square of cells: any disk inside it.
  GridSet full(GridSpec::plane(40, 40, 0.1, -2.0, -2.0));
  for (int j = 0; j < 40; ++j)
    for (int i = 0; i < 40; ++i) full.set(i, j, true);
  CHECK(ball_overlap(full, {0.137, -0.291}, 1.3) == doctest::Approx(pi * 1.69).epsilon(1e-13));

  // Half plane x > 0 cut by a disk centered at x = c: circular segment.
  GridSet half(full.spec());
  for (int j = 0; j < 40; ++j)
    for (int i = 20; i < 40; ++i) half.set(i, j, true);
  for (double c : {-0.71, -0.2, 0.0, 0.333, 0.9}) {
    const double r = 1.1;
    const double d = -c;  // signed distance from the center to the line x = 0
    const double segment = r * r * std::acos(d / r) - d * std::sqrt(r * r - d * d);
    CHECK(ball_overlap(half, {c, 0.05}, r) == doctest::Approx(segment).epsilon(1e-12));
  }

  // Cross-check against subsampling on an irregular set.
  const GridSet egg = raster(ShapeSpec(FourierDisk{{0.1, 0.0}, 1.0, 0.3, 3}), 1.0 / 16);
  const double exact = ball_overlap(egg, {0.23, -0.17}, 0.9);
  CHECK(exact == doctest::Approx(sampled_overlap(egg, 0.23, -0.17, 0.9, 64)).epsilon(2e-4));
}

TEST_CASE("asymmetry of two unit intervals") {
  const GridSet e = raster(two_intervals(0.0, 1.0, 2.0, 3.0), 1.0 / 16);
  const Asymmetry a = fraenkel_asymmetry(e);
  CHECK(a.A == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.center[0] >= 1.0 - 1e-12);
  CHECK(a.center[0] <= 2.0 + 1e-12);
  CHECK(std::abs(a.A - exhaustive_asymmetry_1d(e, 1.0 / 1024)) <= 1e-6);
}

TEST_CASE("1D optimizer matches exhaustive scan") {
  for (auto shape : {two_intervals(0.0, 1.5, 2.0, 2.5), two_intervals(-1.0, 0.25, 0.75, 1.0),
                     two_intervals(0.0, 0.5, 3.0, 5.0)}) {
    const GridSet e = raster(shape, 1.0 / 32);
    CHECK(std::abs(fraenkel_asymmetry(e).A - exhaustive_asymmetry_1d(e, 1.0 / 2048)) <= 1e-6);
  }
}

TEST_CASE("asymmetry of a rasterized disk and translation invariance") {
  const double h = 1.0 / 32;
  const GridSet disk = raster(ShapeSpec(Ball{2, {0.0, 0.0}, 1.0}), h);
  const Asymmetry a = fraenkel_asymmetry(disk);
  CHECK(a.A < 4.0 * h);
  CHECK(std::hypot(a.center[0], a.center[1]) < h);

  const GridSet egg = raster(ShapeSpec(Ellipse{{0.0, 0.0}, 1.3, 0.7}), h, 10);
  const Asymmetry base = fraenkel_asymmetry(egg);
  const GridSet moved = translate_cells(egg, 3, -5);
  const Asymmetry shifted = fraenkel_asymmetry(moved);
  CHECK(shifted.A == base.A);
  CHECK(shifted.center[0] - base.center[0] == doctest::Approx(3 * h).epsilon(1e-12));
  CHECK(shifted.center[1] - base.center[1] == doctest::Approx(-5 * h).epsilon(1e-12));
}

TEST_CASE("ellipse asymmetry against the continuum value") {
  const double ratio = 1.44;
  const double a = std::sqrt(ratio), b = 1.0 / std::sqrt(ratio);
  // |E ∩ B_1| in polar coordinates; the optimal center is the ellipse center.
  auto rho = [&](double t) { return 1.0 / std::sqrt(std::pow(std::cos(t) / a, 2) + std::pow(std::sin(t) / b, 2)); };
  const double inter = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double t) { return 0.5 * std::pow(std::min(1.0, rho(t)), 2); }, 0.0, 2.0 * pi, 15, 1e-13);
  const double continuum = 2.0 * (pi - inter) / pi;

  const GridSet coarse = raster(ShapeSpec(Ellipse{{0.0, 0.0}, a, b}), 1.0 / 8);
  const Asymmetry ac = fraenkel_asymmetry(coarse);
  // Exhaustive scan with subsampled overlaps at the coarse resolution.
  const double r = equivalent_radius(coarse);
  double best = 0.0;
  for (int q = -8; q <= 8; ++q)
    for (int p = -8; p <= 8; ++p) best = std::max(best, sampled_overlap(coarse, p / 64.0, q / 64.0, r, 48));
  CHECK(std::abs(ac.A - 2.0 * (coarse.measure() - best) / coarse.measure()) < 5e-3);

  const Asymmetry af = fraenkel_asymmetry(raster(ShapeSpec(Ellipse{{0.0, 0.0}, a, b}), 1.0 / 64));
  CHECK(af.A > 0.0);
  CHECK(std::abs(af.A - continuum) < 0.01);
}

TEST_CASE("discrete ball") {
  CHECK(discrete_ball(2, 0.25, 13, {0.5, 0.5}, 3).count() == 13);
  const GridSet b = discrete_ball(2, 0.25, 12, {0.0, 0.0}, 3);
  CHECK(b.count() == 12);
  CHECK(symmetry_defect(b, 0) == 0);
  CHECK(symmetry_defect(b, 1) == 0);
  const GridSet line = discrete_ball(1, 0.5, 5, {0.0, 0.0}, 2);
  CHECK(line.count() == 5);
  CHECK_THROWS_AS(discrete_ball(2, 0.25, 0, {0.0, 0.0}, 3), Error);
}

TEST_CASE("deficit of a rasterized ball is zero") {
  const KernelParams params{2, 0.5};
  const double h = 1.0 / 16;
  const InteractionTable table = build_table(params, h);
  const GridSet disk = raster(ShapeSpec(Ball{2, {0.0, 0.0}, 1.0}), h);
  const DeficitReport rep = s_deficit(disk, table);
  CHECK(rep.Ds == 0.0);
  CHECK(rep.Ps == rep.PsBall);
  CHECK(rep.A < 4.0 * h);
  CHECK(rep.error_budget >= 0.0);
  CHECK(rep.flags.empty());

  CHECK_THROWS_AS(s_deficit(disk, build_table(params, h / 2)), Error);
  CHECK_THROWS_AS(s_deficit(disk, build_table({1, 0.5}, h)), Error);
  CHECK_THROWS_AS(s_deficit(GridSet(disk.spec()), table), Error);
}

TEST_CASE("deficit of two unit intervals") {
  const double s = 0.5;
  // Brute-force P_s of (0,1) ∪ (2,3): kernel integrated over E x E^c, the
  // inner integral in closed form. E is symmetric about 3/2, so only (0,1) is
  // integrated; each half of it is written in the distance to its endpoint.
  auto inner = [&](double x, double xr) {  // x in (0,1), xr = 1 - x
    return (std::pow(x, -s) + std::pow(2.0 + xr, -s) + std::pow(xr, -s) - std::pow(1.0 + xr, -s)) / s;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double brute = 2.0 * (ts.integrate([&](double x) { return inner(x, 1.0 - x); }, 0.0, 0.5, 1e-14) +
                              ts.integrate([&](double t) { return inner(1.0 - t, t); }, 0.0, 0.5, 1e-14));
  const double closed = 2.0 * oracle::interval_perimeter(1.0, s) -
                        2.0 * (2.0 * std::pow(2.0, 1.0 - s) - 1.0 - std::pow(3.0, 1.0 - s)) / (s * (1.0 - s));
  CHECK(brute == doctest::Approx(closed).epsilon(1e-9));

  const double h = 1.0 / 64;
  const GridSet e = raster(two_intervals(0.0, 1.0, 2.0, 3.0), h);
  const DeficitReport rep = s_deficit(e, build_table({1, s}, h));
  CHECK(rep.Ps == doctest::Approx(closed).epsilon(1e-8));
  CHECK(rep.PsBall == doctest::Approx(oracle::interval_perimeter(2.0, s)).epsilon(1e-8));
  CHECK(rep.r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rep.Ds > 0.0);
  CHECK(rep.A == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("deficit of an ellipse") {
  const double h = 1.0 / 16;
  const InteractionTable table = build_table({2, 0.5}, h);
  const double a = std::sqrt(1.44);
  const GridSet e = raster(ShapeSpec(Ellipse{{0.0, 0.0}, a, 1.0 / a}), h);
  const DeficitReport rep = s_deficit(e, table);
  CHECK(rep.Ds > rep.error_budget);
  CHECK(rep.A > 0.0);
  CHECK(rep.Ps == doctest::Approx(oracle::perimeter_direct(e, table, 4)).epsilon(1e-12));
  const GridSet ball = discrete_ball(2, h, e.count(), {0.0, 0.0}, 5);
  CHECK(rep.PsBall == doctest::Approx(oracle::perimeter_direct(ball, table, 4)).epsilon(1e-12));
}

TEST_CASE("csv row") {
  DeficitReport r;
  r.id = "egg";
  r.dim = 2;
  r.s = 0.5;
  r.h = 0.0625;
  r.Ps = 10.0;
  r.r = 1.0;
  r.PsBall = 9.0;
  r.Ds = 1.0 / 9.0;
  r.A = 0.25;
  r.center = {0.5, -0.25};
  r.error_budget = 1e-3;
  r.flags = {"Ds_gt_1", "x"};
  CHECK(deficit_csv_header() == "id,N,s,h,Ps,r,PsBall,Ds,A,cx,cy,err_budget,flags");
  const std::string row = deficit_csv_row(r);
  CHECK(std::count(row.begin(), row.end(), ',') == 12);
  CHECK(row.rfind("egg,2,0.5,0.0625,10,1,9,", 0) == 0);
  CHECK(row.substr(row.size() - 9) == "Ds_gt_1|x");
  std::istringstream in(row);
  std::string field;
  for (int k = 0; k < 8; ++k) std::getline(in, field, ',');
  CHECK(std::stod(field) == r.Ds);
}

TEST_CASE("lemma sandwich on symmetric sets") {
  const double h = 1.0 / 32;
  auto centered = [&](auto&& inside) {
    GridSet e(GridSpec::plane(96, 96, h, -1.5, -1.5));
    for (int j = 0; j < 96; ++j)
      for (int i = 0; i < 96; ++i)
        if (inside(e.spec().center(0, i), e.spec().center(1, j))) e.set(i, j, true);
    return e;
  };
  const GridSet annulus = centered([](double x, double y) {
    const double m = std::max(std::abs(x), std::abs(y));
    return m < 1.2 && m > 0.6;
  });
  const GridSet cross = centered([](double x, double y) {
    return (std::abs(x) < 1.2 && std::abs(y) < 0.3) || (std::abs(y) < 1.2 && std::abs(x) < 0.3);
  });
  const GridSet disk = centered([](double x, double y) { return std::hypot(x, y) < 0.9; });
  const GridSet bar = centered([](double x, double y) { return std::abs(x) < 1.3 && std::abs(y) < 0.25; });

  for (const GridSet* e : {&annulus, &cross, &bar}) {
    const LemmaCheck c = lemma_tre_check(*e);
    CHECK(c.holds);
    CHECK(c.A > 0.0);
    CHECK(c.centered_ratio >= c.A - 1e-12);
    CHECK(c.centered_ratio <= 3.0 * c.A + 1e-12);
  }
  const LemmaCheck d = lemma_tre_check(disk);
  CHECK(d.holds);
  CHECK(d.centered_ratio < 0.05);

  GridSet lopsided = cross;
  lopsided.set(3, 48, true);
  CHECK_THROWS_AS(lemma_tre_check(lopsided), Error);
  try {
    lemma_tre_check(lopsided);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::PreconditionViolation);
    CHECK(std::string(err.what()).find("(3,48)") != std::string::npos);
  }
  CHECK(lemma_tre_check(lopsided, 2).holds);
}

TEST_CASE("symmetrization of symmetric input is the identity") {
  const double h = 1.0 / 16;
  const InteractionTable table = build_table({2, 0.5}, h);
  const GridSet egg = raster(ShapeSpec(Ellipse{{0.0, 0.0}, 1.25, 0.8}), h);
  const Symmetrization out = n_symmetrize(egg, table);
  CHECK(out.F.count() == egg.count());
  CHECK(out.Ds_final == doctest::Approx(out.Ds_initial).epsilon(1e-12));
  CHECK(out.trail.size() == 4);
  CHECK_FALSE(out.bound_violated);
}

TEST_CASE("symmetrization of an asymmetric 1D pair") {
  const double h = 1.0 / 32;
  const InteractionTable table = build_table({1, 0.5}, h);
  const GridSet e = raster(two_intervals(0.0, 1.0, 1.5, 3.25), h);
  const Symmetrization out = n_symmetrize(e, table);
  CHECK(out.F.count() == e.count());
  CHECK(reflect(out.F, 0, out.trail.front().plane) == out.F);
  CHECK(out.Ds_final <= 2.0 * out.Ds_initial + 1e-9);
  CHECK_FALSE(out.bound_violated);
  for (const auto& entry : out.trail) CHECK(entry.reflection_ok);
}

TEST_CASE("symmetrization recenters an off-center ellipse") {
  const double h = 1.0 / 16;
  const InteractionTable table = build_table({2, 0.5}, h);
  const GridSet e = raster(ShapeSpec(Ellipse{{0.37, -0.21}, 1.3, 0.7}), h);
  const Symmetrization out = n_symmetrize(e, table);
  const long parity = static_cast<long>(out.F.count()) - static_cast<long>(e.count());
  CHECK(std::abs(parity) <= e.spec().cells[0] + e.spec().cells[1]);
  for (const auto& entry : out.trail)
    if (entry.selected) CHECK(reflect(out.F, entry.axis, entry.plane) == out.F);
  CHECK(out.Ds_final <= 4.0 * out.Ds_initial + 1e-9);
  for (const auto& entry : out.trail) CHECK(entry.reflection_ok);
}
