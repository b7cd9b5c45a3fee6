// Acceptance criteria: one PASS/FAIL line per criterion.
//   acceptance [--report FILE] [--allow-failures]
// The exit code is the number of failed criteria unless --allow-failures.

#include "fracperim/deficit.hpp"
#include "fracperim/error.hpp"
#include "fracperim/experiments.hpp"
#include "fracperim/extension.hpp"
#include "fracperim/grid_geometry.hpp"
#include "fracperim/kernel.hpp"
#include "fracperim/rearrange.hpp"
#include "fracperim/shape.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fracperim;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();

struct Outcome {
  bool passed = false;
  std::string summary;
};

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

ShapeSpec interval_pair(double a0, double a1, double b0, double b1) {
  return ShapeSpec(ShapeUnion{{ShapeSpec(Interval{a0, a1}), ShapeSpec(Interval{b0, b1})}});
}

GridSet symmetric_grid_set(double half, double h, const std::function<bool(double, double)>& inside) {
  const int n = static_cast<int>(std::lround(2.0 * half / h));
  GridSet e(GridSpec::plane(n, n, h, -half, -half));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (inside(e.spec().center(0, i), e.spec().center(1, j))) e.set(i, j, true);
  return e;
}

// 1. P_s((0, L)) = 2 L^(1-s) / (s (1-s)) at h = 2^-9 L.
Outcome interval_closed_form() {
  double worst = 0.0, slowest = 0.0;
  for (double length : {1.0, 2.0})
    for (double s : {0.25, 0.5, 0.75}) {
      Clock clock;
      const double h = std::ldexp(length, -9);
      const InteractionTable table = build_table({1, s}, h);
      const GridSet e = rasterize_shape(ShapeSpec(Interval{0.0, length}), h, 4);
      const double got = fractional_perimeter(e, table);
      slowest = std::max(slowest, clock.seconds());
      worst = std::max(worst, std::abs(got / (2.0 * std::pow(length, 1.0 - s) / (s * (1.0 - s))) - 1.0));
    }
  return {worst <= 1e-4 && slowest < 10.0,
          "max rel err " + num(worst) + " (tol 1e-4), slowest case " + num(slowest, 3) + " s (limit 10 s)"};
}

// 2. P_s(lambda E; lambda h) = lambda^(N-s) P_s(E; h).
Outcome scaling_homogeneity() {
  double worst_ratio = 0.0, worst_dev = 0.0;
  for (int dim : {1, 2})
    for (double s : {0.25, 0.5, 0.75}) {
      const ShapeSpec shape =
          dim == 1 ? interval_pair(-1.0, 0.3, 0.7, 1.6) : ShapeSpec(FourierDisk{{0.05, -0.1}, 0.9, 0.2, 3});
      const double h = dim == 1 ? 1.0 / 256 : 1.0 / 32;
      const GridSet e = rasterize_shape(shape, h, 4);
      const InteractionTable table = build_table({dim, s}, h);
      const double base = fractional_perimeter(e, table);
      for (double lambda : {2.0, 4.0}) {
        GridSpec spec = e.spec();
        spec.h *= lambda;
        for (int a = 0; a < dim; ++a) spec.origin[a] *= lambda;
        const double scaled = fractional_perimeter(GridSet(spec, e.occupancy()), table.rescaled(spec.h));
        const double expected = std::pow(lambda, dim - s) * base;
        const double dev = std::abs(scaled - expected);
        const double allowed = static_cast<double>(e.count()) * eps * std::abs(expected);
        worst_dev = std::max(worst_dev, dev / std::abs(expected));
        worst_ratio = std::max(worst_ratio, dev / allowed);
      }
    }
  return {worst_ratio <= 1.0, "max rel deviation " + num(worst_dev) + " = " + num(worst_ratio) +
                                  " x (ulp * term count) allowance"};
}

struct LimitShapes {
  std::vector<std::pair<std::string, ShapeSpec>> shapes = {
      {"disk", ShapeSpec(Ball{2, {0.0, 0.0}, 1.0})},
      {"square", ShapeSpec(AxisBox{2, {-0.9, -0.9}, {0.9, 0.9}})},
      {"ellipse2:1", ShapeSpec(Ellipse{{0.0, 0.0}, std::sqrt(2.0), std::sqrt(0.5)})},
  };
};

// 3. (1 - s) P_s / P at s = 0.99: shape-independent in 2D, close to 1 in 1D.
Outcome high_s_limit() {
  const double s = 0.99, h = 1.0 / 128;
  const InteractionTable table = build_table({2, s}, h);
  std::vector<double> ratios;
  std::string detail;
  for (const auto& [name, shape] : LimitShapes{}.shapes) {
    const double ps = fractional_perimeter(rasterize_shape(shape, h, 4), table);
    ratios.push_back((1.0 - s) * ps / shape.perimeter());
    detail += name + "=" + num(ratios.back(), 5) + " ";
  }
  double spread = 0.0;
  for (double a : ratios)
    for (double b : ratios) spread = std::max(spread, std::abs(a / b - 1.0));
  double worst_1d = 0.0;
  for (double length : {1.0, 2.0}) {
    const double h1 = std::ldexp(length, -9);
    const double ps = fractional_perimeter(rasterize_shape(ShapeSpec(Interval{0.0, length}), h1, 4),
                                           build_table({1, s}, h1));
    const double ratio = (1.0 - s) * ps / 2.0;
    worst_1d = std::max(worst_1d, std::abs(ratio - 1.0));
    detail += "interval" + num(length, 2) + "=" + num(ratio, 5) + " ";
  }
  return {spread <= 0.05 && worst_1d <= 0.03, "2D pairwise spread " + num(spread) + " (tol 0.05); 1D |ratio-1| " +
                                                  num(worst_1d) + " (tol 0.03); " + detail};
}

// 4. s P_s / (N |B| |E|) at s = 0.01.
Outcome low_s_limit() {
  const double s = 0.01, h = 1.0 / 128;
  const InteractionTable table = build_table({2, s}, h);
  double worst = 0.0;
  std::string detail;
  for (const auto& [name, shape] : LimitShapes{}.shapes) {
    const GridSet e = rasterize_shape(shape, h, 4);
    const double ratio = s * fractional_perimeter(e, table) / (2.0 * pi * e.measure());
    worst = std::max(worst, std::abs(ratio - 1.0));
    detail += name + "=" + num(ratio, 5) + " ";
  }
  double worst_1d = 0.0;
  for (double length : {1.0, 2.0}) {
    const double h1 = std::ldexp(length, -9);
    const GridSet e = rasterize_shape(ShapeSpec(Interval{0.0, length}), h1, 4);
    const double ratio = s * fractional_perimeter(e, build_table({1, s}, h1)) / (2.0 * length);
    const double exact = std::pow(length, -s) / (1.0 - s);
    worst_1d = std::max(worst_1d, std::abs(ratio / exact - 1.0));
    detail += "interval" + num(length, 2) + "=" + num(ratio, 6) + " ";
  }
  return {worst <= 0.03 && worst_1d <= 1e-3, "2D max |ratio-1| " + num(worst) + " (tol 0.03); 1D rel err vs exact " +
                                                 num(worst_1d) + " (tol 1e-3); " + detail};
}

std::vector<FamilyMember> all_members(int dim) {
  std::vector<FamilyMember> out;
  const std::vector<std::string> names =
      dim == 1 ? std::vector<std::string>{"two-intervals", "two-balls"}
               : std::vector<std::string>{"ellipse-ecc", "fourier-disk", "dumbbell", "two-balls", "offset-bump"};
  for (const auto& f : names)
    for (auto& m : generate_family(f, {}, dim)) out.push_back(std::move(m));
  return out;
}

double family_h(int dim) { return dim == 1 ? 1.0 / 128 : 1.0 / 32; }

// 5. P_s(E) >= P_s(B_r) - error budget over every family member.
Outcome isoperimetric() {
  TableCache tables;
  int total = 0, violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int dim : {1, 2})
    for (double s : {0.25, 0.5, 0.75})
      for (const auto& m : all_members(dim)) {
        const SweepRecord r = evaluate_member(m, {dim, s}, family_h(dim), tables, 4, 1);
        ++total;
        worst = std::min(worst, r.Ds + r.error_budget);
        if (r.Ds < -r.error_budget) ++violations;
      }
  return {violations == 0, std::to_string(total) + " sets, " + std::to_string(violations) +
                               " violations; min (D_s + budget) " + num(worst)};
}

// 6. (gamma / 2) energy predicts P_s after one calibration; kernel normalization.
Outcome extension_identity() {
  double worst = 0.0;
  std::string detail;
  struct Case {
    int dim;
    double h;
    ShapeSpec reference, cross;
    std::vector<ShapeSpec> held_out;
  };
  const std::vector<Case> cases = {
      {1, 1.0 / 64, ShapeSpec(Interval{0.0, 2.0}), ShapeSpec(Interval{0.0, 1.0}),
       {interval_pair(0.0, 1.0, 2.0, 3.0), ShapeSpec(Interval{0.0, 3.0})}},
      {2, 1.0 / 16, ShapeSpec(Ball{2, {0.0, 0.0}, 1.0}), ShapeSpec(Ellipse{{0.0, 0.0}, 1.2, 0.8}),
       {ShapeSpec(Ellipse{{0.0, 0.0}, 1.4, 0.7}), ShapeSpec(AxisBox{2, {-0.9, -0.9}, {0.9, 0.9}})}},
  };
  for (const auto& c : cases) {
    const KernelParams params{c.dim, 0.5};
    CalibrationSettings settings;
    settings.h = c.h;
    const CalibrationRecord rec = calibrate_gamma(c.reference, c.cross, params, settings);
    detail += "gamma" + std::to_string(c.dim) + "=" + num(rec.gamma, 5) + " ";
    for (const auto& shape : c.held_out) {
      const double predicted = 0.5 * rec.gamma * shape_extension_energy(shape, params, settings);
      const double direct = shape_perimeter(shape, params, settings);
      worst = std::max(worst, std::abs(predicted / direct - 1.0));
    }
  }
  // The kernel depends on x - y only; the mass is integrated outward from the
  // peak at y = x in units of z, where the quadrature resolves it at any z.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uz(0.01, 5.0);
  double mass_err = 0.0;
  for (int dim : {1, 2}) {
    const KernelParams params{dim, 0.5};
    for (int k = 0; k < 20; ++k) {
      const double z = uz(rng);
      boost::math::quadrature::exp_sinh<double> q;
      const double mass = q.integrate(
          [&](double u) {
            const double p = z * poisson_kernel(params, z * u, z);
            return dim == 1 ? 2.0 * p : 2.0 * pi * z * u * p;
          },
          0.0, std::numeric_limits<double>::infinity(), 1e-13);
      mass_err = std::max(mass_err, std::abs(mass - 1.0));
    }
  }
  return {worst <= 0.02 && mass_err <= 1e-6, "max held-out rel err " + num(worst) + " (tol 0.02); kernel mass err " +
                                                 num(mass_err) + " (tol 1e-6); " + detail};
}

// 7. Energies of u* against u, x- and z-parts, with refinement tolerances
// from the pairs (h, h/2) and (h/2, h/4).
Outcome rearrangement_energies() {
  const std::vector<std::pair<std::string, ShapeSpec>> sets = {
      {"ellipse", ShapeSpec(Ellipse{{0.1, 0.0}, 1.3, 0.6})},
      {"fourier", ShapeSpec(FourierDisk{{0.0, 0.05}, 0.9, 0.25, 3})},
      {"bump", generate_family("offset-bump", {0.4}).front().shape},
  };
  const std::vector<double> hs = {1.0 / 8, 1.0 / 16, 1.0 / 32};
  bool ok = true;
  double min_shrink = std::numeric_limits<double>::infinity();
  double worst_excess = -std::numeric_limits<double>::infinity();
  std::string detail;
  for (const auto& [name, shape] : sets) {
    std::vector<std::array<double, 4>> e;  // x(u), x(u*), z(u), z(u*)
    for (double h : hs) {
      const GridSet set = rasterize_shape(shape, h, 4);
      const ExtensionSetup setup = prepare_extension(set);
      const ExtensionField u = poisson_extend(setup.datum, setup.grid, {2, 0.5});
      const ExtensionEnergy a = extension_energy(u);
      const ExtensionEnergy b = extension_energy(horizontal_rearrange(u));
      e.push_back({a.x_part, b.x_part, a.z_part, b.z_part});
    }
    for (int part : {0, 2}) {
      auto tol = [&](std::size_t k) {
        return std::abs(e[k][part] - e[k + 1][part]) + std::abs(e[k][part + 1] - e[k + 1][part + 1]);
      };
      const double coarse = tol(0), fine = tol(1);
      const double shrink = coarse / fine;
      const double excess = e[2][part + 1] - e[2][part] - fine;
      min_shrink = std::min(min_shrink, shrink);
      worst_excess = std::max(worst_excess, excess);
      ok = ok && excess <= 0.0 && shrink >= 1.5;
      detail += name + (part == 0 ? ".x" : ".z") + ": gap " + num(e[2][part] - e[2][part + 1]) + " tol " +
                num(fine) + " shrink " + num(shrink, 3) + "; ";
    }
  }
  return {ok, "max (E(u*) - E(u) - tol) " + num(worst_excess) + " (need <= 0); min tolerance shrink " +
                  num(min_shrink, 3) + " (need >= 1.5); " + detail};
}

// Off-center, genuinely asymmetric sets for the bisection criteria.
std::vector<std::pair<GridSet, int>> bisection_sets() {
  std::vector<std::pair<GridSet, int>> out;
  for (int dim : {1, 2})
    for (const auto& m : all_members(dim)) {
      const ShapeSpec moved = m.shape.translated(0.13, dim == 2 ? -0.07 : 0.0);
      out.emplace_back(rasterize_shape(moved, family_h(dim), 4), dim);
    }
  return out;
}

// 8. P_s(E) >= (P_s(F+) + P_s(F-)) / 2 - tol for every bisection.
Outcome reflection_inequality() {
  int total = 0, violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (double s : {0.25, 0.5, 0.75}) {
    TableCache tables;
    for (const auto& [e, dim] : bisection_sets()) {
      const InteractionTable& table = tables.get({dim, s}, e.spec().h);
      const double pe = fractional_perimeter(e, table);
      for (int axis = 0; axis < dim; ++axis) {
        const Bisection b = bisect_halves(e, axis);
        const double avg = 0.5 * (fractional_perimeter(b.plus, table) + fractional_perimeter(b.minus, table));
        ++total;
        worst = std::max(worst, (avg - pe) / pe);
        if (pe < avg - 1e-9 * pe) ++violations;
      }
    }
  }
  return {violations == 0, std::to_string(total) + " bisections, " + std::to_string(violations) +
                               " violations; max (avg - P_s(E)) / P_s(E) " + num(worst) + " (tol 1e-9)"};
}

// 9. n_symmetrize: |F| = |E| up to parity cells, N-symmetry, D_s(F) <= 2^N D_s(E) + tol.
Outcome symmetrization() {
  std::vector<std::pair<std::string, ShapeSpec>> sets = {
      {"pair1d-a", interval_pair(0.0, 1.0, 1.5, 3.25)},
      {"pair1d-b", interval_pair(-2.0, -0.5, 0.25, 0.75)},
      {"pair1d-c", interval_pair(0.1, 0.4, 1.0, 2.6)},
      {"ellipse-off", ShapeSpec(Ellipse{{0.37, -0.21}, 1.3, 0.7})},
      {"fourier3", ShapeSpec(FourierDisk{{0.1, 0.2}, 0.95, 0.2, 3})},
      {"fourier5", ShapeSpec(FourierDisk{{-0.2, 0.1}, 0.95, 0.15, 5})},
      {"bump", generate_family("offset-bump", {0.3}).front().shape.translated(0.1, 0.15)},
      {"disks-unequal", ShapeSpec(DiskPair{{-0.5, 0.1}, 0.9, {0.8, -0.3}, 0.5})},
      {"disks-apart", ShapeSpec(DiskPair{{-1.2, 0.0}, 0.7, {0.9, 0.6}, 0.45})},
      {"dumbbell-off", ShapeSpec(Dumbbell{{0.2, -0.3}, 0.6, 0.9, 0.3})},
      {"union", ShapeSpec(ShapeUnion{{ShapeSpec(Ball{2, {-0.8, 0.0}, 0.6}),
                                      ShapeSpec(AxisBox{2, {0.2, -0.2}, {1.4, 0.9}})}})},
  };
  TableCache tables;
  int failures = 0;
  std::string detail;
  for (const auto& [name, shape] : sets) {
    const int dim = shape.dim();
    const double h = dim == 1 ? 1.0 / 64 : 1.0 / 32;
    const GridSet e = rasterize_shape(shape, h, 4);
    const InteractionTable& table = tables.get({dim, 0.5}, h);
    const Symmetrization out = n_symmetrize(e, table);
    const DeficitReport re = s_deficit(e, table);
    const DeficitReport rf = s_deficit(out.F, table);
    const double tol = re.error_budget + rf.error_budget;
    const bool deficit_ok = rf.Ds <= std::pow(2.0, dim) * re.Ds + tol;
    bool symmetric = true;
    long parity_allowance = 0;
    const CellBox box = e.bounding_box();
    for (const auto& entry : out.trail) {
      if (!entry.selected) continue;
      symmetric = symmetric && reflect(out.F, entry.axis, entry.plane) == out.F;
      parity_allowance += dim == 1 ? 1 : box.extent(1 - entry.axis);
    }
    const long diff = std::labs(static_cast<long>(out.F.count()) - static_cast<long>(e.count()));
    const bool ok = deficit_ok && symmetric && diff <= parity_allowance;
    if (!ok) ++failures;
    detail += name + (ok ? "" : "[FAIL]") + ": Ds " + num(re.Ds, 3) + "->" + num(rf.Ds, 3) + " d|F| " +
              std::to_string(diff) + "; ";
  }
  return {failures == 0 && sets.size() >= 10,
          std::to_string(sets.size()) + " sets, " + std::to_string(failures) + " failures; " + detail};
}

// 10. A <= |E △ B_r(c)| / |B_r| <= 3A on N-symmetric sets.
Outcome lemma_sandwich() {
  const double h = 1.0 / 32;
  std::vector<std::pair<std::string, GridSet>> sets = {
      {"square-annulus", symmetric_grid_set(1.5, h, [](double x, double y) {
         const double m = std::max(std::abs(x), std::abs(y));
         return m < 1.2 && m > 0.6;
       })},
      {"cross", symmetric_grid_set(1.5, h, [](double x, double y) {
         return (std::abs(x) < 1.2 && std::abs(y) < 0.3) || (std::abs(y) < 1.2 && std::abs(x) < 0.3);
       })},
      {"disk", symmetric_grid_set(1.5, h, [](double x, double y) { return std::hypot(x, y) < 0.9; })},
      {"bar", symmetric_grid_set(1.5, h, [](double x, double y) { return std::abs(x) < 1.3 && std::abs(y) < 0.25; })},
      {"ellipse", rasterize_shape(ShapeSpec(Ellipse{{0.0, 0.0}, 1.4, 0.6}), h, 4)},
      {"fourier4", rasterize_shape(ShapeSpec(FourierDisk{{0.0, 0.0}, 1.0, 0.3, 4}), h, 4)},
      {"two-disks", rasterize_shape(generate_family("two-balls", {0.5}).front().shape, h, 4)},
      {"pair1d", rasterize_shape(interval_pair(-1.5, -0.25, 0.25, 1.5), 1.0 / 64, 4)},
  };
  int failures = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::string detail;
  for (const auto& [name, e] : sets) {
    const LemmaCheck c = lemma_tre_check(e);
    min_slack = std::min({min_slack, c.lower_slack, c.upper_slack});
    if (!c.holds) ++failures;
    detail += name + ": A " + num(c.A, 3) + " ratio " + num(c.centered_ratio, 3) + "; ";
  }
  return {failures == 0, std::to_string(sets.size()) + " sets, " + std::to_string(failures) + " failures; min slack " +
                             num(min_slack) + " (tol 1e-12); " + detail};
}

// 11. A / D_s^(s/4) bounded and log-log slope >= s/4 - 0.02.
Outcome exponent_study_criterion() {
  Clock clock;
  ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.s_list = {0.5};
  cfg.h_list = {1.0 / 128};
  cfg.families = {"ellipse-ecc", "fourier-disk"};
  const ExponentStudy study = exponent_study(cfg);
  const double elapsed = clock.seconds();
  bool ok = elapsed < 600.0;
  std::string detail;
  for (const auto& f : study.fits) {
    ok = ok && f.bounded && std::isfinite(f.max_ratio) && f.slope >= 0.5 / 4 - 0.02 && f.points >= 4;
    detail += f.family + ": slope " + num(f.slope, 4) + " max ratio " + num(f.max_ratio, 4) + " points " +
              std::to_string(f.points) + (f.bounded ? "" : " DIVERGING") + "; ";
  }
  return {ok, detail + "runtime " + num(elapsed, 3) + " s (limit 600 s)"};
}

// Smooth, clearly non-radial test functions with compact support.
GridFunction smooth_function(int k, double h) {
  const double half = 1.5;
  const int n = static_cast<int>(std::lround(2.0 * half / h));
  GridFunction g(GridSpec::plane(n, n, h, -half, -half));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = g.spec().center(0, i), y = g.spec().center(1, j);
      const double r = std::hypot(x, y) / 1.3;
      if (r >= 1.0) continue;
      const double cutoff = std::exp(1.0 - 1.0 / (1.0 - r * r));
      double v;
      if (k < 10) {
        const double cx = 0.1 * (k % 3), cy = -0.05 * (k % 2);
        const double sx = 0.35, sy = 0.35 / (1.3 + 0.2 * k);
        v = std::exp(-0.5 * (std::pow((x - cx) / sx, 2) + std::pow((y - cy) / sy, 2)));
      } else {
        const double sep = 0.3 + 0.05 * (k - 10);
        v = std::exp(-(std::pow(x - sep, 2) + y * y) / 0.04) +
            (0.5 + 0.05 * (k - 10)) * std::exp(-(std::pow(x + sep, 2) + std::pow(y - 0.1, 2)) / 0.06);
      }
      g.set(i, j, v * cutoff);
    }
  return g;
}

// 12. dirichlet_energy(g#) <= dirichlet_energy(g) + tol, exact equimeasurability.
Outcome polya_szego() {
  const double h = 1.0 / 32;
  int failures = 0;
  bool equimeasurable = true;
  double min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const GridFunction g = smooth_function(k, h), g2 = smooth_function(k, h / 2);
    const GridFunction gs = symmetric_rearrangement(g), gs2 = symmetric_rearrangement(g2);
    for (const auto* pair : {&g, &g2}) {
      const GridFunction& other = pair == &g ? gs : gs2;
      std::vector<double> a = pair->values(), b = other.values();
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      equimeasurable = equimeasurable && a == b;
    }
    const double eg = dirichlet_energy(g), egs = dirichlet_energy(gs);
    const double tol = std::abs(eg - dirichlet_energy(g2)) + std::abs(egs - dirichlet_energy(gs2));
    const double margin = eg + tol - egs;
    min_margin = std::min(min_margin, margin);
    if (margin < 0.0) ++failures;
  }
  return {failures == 0 && equimeasurable, "20 functions, " + std::to_string(failures) +
                                               " failures; min (E(g) + tol - E(g#)) " + num(min_margin) +
                                               "; equimeasurable " + (equimeasurable ? "yes" : "NO")};
}

}  // namespace

int main(int argc, char** argv) {
  std::string report_path;
  bool allow_failures = false;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--report" && a + 1 < argc) report_path = argv[++a];
    else if (arg == "--allow-failures") allow_failures = true;
    else {
      std::cerr << "usage: acceptance [--report FILE] [--allow-failures]\n";
      return 64;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1D closed-form interval perimeter", interval_closed_form},
      {"scaling homogeneity", scaling_homogeneity},
      {"s -> 1 shape-independent limit", high_s_limit},
      {"s -> 0 volume limit", low_s_limit},
      {"isoperimetric inequality over families", isoperimetric},
      {"extension energy identity", extension_identity},
      {"horizontal rearrangement energies", rearrangement_energies},
      {"reflection inequality", reflection_inequality},
      {"N-symmetrization conclusions", symmetrization},
      {"centered-ball sandwich", lemma_sandwich},
      {"asymmetry against deficit exponent study", exponent_study_criterion},
      {"Polya-Szego for the discrete rearrangement", polya_szego},
  };
  std::ostringstream report;
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    Clock clock;
    try {
      o = criteria[k].second();
    } catch (const std::exception& err) {
      o = {false, std::string("exception: ") + err.what()};
    }
    if (!o.passed) ++failed;
    std::ostringstream line;
    line << (o.passed ? "PASS" : "FAIL") << " [" << k + 1 << "] " << criteria[k].first << " (" << num(clock.seconds(), 3)
         << " s): " << o.summary;
    std::cout << line.str() << std::endl;
    report << line.str() << '\n';
  }
  const std::string total = std::to_string(criteria.size() - failed) + "/" + std::to_string(criteria.size()) +
                            " criteria passed";
  std::cout << total << std::endl;
  report << total << '\n';
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    out << report.str();
  }
  return allow_failures ? 0 : failed;
}
