#include "fracperim/rearrange.hpp"

#include "fracperim/error.hpp"
#include "fracperim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>

namespace fracperim {

double distribution_function(const GridFunction& g, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidParameter, "distribution function needs t > 0");
  const auto n = std::count_if(g.values().begin(), g.values().end(), [t](double v) { return v > t; });
  return static_cast<double>(n) * g.spec().cell_volume();
}

std::vector<std::size_t> rearrangement_fill_order(const GridSpec& spec) {
  // Doubled offsets from the center are integers, so distances compare exactly.
  const int nx = spec.cells[0];
  const int ny = spec.cells[1];
  std::vector<std::int64_t> dist2(spec.size());
  for (int j = 0; j < ny; ++j) {
    const std::int64_t dy = spec.dim == 2 ? 2 * j + 1 - ny : 0;
    for (int i = 0; i < nx; ++i) {
      const std::int64_t dx = 2 * i + 1 - nx;
      dist2[spec.index(i, j)] = dx * dx + dy * dy;
    }
  }
  std::vector<std::size_t> order(spec.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dist2[a] != dist2[b]) return dist2[a] < dist2[b];
    return a > b;
  });
  return order;
}

GridFunction symmetric_rearrangement(const GridFunction& g) {
  std::vector<double> sorted = g.values();
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::vector<std::size_t> order = rearrangement_fill_order(g.spec());
  std::vector<double> out(sorted.size(), 0.0);
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = sorted[k];
  return GridFunction(g.spec(), std::move(out));
}

double dirichlet_energy(const GridFunction& g) {
  const GridSpec& spec = g.spec();
  const CellBox box = g.support_box();
  if (box.empty()) return 0.0;
  const bool halo = box.lo[0] > 0 && box.hi[0] < spec.cells[0] &&
                    (spec.dim == 1 || (box.lo[1] > 0 && box.hi[1] < spec.cells[1]));
  if (!halo) throw Error(ErrorCode::MissingHalo, "support touches the domain boundary");
  CompensatedSum acc;
  for (int j = 0; j < spec.cells[1]; ++j) {
    for (int i = 0; i < spec.cells[0]; ++i) {
      const double v = g.at(i, j);
      if (i + 1 < spec.cells[0]) {
        const double d = g.at(i + 1, j) - v;
        acc.add(d * d);
      }
      if (spec.dim == 2 && j + 1 < spec.cells[1]) {
        const double d = g.at(i, j + 1) - v;
        acc.add(d * d);
      }
    }
  }
  return acc.value() * std::pow(spec.h, spec.dim - 2);
}

namespace {

double mirror_defect(const GridFunction& g, int axis) {
  const GridSpec& spec = g.spec();
  double worst = 0.0;
  for (int j = 0; j < spec.cells[1]; ++j) {
    for (int i = 0; i < spec.cells[0]; ++i) {
      const int mi = axis == 0 ? spec.cells[0] - 1 - i : i;
      const int mj = axis == 1 ? spec.cells[1] - 1 - j : j;
      worst = std::max(worst, std::abs(g.at(i, j) - g.at(mi, mj)));
    }
  }
  return worst;
}

}  // namespace

RearrangeReport polya_szego_report(const GridFunction& g) {
  const GridFunction sharp = symmetric_rearrangement(g);
  const double vol = g.spec().cell_volume();
  RearrangeReport r;
  CompensatedSum l1;
  std::size_t support = 0;
  for (std::size_t k = 0; k < g.values().size(); ++k) {
    l1.add(std::abs(g.values()[k] - sharp.values()[k]));
    if (g.values()[k] > 0.0) ++support;
  }
  r.l1_distance = l1.value() * vol;
  r.support_measure = static_cast<double>(support) * vol;
  r.energy_g = dirichlet_energy(g);
  r.energy_gsharp = dirichlet_energy(sharp);
  r.gap = r.energy_g - r.energy_gsharp;
  for (int axis = 0; axis < g.spec().dim; ++axis) r.symmetry_defect = std::max(r.symmetry_defect, mirror_defect(g, axis));
  return r;
}

}  // namespace fracperim
