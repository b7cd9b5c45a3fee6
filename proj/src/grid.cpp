#include "fracperim/grid.hpp"

#include "fracperim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fracperim {

GridSpec GridSpec::line(int n, double h, double origin) {
  GridSpec spec;
  spec.dim = 1;
  spec.cells = {n, 1};
  spec.h = h;
  spec.origin = {origin, 0.0};
  spec.validate();
  return spec;
}

GridSpec GridSpec::plane(int nx, int ny, double h, double ox, double oy) {
  GridSpec spec;
  spec.dim = 2;
  spec.cells = {nx, ny};
  spec.h = h;
  spec.origin = {ox, oy};
  spec.validate();
  return spec;
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InvalidParameter, "grid dim must be 1 or 2");
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidParameter, "cell size must be positive");
  if (cells[0] <= 0 || cells[1] <= 0) throw Error(ErrorCode::InvalidParameter, "grid extents must be positive");
  if (dim == 1 && cells[1] != 1) throw Error(ErrorCode::InvalidParameter, "1D grid has a single row");
  if (!std::isfinite(origin[0]) || !std::isfinite(origin[1]))
    throw Error(ErrorCode::InvalidParameter, "grid origin must be finite");
}

CellBox CellBox::dilated(int margin, int dim) const {
  CellBox out = *this;
  for (int a = 0; a < dim; ++a) {
    out.lo[a] -= margin;
    out.hi[a] += margin;
  }
  return out;
}

GridSet::GridSet(GridSpec spec) : spec_(spec) {
  spec_.validate();
  occ_.assign(spec_.size(), 0);
}

GridSet::GridSet(GridSpec spec, std::vector<std::uint8_t> occupancy)
    : spec_(spec), occ_(std::move(occupancy)) {
  spec_.validate();
  if (occ_.size() != spec_.size())
    throw Error(ErrorCode::InvalidParameter, "occupancy size does not match grid");
  for (auto& v : occ_) v = v ? 1 : 0;
}

std::size_t GridSet::count() const {
  return static_cast<std::size_t>(std::count(occ_.begin(), occ_.end(), std::uint8_t{1}));
}

CellBox GridSet::bounding_box() const {
  CellBox box{{spec_.cells[0], spec_.cells[1]}, {0, 0}};
  bool any = false;
  for (int j = 0; j < spec_.cells[1]; ++j) {
    for (int i = 0; i < spec_.cells[0]; ++i) {
      if (!at(i, j)) continue;
      any = true;
      box.lo[0] = std::min(box.lo[0], i);
      box.lo[1] = std::min(box.lo[1], j);
      box.hi[0] = std::max(box.hi[0], i + 1);
      box.hi[1] = std::max(box.hi[1], j + 1);
    }
  }
  if (!any) return CellBox{};
  return box;
}

std::vector<std::array<int, 2>> GridSet::occupied_cells() const {
  std::vector<std::array<int, 2>> out;
  for (int j = 0; j < spec_.cells[1]; ++j)
    for (int i = 0; i < spec_.cells[0]; ++i)
      if (at(i, j)) out.push_back({i, j});
  return out;
}

GridFunction::GridFunction(GridSpec spec) : spec_(spec) {
  spec_.validate();
  values_.assign(spec_.size(), 0.0);
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  spec_.validate();
  if (values_.size() != spec_.size())
    throw Error(ErrorCode::InvalidParameter, "value count does not match grid");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::InvalidParameter, "grid function values must be finite and nonnegative");
  }
}

GridFunction GridFunction::indicator(const GridSet& set, double scale) {
  GridFunction g(set.spec());
  for (std::size_t k = 0; k < g.values_.size(); ++k) g.values_[k] = set.occupancy()[k] ? scale : 0.0;
  return g;
}

double GridFunction::max() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

CellBox GridFunction::support_box() const {
  CellBox box{{spec_.cells[0], spec_.cells[1]}, {0, 0}};
  bool any = false;
  for (int j = 0; j < spec_.cells[1]; ++j) {
    for (int i = 0; i < spec_.cells[0]; ++i) {
      if (!(at(i, j) > 0.0)) continue;
      any = true;
      box.lo[0] = std::min(box.lo[0], i);
      box.lo[1] = std::min(box.lo[1], j);
      box.hi[0] = std::max(box.hi[0], i + 1);
      box.hi[1] = std::max(box.hi[1], j + 1);
    }
  }
  if (!any) return CellBox{};
  return box;
}

}  // namespace fracperim
