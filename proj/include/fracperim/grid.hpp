#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace fracperim {

/// Axis-aligned raster domain in one or two dimensions.
///
/// Cell (i, j) covers [origin + i*h, origin + (i+1)*h] along each axis; its
/// center is reproduced exactly from (origin, h, index). For dim == 1 the
/// second axis is a single dummy cell.
struct GridSpec {
  int dim = 1;
  std::array<int, 2> cells{1, 1};
  double h = 1.0;
  std::array<double, 2> origin{0.0, 0.0};

  static GridSpec line(int n, double h, double origin = 0.0);
  static GridSpec plane(int nx, int ny, double h, double ox = 0.0, double oy = 0.0);

  /// Throws InvalidParameter when the spec violates its invariants.
  void validate() const;

  std::size_t size() const { return static_cast<std::size_t>(cells[0]) * cells[1]; }
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * cells[0] + static_cast<std::size_t>(i);
  }
  bool in_range(int i, int j = 0) const {
    return i >= 0 && j >= 0 && i < cells[0] && j < cells[1];
  }
  double center(int axis, int idx) const { return origin[axis] + (idx + 0.5) * h; }
  double cell_volume() const { return dim == 1 ? h : h * h; }
  /// Coordinate of the domain midpoint along an axis.
  double midpoint(int axis) const { return origin[axis] + 0.5 * cells[axis] * h; }

  bool operator==(const GridSpec&) const = default;
};

/// Inclusive-exclusive box of cell indices, [lo, hi).
struct CellBox {
  std::array<int, 2> lo{0, 0};
  std::array<int, 2> hi{0, 0};

  int extent(int axis) const { return hi[axis] - lo[axis]; }
  bool empty() const { return hi[0] <= lo[0] || hi[1] <= lo[1]; }
  CellBox dilated(int margin, int dim) const;
  bool operator==(const CellBox&) const = default;
};

/// Binary occupancy on a GridSpec: the discrete stand-in for a Borel set.
class GridSet {
 public:
  GridSet() = default;
  explicit GridSet(GridSpec spec);
  GridSet(GridSpec spec, std::vector<std::uint8_t> occupancy);

  const GridSpec& spec() const { return spec_; }
  const std::vector<std::uint8_t>& occupancy() const { return occ_; }

  bool at(int i, int j = 0) const { return occ_[spec_.index(i, j)] != 0; }
  /// Out-of-range indices read as unoccupied.
  bool test(int i, int j = 0) const { return spec_.in_range(i, j) && at(i, j); }
  void set(int i, int j, bool value) { occ_[spec_.index(i, j)] = value ? 1 : 0; }

  std::size_t count() const;
  double measure() const { return static_cast<double>(count()) * spec_.cell_volume(); }
  bool empty() const { return count() == 0; }

  /// Bounding box of the occupied cells; empty box for the empty set.
  CellBox bounding_box() const;
  std::vector<std::array<int, 2>> occupied_cells() const;

  bool operator==(const GridSet&) const = default;

 private:
  GridSpec spec_;
  std::vector<std::uint8_t> occ_;
};

/// Nonnegative real value per cell.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(GridSpec spec);
  GridFunction(GridSpec spec, std::vector<double> values);

  static GridFunction indicator(const GridSet& set, double scale = 1.0);

  const GridSpec& spec() const { return spec_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double at(int i, int j = 0) const { return values_[spec_.index(i, j)]; }
  double test(int i, int j = 0) const { return spec_.in_range(i, j) ? at(i, j) : 0.0; }
  void set(int i, int j, double v) { values_[spec_.index(i, j)] = v; }

  double max() const;
  /// Cells with a strictly positive value.
  CellBox support_box() const;

  bool operator==(const GridFunction&) const = default;

 private:
  GridSpec spec_;
  std::vector<double> values_;
};

}  // namespace fracperim
