#pragma once

#include "fracperim/grid.hpp"
#include "fracperim/shape.hpp"

#include <iosfwd>
#include <string>

namespace fracperim {

/// Smallest lattice-aligned grid (origin an integer multiple of h) holding the
/// shape's bounding box plus `margin_cells` empty cells on every side.
GridSpec grid_for_shape(const ShapeSpec& shape, double h, int margin_cells);

/// Cell-center membership rasterization. Throws DomainTooSmall when the
/// shape's bounding box plus the margin does not fit in the grid.
GridSet rasterize(const ShapeSpec& shape, const GridSpec& spec, int margin_cells = 1);

enum class SetOp { Union, Intersect, SymmDiff, Complement };

/// Cell-wise boolean algebra. Complement ignores `b` except for the spec check
/// and complements `a` within the domain.
GridSet set_algebra(const GridSet& a, const GridSet& b, SetOp op);

/// Mirror image about the hyperplane {x_axis = plane}. The plane must lie on
/// a grid line or a line of cell centers.
GridSet reflect(const GridSet& e, int axis, double plane);

/// Lines along `axis` are packed into contiguous runs centered on the domain
/// midplane; an odd leftover puts the extra cell on the positive side.
GridSet steiner_symmetrize(const GridSet& e, int axis);

struct Bisection {
  int axis = 0;
  double plane = 0.0;       ///< coordinate of the bisecting grid line
  int plane_index = 0;      ///< cells with index >= plane_index form E+
  double snap_error = 0.0;  ///< | |E+| - |E|/2 | in volume units
  GridSet plus;             ///< E+ united with its mirror image
  GridSet minus;            ///< E- united with its mirror image
};

/// Splits along the grid line that best halves the measure (ties to the
/// smaller coordinate) and builds both reflected candidates on a common,
/// enlarged grid when the reflections leave the original domain.
Bisection bisect_halves(const GridSet& e, int axis);

/// Copy of `e` on a grid enlarged by whole cells so that the cell box `box`
/// (in the original index frame) fits. Cell positions are unchanged.
GridSet enlarge_to_contain(const GridSet& e, const CellBox& box);

/// Shift occupancy by whole cells on the same grid; cells leaving the domain
/// raise DomainTooSmall.
GridSet translate_cells(const GridSet& e, int di, int dj = 0);

/// Number of cells where `e` differs from its mirror image about the domain
/// midplane of `axis`.
std::size_t symmetry_defect(const GridSet& e, int axis);

// Text formats. GridSet: `FRACGRID v1`, then `dim h origin... cells...`,
// then one line of 0/1 characters per row. GridFunction: `FRACFUN v1`, the
// same spec line, then one line of decimal values per row.
void write_grid_set(std::ostream& out, const GridSet& e);
GridSet read_grid_set(std::istream& in);
void write_grid_function(std::ostream& out, const GridFunction& g);
GridFunction read_grid_function(std::istream& in);

}  // namespace fracperim
