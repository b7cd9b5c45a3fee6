#pragma once

#include "fracperim/grid.hpp"

#include <cstddef>
#include <vector>

namespace fracperim {

/// mu(t) = |{g > t}|. Throws InvalidParameter for t <= 0.
double distribution_function(const GridFunction& g, double t);

/// Cells in the order the rearrangement fills them: increasing distance of
/// the cell center from the domain center, ties by descending row-major index.
std::vector<std::size_t> rearrangement_fill_order(const GridSpec& spec);

/// Symmetric decreasing rearrangement g#: the values of g sorted in
/// descending order and laid out along the fill order.
GridFunction symmetric_rearrangement(const GridFunction& g);

/// Forward-difference Dirichlet integral sum_axes sum_cells (g(c+e)-g(c))^2 h^(N-2).
/// Throws MissingHalo when the support touches the domain boundary.
double dirichlet_energy(const GridFunction& g);

struct RearrangeReport {
  double l1_distance = 0.0;      ///< int |g - g#|
  double support_measure = 0.0;  ///< |supp g|
  double energy_g = 0.0;
  double energy_gsharp = 0.0;
  double gap = 0.0;              ///< energy_g - energy_gsharp
  double symmetry_defect = 0.0;  ///< max over axes of sup |g - mirror(g)|
};

RearrangeReport polya_szego_report(const GridFunction& g);

}  // namespace fracperim
