#pragma once

#include "fracperim/grid.hpp"
#include "fracperim/kernel.hpp"
#include "fracperim/shape.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fracperim {

/// Normalizing constant of the Poisson kernel,
/// Gamma((N+s)/2) / (pi^(N/2) Gamma(s/2)).
double lambda_constant(const KernelParams& params);

/// lambda z^s / (dist^2 + z^2)^((N+s)/2).
double poisson_kernel(const KernelParams& params, double dist, double z);

/// Base x-grid times strictly increasing positive z-levels.
struct HalfSpaceGrid {
  GridSpec base;
  std::vector<double> z_levels;

  /// z_j = z0 rho^j for j = 0, 1, ... until z_j >= z_top.
  static HalfSpaceGrid graded(GridSpec base, double z0, double rho, double z_top);
  void validate() const;
};

struct ExtensionSettings {
  double z0_factor = 0.25;      ///< z0 = z0_factor * h
  double rho = 1.15;            ///< geometric grading ratio
  double top_factor = 8.0;      ///< top level ~ top_factor * diam(E)
  double lateral_factor = 4.0;  ///< x-domain = bbox dilated by lateral_factor * diam(E)
};

struct ExtensionSetup {
  GridSet datum;  ///< E embedded in the enlarged base grid
  HalfSpaceGrid grid;
};

/// Embeds E in the lateral domain and builds the graded z-levels.
ExtensionSetup prepare_extension(const GridSet& e, const ExtensionSettings& settings = {});

/// Sampled extension u(x_c, z_j) plus its boundary datum at z = 0.
class ExtensionField {
 public:
  ExtensionField(HalfSpaceGrid grid, KernelParams params, GridFunction trace, std::vector<GridFunction> levels);

  const HalfSpaceGrid& grid() const { return grid_; }
  const KernelParams& params() const { return params_; }
  const GridFunction& trace() const { return trace_; }
  const std::vector<GridFunction>& levels() const { return levels_; }
  const GridFunction& level(std::size_t j) const { return levels_.at(j); }

  /// Multiplies every value (trace included) by `factor`.
  ExtensionField scaled(double factor) const;

 private:
  HalfSpaceGrid grid_;
  KernelParams params_;
  GridFunction trace_;
  std::vector<GridFunction> levels_;
};

/// Poisson-formula extension of chi_E sampled at cell centers and z-levels.
/// Cell integrals are exact in 1D; in 2D near cells use exact corner
/// integrals and far cells a 3x3 Gauss rule, convolved by FFT.
ExtensionField poisson_extend(const GridSet& e, const HalfSpaceGrid& grid, const KernelParams& params,
                              int threads = 1);

struct ExtensionEnergy {
  double total = 0.0;
  double x_part = 0.0;
  double z_part = 0.0;
  double truncation_bound = 0.0;  ///< estimated energy outside the sampled domain
  bool truncation_warning = false;  ///< bound above 2% of the total
};

/// Weighted Dirichlet energy int z^(1-s) |grad u|^2: slab weights integrated
/// exactly, level differences in z, forward differences of slab midpoints in x.
ExtensionEnergy extension_energy(const ExtensionField& u);

/// Slice-wise symmetric rearrangement at every level (and of the trace).
ExtensionField horizontal_rearrange(const ExtensionField& u);

/// || u(., z_j) - chi_target ||_L2 for each level in increasing z.
std::vector<double> trace_check(const ExtensionField& u, const GridSet& target);

struct CalibrationSettings {
  double h = 1.0 / 64;
  int margin = 4;
  int cutoff = 16;
  ExtensionSettings extension;
  int threads = 1;
};

/// Energy of the extension of a shape rasterized per `settings`.
double shape_extension_energy(const ShapeSpec& shape, const KernelParams& params, const CalibrationSettings& settings);

/// Direct P_s of a shape rasterized per `settings`.
double shape_perimeter(const ShapeSpec& shape, const KernelParams& params, const CalibrationSettings& settings);

struct CalibrationRecord {
  KernelParams params;
  double gamma = 0.0;
  std::string reference;
  double reference_perimeter = 0.0;
  double reference_energy = 0.0;
  std::string cross_check;
  double cross_residual = 0.0;  ///< (gamma/2) E / P_s - 1 on the cross-check shape
};

class ConstantsRegistry {
 public:
  static double lambda(const KernelParams& params) { return lambda_constant(params); }

  void store_gamma(const CalibrationRecord& record);
  bool has_gamma(const KernelParams& params) const;
  /// Throws InvalidParameter when (N, s) has not been calibrated.
  const CalibrationRecord& gamma(const KernelParams& params) const;

  void store_k(int dim, double value, std::string provenance);
  std::pair<double, std::string> k(int dim) const;

 private:
  std::map<std::pair<int, double>, CalibrationRecord> gamma_;
  std::map<int, std::pair<double, std::string>> k_;
};

/// gamma = 2 P_s(reference) / energy(u_reference), cross-validated on a
/// second shape; disagreement above 2% raises CalibrationFailed.
CalibrationRecord calibrate_gamma(const ShapeSpec& reference, const ShapeSpec& cross_check, const KernelParams& params,
                                  const CalibrationSettings& settings = {});

/// `FRACEXT v1 s=<s>`, the grid spec line, the z-levels line, then one
/// row-major block per level starting with the trace at z = 0.
void write_extension_field(std::ostream& out, const ExtensionField& u);
ExtensionField read_extension_field(std::istream& in);

}  // namespace fracperim
