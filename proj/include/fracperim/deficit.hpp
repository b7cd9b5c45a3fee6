#pragma once

#include "fracperim/grid.hpp"
#include "fracperim/kernel.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracperim {

/// r with r^N |B| = |E|. Throws EmptySet.
double equivalent_radius(const GridSet& e);

/// Exact |E ∩ B_r(center)| for the union of occupied cells.
double ball_overlap(const GridSet& e, std::array<double, 2> center, double r);

struct Asymmetry {
  double A = 0.0;
  std::array<double, 2> center{0.0, 0.0};
  double overlap = 0.0;  ///< max |E ∩ B_r(x)| found
};

struct AsymmetryOptions {
  /// Refinement stops once the pattern-search step falls below h / refine_ratio.
  double refine_ratio = 64.0;
  /// Number of coarse-scan maxima refined by pattern search.
  int starts = 4;
  /// Extra centers evaluated and refined alongside the scan maxima.
  std::vector<std::array<double, 2>> hints;
};

/// A(E) = 2 (|E| - max_x |E ∩ B_r(x)|) / |E|: lattice scan of the centers
/// followed by pattern search on the exact overlap. The search runs in cell
/// units relative to the bounding box, so lattice translations of E move the
/// center by the same vector and leave A unchanged.
Asymmetry fraenkel_asymmetry(const GridSet& e, const AsymmetryOptions& options = {});

/// The k cells nearest to a point at fractional position `offset` (in cells,
/// each coordinate in [0, 1)) from a lattice vertex; ties by descending
/// row-major index. The grid is lattice-aligned with `margin` empty cells
/// around the ball.
GridSet discrete_ball(int dim, double h, std::size_t k, std::array<double, 2> offset, int margin);

struct DeficitOptions {
  int margin = 4;
  int threads = 1;
  std::string id;
};

struct DeficitReport {
  std::string id;
  int dim = 0;
  double s = 0.0;
  double h = 0.0;
  double Ps = 0.0;
  double r = 0.0;
  double PsBall = 0.0;
  double Ds = 0.0;
  double A = 0.0;
  std::array<double, 2> center{0.0, 0.0};
  double error_budget = 0.0;  ///< in units of D_s
  std::vector<std::string> flags;
};

/// D_s(E) = (P_s(E) - P_s(B_r)) / P_s(B_r) with the reference ball taken as
/// the discrete ball of the same cell count, summed with the same table and
/// margin. The error budget is the spread of P_s over discrete balls with
/// shifted centers plus the quadrature bounds.
DeficitReport s_deficit(const GridSet& e, const InteractionTable& table, const DeficitOptions& options = {});

/// `id,N,s,h,Ps,r,PsBall,Ds,A,cx,cy,err_budget,flags`
std::string deficit_csv_header();
std::string deficit_csv_row(const DeficitReport& report);

struct LemmaCheck {
  double A = 0.0;
  double centered_ratio = 0.0;  ///< |E △ B_r(center)| / |B_r|
  double lower_slack = 0.0;     ///< centered_ratio - A
  double upper_slack = 0.0;     ///< 3A - centered_ratio
  bool holds = false;
};

/// Checks A <= |E △ B_r(c)| / |B_r| <= 3A + tol for E symmetric about the
/// domain center c. Throws PreconditionViolation when more than
/// `allowed_defect` cells break the mirror symmetry along some axis.
LemmaCheck lemma_tre_check(const GridSet& e, std::size_t allowed_defect = 0, double tol = 1e-12);

struct AuditEntry {
  int axis = 0;
  double plane = 0.0;
  char side = '+';
  double Ps = 0.0;
  double Ds = 0.0;
  double A = 0.0;
  double snap_error = 0.0;
  bool selected = false;
  bool reflection_ok = true;  ///< P_s(E) >= (P_s(F+) + P_s(F-))/2 - tol at this step
};

struct Symmetrization {
  GridSet F;
  double Ds_initial = 0.0;
  double A_initial = 0.0;
  double Ds_final = 0.0;
  double A_final = 0.0;
  std::vector<AuditEntry> trail;
  bool bound_violated = false;
};

/// Greedy per-axis bisection-reflection: on each axis keep the candidate
/// with D_s <= 2 D_s(current) + tol that maximizes A (ties to F+).
Symmetrization n_symmetrize(const GridSet& e, const InteractionTable& table, const DeficitOptions& options = {});

}  // namespace fracperim
