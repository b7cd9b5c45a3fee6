#pragma once

#include "fracperim/grid.hpp"

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace fracperim {

/// Ambient dimension N and fractional order s of the kernel |x-y|^-(N+s).
struct KernelParams {
  int dim = 2;
  double s = 0.5;

  void validate() const;
  bool operator==(const KernelParams&) const = default;
};

using Offset = std::array<int, 2>;

/// Interaction of two unit cells at a lattice offset,
/// int_c int_c' |x-y|^-(N+s) dx dy. `far_order` > 0 selects the cheap
/// tensor Gauss rule with that many points per axis and quadrant instead of
/// the full-accuracy evaluation. Throws SameCell for the zero offset.
double unit_cell_pair_integral(Offset offset, const KernelParams& params, int far_order = 0);

/// Same integral for cells of side h: h^(N-s) times the unit value.
double cell_pair_integral(Offset offset, const KernelParams& params, double h);

struct DenseKernel;

/// Precomputed J(offset) for |offset|_inf <= cutoff, stored for unit cells.
/// Resolution enters only through the exact prefactor h^(N-s), so one table
/// serves every h. Offsets beyond the cutoff use the far-field Gauss rule.
class InteractionTable {
 public:
  static constexpr const char* kVersion = "FRACTAB v1";

  InteractionTable(KernelParams params, double h, int cutoff, int far_order,
                   std::vector<double> unit_entries);

  const KernelParams& params() const { return params_; }
  double h() const { return h_; }
  int cutoff() const { return cutoff_; }
  int far_order() const { return far_order_; }
  double prefactor() const { return prefactor_; }

  /// Unit-cell interaction; throws SameCell for the zero offset.
  double unit_value(Offset offset) const;
  double value(Offset offset) const { return prefactor_ * unit_value(offset); }

  /// Entries for |offset|_inf <= cutoff laid out row-major over
  /// [-cutoff, cutoff]^N (the zero offset slot holds 0).
  const std::vector<double>& unit_entries() const { return entries_; }

  /// Same entries evaluated at another resolution.
  InteractionTable rescaled(double h) const;
  /// Copy with one entry (and its mirror images) multiplied by `factor`;
  /// used by fault-injection checks.
  InteractionTable perturbed(Offset offset, double factor) const;

  /// Unit values for offsets [0, nx] x [0, ny] (nonnegative quadrant),
  /// memoized across calls. Safe to call concurrently.
  std::shared_ptr<const DenseKernel> dense(int nx, int ny) const;

  void write(std::ostream& out) const;
  /// Reads a cache written by write(); `h` supplies the prefactor.
  static InteractionTable read(std::istream& in, double h, int far_order = 4);

  std::string cache_file_name() const;

 private:
  std::size_t slot(Offset offset) const;

  KernelParams params_;
  double h_;
  int cutoff_;
  int far_order_;
  double prefactor_;
  std::vector<double> entries_;
  struct Memo;
  std::shared_ptr<Memo> memo_;
};

struct DenseKernel {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // (nx+1)*(ny+1), values[dy*(nx+1)+dx], slot (0,0) = 0
  double at(int dx, int dy) const {
    return values[static_cast<std::size_t>(dy) * (nx + 1) + static_cast<std::size_t>(dx)];
  }
};

struct TableOptions {
  /// Directory of the disk cache; empty disables caching.
  std::string cache_dir;
  int far_order = 4;
};

/// Builds (or loads from cache) the interaction table. A failing cache write
/// is reported on stderr and the in-memory table is still returned.
InteractionTable build_table(const KernelParams& params, double h, int cutoff = 16,
                             const TableOptions& options = {});

/// Tail of the complement outside the truncation box:
/// int_cell int_{R^N \ Q} |x-y|^-(N+s) dy dx. `q` is a box of cell indices;
/// the cell must sit at least two cells inside it (SingularTail otherwise).
double tail_integral(Offset cell, const CellBox& q, const KernelParams& params, double h);

struct PerimeterBreakdown {
  double value = 0.0;      ///< P_s(E)
  double pair_sum = 0.0;   ///< interactions inside the truncation box
  double tail = 0.0;       ///< complement beyond the box
  double quadrature_bound = 0.0;
};

/// Fractional s-perimeter of a grid set. The complement is truncated to the
/// occupied bounding box dilated by `margin` cells and the remainder is
/// integrated by tail_integral. The result does not depend on `threads`.
PerimeterBreakdown fractional_perimeter_breakdown(const GridSet& e, const InteractionTable& table,
                                                  int margin = 4, int threads = 1);

inline double fractional_perimeter(const GridSet& e, const InteractionTable& table,
                                   int margin = 4, int threads = 1) {
  return fractional_perimeter_breakdown(e, table, margin, threads).value;
}

/// Double sum of (g(x)-g(y))^2 |x-y|^-(N+s) over ordered cell pairs, with the
/// part of the complement beyond the dilated support box handled by the tail.
/// For an indicator this equals 2 P_s(E).
double gagliardo_seminorm(const GridFunction& g, const InteractionTable& table, int margin = 4);

namespace detail {

/// int_0^w (1 + t^2)^(-p/2) dt for p > 1, w >= 0 (w may be +infinity).
double half_line_profile(double w, double p);

}  // namespace detail

}  // namespace fracperim
