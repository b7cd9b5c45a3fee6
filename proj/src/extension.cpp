#include "fracperim/extension.hpp"

#include "fracperim/error.hpp"
#include "fracperim/grid_geometry.hpp"
#include "fracperim/numerics.hpp"
#include "fracperim/rearrange.hpp"
#include "text_io.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

namespace fracperim {
namespace {

using detail::fmt17;

constexpr int kExactRadius = 8;  // |offset|_inf <= this uses exact corner integrals
constexpr int kCornerOrder = 12;

double signed_profile(double w, double p) {
  return w < 0.0 ? -detail::half_line_profile(-w, p) : detail::half_line_profile(w, p);
}

// G(a, b) = int_0^a int_0^b (1 + x^2 + y^2)^(-p/2) dy dx for a, b >= 0. The
// inner integral is a scaled half-line profile; the outer one runs over
// dyadic panels, on which the integrand is smooth.
double corner_integral(double a, double b, double p) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  const GaussRule& g = gauss_rule(kCornerOrder);
  auto f = [&](double x) {
    const double q = 1.0 + x * x;
    return std::pow(q, 0.5 * (1.0 - p)) * detail::half_line_profile(b / std::sqrt(q), p);
  };
  double acc = 0.0;
  double lo = 0.0;
  double hi = std::min(a, 0.5);
  while (true) {
    const double w = hi - lo;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) acc += g.weights[k] * w * f(lo + w * g.nodes[k]);
    if (hi >= a) break;
    lo = hi;
    hi = std::min(a, 2.0 * hi);
  }
  return acc;
}

double signed_corner(double x, double y, double p) {
  const double v = corner_integral(std::abs(x), std::abs(y), p);
  return (x < 0.0) != (y < 0.0) ? -v : v;
}

std::size_t good_fft_size(std::size_t n) {
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2, 3, 5, 7})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

// u at every cell center of one z-level for a 1D set given by its runs.
void extend_level_1d(const std::vector<std::array<double, 2>>& runs, const GridSpec& spec, double lambda, double p,
                     double z, std::vector<double>& out) {
  for (int i = 0; i < spec.cells[0]; ++i) {
    const double x = spec.center(0, i);
    CompensatedSum acc;
    for (const auto& r : runs) acc.add(signed_profile((r[1] - x) / z, p) - signed_profile((r[0] - x) / z, p));
    out[static_cast<std::size_t>(i)] = std::clamp(lambda * acc.value(), 0.0, 1.0);
  }
}

// Unit-cell weights W(di, dj) = int_cell zeta^s (|eta|^2 + zeta^2)^(-p/2) for
// 0 <= di < nx, 0 <= dj < ny, zeta = z / h.
std::vector<double> cell_weights_2d(int nx, int ny, double zeta, double s) {
  const double p = 2.0 + s;
  const int r = std::min(kExactRadius, std::max(nx, ny));
  // Corner values at (k + 1/2) / zeta, k = -1..r, symmetric in (x, y).
  const int nc = r + 2;
  std::vector<double> corner(static_cast<std::size_t>(nc) * nc);
  for (int a = 0; a < nc; ++a)
    for (int b = 0; b <= a; ++b) {
      const double v = signed_corner((a - 0.5) / zeta, (b - 0.5) / zeta, p);
      corner[static_cast<std::size_t>(a) * nc + b] = v;
      corner[static_cast<std::size_t>(b) * nc + a] = v;
    }
  auto c = [&](int a, int b) { return corner[static_cast<std::size_t>(a + 1) * nc + (b + 1)]; };

  static const double kNodes[3] = {-0.5 * std::sqrt(0.6), 0.0, 0.5 * std::sqrt(0.6)};
  static const double kWeights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  const double zs = std::pow(zeta, s);
  const double z2 = zeta * zeta;

  std::vector<double> w(static_cast<std::size_t>(nx) * ny);
  for (int dj = 0; dj < ny; ++dj) {
    for (int di = 0; di < nx; ++di) {
      double v;
      if (di < dj && dj < nx && di < ny) {
        v = w[static_cast<std::size_t>(di) * nx + dj];
      } else if (di <= r && dj <= r) {
        // Cell [di-1/2, di+1/2] x [dj-1/2, dj+1/2]; c(k, l) sits at (k+1/2, l+1/2).
        v = c(di, dj) - c(di - 1, dj) - c(di, dj - 1) + c(di - 1, dj - 1);
      } else {
        v = 0.0;
        for (int a = 0; a < 3; ++a) {
          const double x = di + kNodes[a];
          for (int b = 0; b < 3; ++b) {
            const double y = dj + kNodes[b];
            v += kWeights[a] * kWeights[b] * std::pow(x * x + y * y + z2, -0.5 * p);
          }
        }
        v *= zs;
      }
      w[static_cast<std::size_t>(dj) * nx + di] = v;
    }
  }
  return w;
}

double slab_weight(double zl, double zu, double s) {
  return (std::pow(zu, 2.0 - s) - std::pow(zl, 2.0 - s)) / (2.0 - s);
}

}  // namespace

double lambda_constant(const KernelParams& params) {
  params.validate();
  const double n = params.dim;
  return boost::math::tgamma(0.5 * (n + params.s)) /
         (std::pow(std::numbers::pi, 0.5 * n) * boost::math::tgamma(0.5 * params.s));
}

double poisson_kernel(const KernelParams& params, double dist, double z) {
  if (!(z > 0.0)) throw Error(ErrorCode::InvalidParameter, "the Poisson kernel needs z > 0");
  return lambda_constant(params) * std::pow(z, params.s) *
         std::pow(dist * dist + z * z, -0.5 * (params.dim + params.s));
}

HalfSpaceGrid HalfSpaceGrid::graded(GridSpec base, double z0, double rho, double z_top) {
  if (!(z0 > 0.0) || !(rho > 1.0) || !(z_top >= z0))
    throw Error(ErrorCode::InvalidParameter, "graded z-levels need z0 > 0, rho > 1, z_top >= z0");
  HalfSpaceGrid g{std::move(base), {}};
  for (double z = z0;; z *= rho) {
    g.z_levels.push_back(z);
    if (z >= z_top) break;
  }
  g.validate();
  return g;
}

void HalfSpaceGrid::validate() const {
  base.validate();
  if (z_levels.empty()) throw Error(ErrorCode::InvalidParameter, "no z-levels");
  if (!(z_levels.front() > 0.0))
    throw Error(ErrorCode::InvalidParameter, "z-levels must be positive; the z = 0 trace is the boundary datum");
  if (z_levels.front() > base.h) throw Error(ErrorCode::InvalidParameter, "lowest z-level must not exceed h");
  for (std::size_t j = 1; j < z_levels.size(); ++j)
    if (!(z_levels[j] > z_levels[j - 1])) throw Error(ErrorCode::InvalidParameter, "z-levels must increase strictly");
}

ExtensionSetup prepare_extension(const GridSet& e, const ExtensionSettings& settings) {
  if (e.empty()) throw Error(ErrorCode::EmptySet, "cannot extend the empty set");
  if (!(settings.z0_factor > 0.0 && settings.z0_factor <= 1.0) || !(settings.rho > 1.0) ||
      !(settings.top_factor > 0.0) || !(settings.lateral_factor >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "invalid extension settings");
  const GridSpec& spec = e.spec();
  const CellBox box = e.bounding_box();
  double diam2 = 0.0;
  for (int a = 0; a < spec.dim; ++a) diam2 += std::pow(box.extent(a) * spec.h, 2);
  const double diam = std::sqrt(diam2);
  const int pad = static_cast<int>(std::ceil(settings.lateral_factor * diam / spec.h)) + 1;
  const CellBox target = box.dilated(pad, spec.dim);
  GridSpec crop = spec;
  crop.cells = {target.extent(0), target.extent(1)};
  crop.origin = {spec.origin[0] + target.lo[0] * spec.h, spec.origin[1] + (spec.dim == 2 ? target.lo[1] * spec.h : 0.0)};
  GridSet cropped(crop);
  for (auto c : e.occupied_cells()) cropped.set(c[0] - target.lo[0], c[1] - target.lo[1], true);
  HalfSpaceGrid grid = HalfSpaceGrid::graded(crop, settings.z0_factor * spec.h, settings.rho, settings.top_factor * diam);
  return {std::move(cropped), std::move(grid)};
}

ExtensionField::ExtensionField(HalfSpaceGrid grid, KernelParams params, GridFunction trace,
                               std::vector<GridFunction> levels)
    : grid_(std::move(grid)), params_(params), trace_(std::move(trace)), levels_(std::move(levels)) {
  grid_.validate();
  params_.validate();
  if (!(trace_.spec() == grid_.base)) throw Error(ErrorCode::IncompatibleGrid, "trace does not live on the base grid");
  if (levels_.size() != grid_.z_levels.size()) throw Error(ErrorCode::InvalidParameter, "one slice per z-level required");
  for (const auto& l : levels_)
    if (!(l.spec() == grid_.base)) throw Error(ErrorCode::IncompatibleGrid, "slice does not live on the base grid");
}

ExtensionField ExtensionField::scaled(double factor) const {
  auto scale = [factor](const GridFunction& g) {
    std::vector<double> v = g.values();
    for (double& x : v) x *= factor;
    return GridFunction(g.spec(), std::move(v));
  };
  std::vector<GridFunction> levels;
  levels.reserve(levels_.size());
  for (const auto& l : levels_) levels.push_back(scale(l));
  return ExtensionField(grid_, params_, scale(trace_), std::move(levels));
}

ExtensionField poisson_extend(const GridSet& e, const HalfSpaceGrid& grid, const KernelParams& params, int threads) {
  grid.validate();
  params.validate();
  if (!(e.spec() == grid.base)) throw Error(ErrorCode::IncompatibleGrid, "set does not live on the base grid");
  if (params.dim != grid.base.dim) throw Error(ErrorCode::IncompatibleGrid, "kernel and grid dimensions differ");
  const GridSpec& spec = grid.base;
  const double lambda = lambda_constant(params);
  const std::size_t nz = grid.z_levels.size();
  std::vector<std::vector<double>> slices(nz, std::vector<double>(spec.size(), 0.0));

  if (!e.empty() && spec.dim == 1) {
    std::vector<std::array<double, 2>> runs;
    for (int i = 0; i < spec.cells[0]; ++i) {
      if (!e.at(i) || (i > 0 && e.at(i - 1))) continue;
      int k = i;
      while (k < spec.cells[0] && e.at(k)) ++k;
      runs.push_back({spec.origin[0] + i * spec.h, spec.origin[0] + k * spec.h});
    }
    const double p = 1.0 + params.s;
    parallel_for(nz, threads, [&](std::size_t j) { extend_level_1d(runs, spec, lambda, p, grid.z_levels[j], slices[j]); });
  } else if (!e.empty()) {
    const int nx = spec.cells[0];
    const int ny = spec.cells[1];
    const std::size_t px = good_fft_size(2 * static_cast<std::size_t>(nx) - 1);
    const std::size_t py = good_fft_size(2 * static_cast<std::size_t>(ny) - 1);
    const std::size_t nreal = px * py;
    const std::size_t ncplx = py * (px / 2 + 1);

    auto set_real = fftw_buffer<double>(nreal);
    auto set_hat = fftw_buffer<fftw_complex>(ncplx);
    fftw_plan forward = fftw_plan_dft_r2c_2d(static_cast<int>(py), static_cast<int>(px), set_real.get(), set_hat.get(),
                                             FFTW_ESTIMATE);
    fftw_plan backward = fftw_plan_dft_c2r_2d(static_cast<int>(py), static_cast<int>(px), set_hat.get(), set_real.get(),
                                              FFTW_ESTIMATE);
    std::fill(set_real.get(), set_real.get() + nreal, 0.0);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) set_real[static_cast<std::size_t>(j) * px + i] = e.at(i, j) ? 1.0 : 0.0;
    fftw_execute_dft_r2c(forward, set_real.get(), set_hat.get());

    const double norm = lambda / static_cast<double>(nreal);
    parallel_for(nz, threads, [&](std::size_t level) {
      const std::vector<double> w = cell_weights_2d(nx, ny, grid.z_levels[level] / spec.h, params.s);
      auto kr = fftw_buffer<double>(nreal);
      auto kh = fftw_buffer<fftw_complex>(ncplx);
      std::fill(kr.get(), kr.get() + nreal, 0.0);
      for (int dj = -(ny - 1); dj < ny; ++dj) {
        const std::size_t row = static_cast<std::size_t>(dj < 0 ? dj + static_cast<int>(py) : dj);
        for (int di = -(nx - 1); di < nx; ++di) {
          const std::size_t col = static_cast<std::size_t>(di < 0 ? di + static_cast<int>(px) : di);
          kr[row * px + col] = w[static_cast<std::size_t>(std::abs(dj)) * nx + std::abs(di)];
        }
      }
      fftw_execute_dft_r2c(forward, kr.get(), kh.get());
      for (std::size_t k = 0; k < ncplx; ++k) {
        const double ar = kh[k][0], ai = kh[k][1];
        const double br = set_hat[k][0], bi = set_hat[k][1];
        kh[k][0] = ar * br - ai * bi;
        kh[k][1] = ar * bi + ai * br;
      }
      fftw_execute_dft_c2r(backward, kh.get(), kr.get());
      std::vector<double>& out = slices[level];
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
          // FFT round-off can leave values a few ulps outside [0, 1].
          out[spec.index(i, j)] = std::clamp(kr[static_cast<std::size_t>(j) * px + i] * norm, 0.0, 1.0);
    });
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  std::vector<GridFunction> levels;
  levels.reserve(nz);
  for (auto& s : slices) levels.emplace_back(spec, std::move(s));
  return ExtensionField(grid, params, GridFunction::indicator(e), std::move(levels));
}

ExtensionEnergy extension_energy(const ExtensionField& u) {
  const HalfSpaceGrid& grid = u.grid();
  const GridSpec& spec = grid.base;
  const double s = u.params().s;
  const double h = spec.h;
  const double vol = spec.cell_volume();
  const int nx = spec.cells[0];
  const int ny = spec.cells[1];
  const std::size_t nz = grid.z_levels.size();

  std::vector<double> xs(nz), zs(nz);
  parallel_for(nz, 1, [&](std::size_t k) {
    const std::vector<double>& up = u.level(k).values();
    const std::vector<double>& lo = k == 0 ? u.trace().values() : u.level(k - 1).values();
    const double zl = k == 0 ? 0.0 : grid.z_levels[k - 1];
    const double zu = grid.z_levels[k];
    const double w = slab_weight(zl, zu, s);
    const double dz = zu - zl;
    CompensatedSum zacc, xacc;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const std::size_t c = spec.index(i, j);
        const double d = (up[c] - lo[c]) / dz;
        zacc.add(d * d);
        const double mid = 0.5 * (up[c] + lo[c]);
        if (i + 1 < nx) {
          const std::size_t n = spec.index(i + 1, j);
          const double g = (0.5 * (up[n] + lo[n]) - mid) / h;
          xacc.add(g * g);
        }
        if (spec.dim == 2 && j + 1 < ny) {
          const std::size_t n = spec.index(i, j + 1);
          const double g = (0.5 * (up[n] + lo[n]) - mid) / h;
          xacc.add(g * g);
        }
      }
    }
    zs[k] = w * vol * zacc.value();
    xs[k] = w * vol * xacc.value();
  });

  ExtensionEnergy out;
  out.x_part = ordered_sum(xs);
  out.z_part = ordered_sum(zs);
  out.total = out.x_part + out.z_part;

  // Above the top level u decays like z^-N; beyond the lateral edge like
  // |x|^-(N+s). Both tails are extrapolated from the outermost samples.
  const double n = spec.dim;
  const double ztop = grid.z_levels.back();
  CompensatedSum top;
  for (double v : u.levels().back().values()) top.add(v * v);
  const double top_bound = n * n * top.value() * vol * std::pow(ztop, -s) / (n + s);
  CompensatedSum side;
  const double half_x = 0.5 * nx * h;
  const double half_y = 0.5 * ny * h;
  const double reach = spec.dim == 2 ? std::min(half_x, half_y) : half_x;
  for (std::size_t k = 0; k < nz; ++k) {
    const double zl = k == 0 ? 0.0 : grid.z_levels[k - 1];
    const double w = slab_weight(zl, grid.z_levels[k], s);
    CompensatedSum edge;
    const GridFunction& l = u.level(k);
    for (int j = 0; j < ny; ++j) {
      edge.add(std::pow(l.at(0, j), 2) + std::pow(l.at(nx - 1, j), 2));
      if (spec.dim == 1) break;
    }
    if (spec.dim == 2)
      for (int i = 0; i < nx; ++i) edge.add(std::pow(l.at(i, 0), 2) + std::pow(l.at(i, ny - 1), 2));
    side.add(w * edge.value() * std::pow(h, n - 1.0) * (n + s) * (n + s) / reach);
  }
  out.truncation_bound = top_bound + side.value();
  out.truncation_warning = out.truncation_bound > 2e-2 * out.total;
  return out;
}

ExtensionField horizontal_rearrange(const ExtensionField& u) {
  std::vector<GridFunction> levels;
  levels.reserve(u.levels().size());
  for (const auto& l : u.levels()) levels.push_back(symmetric_rearrangement(l));
  return ExtensionField(u.grid(), u.params(), symmetric_rearrangement(u.trace()), std::move(levels));
}

std::vector<double> trace_check(const ExtensionField& u, const GridSet& target) {
  if (u.levels().size() < 4) throw Error(ErrorCode::InvalidParameter, "trace check needs at least 4 z-levels");
  if (!(target.spec() == u.grid().base)) throw Error(ErrorCode::IncompatibleGrid, "target is not on the base grid");
  std::vector<double> out;
  out.reserve(u.levels().size());
  const double vol = target.spec().cell_volume();
  for (const auto& l : u.levels()) {
    CompensatedSum acc;
    for (std::size_t c = 0; c < l.values().size(); ++c) {
      const double d = l.values()[c] - (target.occupancy()[c] ? 1.0 : 0.0);
      acc.add(d * d);
    }
    out.push_back(std::sqrt(acc.value() * vol));
  }
  return out;
}

namespace {

GridSet rasterize_for(const ShapeSpec& shape, double h, int margin) {
  return rasterize(shape, grid_for_shape(shape, h, margin), margin);
}

}  // namespace

double shape_extension_energy(const ShapeSpec& shape, const KernelParams& params, const CalibrationSettings& settings) {
  const GridSet e = rasterize_for(shape, settings.h, settings.margin);
  const ExtensionSetup setup = prepare_extension(e, settings.extension);
  const ExtensionField u = poisson_extend(setup.datum, setup.grid, params, settings.threads);
  return extension_energy(u).total;
}

double shape_perimeter(const ShapeSpec& shape, const KernelParams& params, const CalibrationSettings& settings) {
  const GridSet e = rasterize_for(shape, settings.h, settings.margin);
  const InteractionTable table = build_table(params, settings.h, settings.cutoff);
  return fractional_perimeter(e, table, settings.margin, settings.threads);
}

void ConstantsRegistry::store_gamma(const CalibrationRecord& record) {
  gamma_[{record.params.dim, record.params.s}] = record;
}

bool ConstantsRegistry::has_gamma(const KernelParams& params) const {
  return gamma_.count({params.dim, params.s}) != 0;
}

const CalibrationRecord& ConstantsRegistry::gamma(const KernelParams& params) const {
  auto it = gamma_.find({params.dim, params.s});
  if (it == gamma_.end()) throw Error(ErrorCode::InvalidParameter, "gamma not calibrated for these parameters");
  return it->second;
}

void ConstantsRegistry::store_k(int dim, double value, std::string provenance) {
  k_[dim] = {value, std::move(provenance)};
}

std::pair<double, std::string> ConstantsRegistry::k(int dim) const {
  auto it = k_.find(dim);
  if (it == k_.end()) throw Error(ErrorCode::InvalidParameter, "K_N not measured for this dimension");
  return it->second;
}

CalibrationRecord calibrate_gamma(const ShapeSpec& reference, const ShapeSpec& cross_check, const KernelParams& params,
                                  const CalibrationSettings& settings) {
  params.validate();
  if (reference.dim() != params.dim || cross_check.dim() != params.dim)
    throw Error(ErrorCode::IncompatibleGrid, "shape and kernel dimensions differ");
  CalibrationRecord rec;
  rec.params = params;
  rec.reference = reference.describe();
  rec.cross_check = cross_check.describe();
  rec.reference_perimeter = shape_perimeter(reference, params, settings);
  rec.reference_energy = shape_extension_energy(reference, params, settings);
  rec.gamma = 2.0 * rec.reference_perimeter / rec.reference_energy;
  const double ps = shape_perimeter(cross_check, params, settings);
  const double energy = shape_extension_energy(cross_check, params, settings);
  rec.cross_residual = 0.5 * rec.gamma * energy / ps - 1.0;
  if (!(std::abs(rec.cross_residual) <= 0.02)) {
    std::ostringstream msg;
    msg << "cross-validation residual " << rec.cross_residual << " exceeds 2% (refine h or the z-grid)";
    throw Error(ErrorCode::CalibrationFailed, msg.str());
  }
  return rec;
}

void write_extension_field(std::ostream& out, const ExtensionField& u) {
  const GridSpec& spec = u.grid().base;
  out << "FRACEXT v1 s=" << fmt17(u.params().s) << '\n';
  detail::write_spec_line(out, spec);
  out << u.grid().z_levels.size();
  for (double z : u.grid().z_levels) out << ' ' << fmt17(z);
  out << '\n';
  auto block = [&](const GridFunction& g) {
    for (int j = 0; j < spec.cells[1]; ++j) {
      for (int i = 0; i < spec.cells[0]; ++i) {
        if (i) out << ' ';
        out << fmt17(g.at(i, j));
      }
      out << '\n';
    }
  };
  block(u.trace());
  for (const auto& l : u.levels()) block(l);
}

ExtensionField read_extension_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::Parse, "empty input");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const std::string prefix = "FRACEXT v1 s=";
  if (header.rfind(prefix, 0) != 0) throw Error(ErrorCode::Parse, "expected header 'FRACEXT v1 s=<s>'");
  KernelParams params;
  try {
    params.s = std::stod(header.substr(prefix.size()));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "bad s in FRACEXT header");
  }
  HalfSpaceGrid grid;
  grid.base = detail::read_spec_line(in);
  params.dim = grid.base.dim;
  std::size_t nz = 0;
  if (!(in >> nz) || nz == 0) throw Error(ErrorCode::Parse, "bad z-level count");
  grid.z_levels.resize(nz);
  for (double& z : grid.z_levels)
    if (!(in >> z)) throw Error(ErrorCode::Parse, "missing z-level");
  auto block = [&]() {
    std::vector<double> v(grid.base.size());
    for (double& x : v)
      if (!(in >> x)) throw Error(ErrorCode::Parse, "missing extension value");
    return GridFunction(grid.base, std::move(v));
  };
  GridFunction trace = block();
  std::vector<GridFunction> levels;
  levels.reserve(nz);
  for (std::size_t k = 0; k < nz; ++k) levels.push_back(block());
  return ExtensionField(std::move(grid), params, std::move(trace), std::move(levels));
}

}  // namespace fracperim
