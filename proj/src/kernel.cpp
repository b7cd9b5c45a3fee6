#include "fracperim/kernel.hpp"

#include "fracperim/error.hpp"
#include "fracperim/numerics.hpp"
#include "text_io.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>

namespace fracperim {
namespace {

using detail::fmt17;

constexpr int kNearOrder = 20;
constexpr int kDuffyOrder = 24;
constexpr int kProfileOrder = 20;

// ---------------------------------------------------------------------------
// 1D: J(d) = [2 d^a - (d-1)^a - (d+1)^a] / (s a), a = 1 - s.

double unit_pair_1d(int d, double s) {
  d = std::abs(d);
  const double a = 1.0 - s;
  if (d <= 4) {
    const double dd = d;
    const double bracket = 2.0 * std::pow(dd, a) - std::pow(dd - 1.0, a) - std::pow(dd + 1.0, a);
    return bracket / (s * a);
  }
  // (1+x)^a + (1-x)^a - 2 = 2 sum_{k>=1} C(a, 2k) x^(2k), x = 1/d.
  const double x2 = 1.0 / (static_cast<double>(d) * d);
  double binom = 1.0;
  double xp = 1.0;
  double sum = 0.0;
  for (int m = 1; m < 80; ++m) {
    binom *= (a - m + 1.0) / m;
    if (m % 2 != 0) continue;
    xp *= x2;
    const double term = binom * xp;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return -2.0 * sum * std::pow(static_cast<double>(d), a) / (s * a);
}

// ---------------------------------------------------------------------------
// 2D: J(i,j) = int_[-1,1]^2 T(a) T(b) |(i+a, j+b)|^-(2+s) da db with the tent
// T(t) = 1 - |t| (autocorrelation of the unit-cell indicator). Each quadrant
// carries a bilinear weight (al0 + al1 v1)(be0 + be1 v2) in v = (i+a, j+b).

struct Linear {
  double c0;
  double c1;
  double at(double v) const { return c0 + c1 * v; }
};

double rect_gauss(double x0, double x1, double y0, double y1, Linear wx, Linear wy, double p, int n) {
  const GaussRule& g = gauss_rule(n);
  double acc = 0.0;
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    const double x = x0 + (x1 - x0) * g.nodes[a];
    const double fx = wx.at(x) * g.weights[a];
    double row = 0.0;
    for (std::size_t b = 0; b < g.nodes.size(); ++b) {
      const double y = y0 + (y1 - y0) * g.nodes[b];
      const double r2 = x * x + y * y;
      row += g.weights[b] * wy.at(y) * std::exp(-0.5 * p * std::log(r2));
    }
    acc += fx * row;
  }
  return acc * (x1 - x0) * (y1 - y0);
}

// Unit square [0,1]^2 with the singular point at the origin corner. The
// weight must vanish at the origin; radial integrals are done in closed form
// after the Duffy split into two triangles.
double corner_duffy(Linear wx, Linear wy, double s) {
  const GaussRule& g = gauss_rule(kDuffyOrder);
  const double p = 2.0 + s;
  double acc = 0.0;
  for (int tri = 0; tri < 2; ++tri) {
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const double w = g.nodes[k];
      const double e1 = tri == 0 ? 1.0 : 1.0 - w;
      const double e2 = tri == 0 ? w : 1.0;
      const double c1 = wx.c0 * wy.c1 * e2 + wx.c1 * wy.c0 * e1;
      const double c2 = wx.c1 * wy.c1 * e1 * e2;
      const double radial = c1 / (1.0 - s) + c2 / (2.0 - s);
      acc += g.weights[k] * std::exp(-0.5 * p * std::log(e1 * e1 + e2 * e2)) * radial;
    }
  }
  return acc;
}

double unit_pair_2d(int i, int j, double s, int order) {
  i = std::abs(i);
  j = std::abs(j);
  if (j > i) std::swap(i, j);
  const double p = 2.0 + s;
  const int n = order > 0 ? order : kNearOrder;
  double total = 0.0;
  for (int qa : {-1, 1}) {
    for (int qb : {-1, 1}) {
      double x0 = qa < 0 ? i - 1.0 : i;
      double x1 = x0 + 1.0;
      double y0 = qb < 0 ? j - 1.0 : j;
      double y1 = y0 + 1.0;
      Linear wx = qa < 0 ? Linear{1.0 - i, 1.0} : Linear{1.0 + i, -1.0};
      Linear wy = qb < 0 ? Linear{1.0 - j, 1.0} : Linear{1.0 + j, -1.0};
      const bool corner = (x0 == 0.0 || x1 == 0.0) && (y0 == 0.0 || y1 == 0.0);
      if (corner) {
        // Reflect the quadrant into [0,1]^2; the kernel is even.
        if (x1 == 0.0) wx = Linear{wx.c0, -wx.c1};
        if (y1 == 0.0) wy = Linear{wy.c0, -wy.c1};
        total += corner_duffy(wx, wy, s);
      } else {
        total += rect_gauss(x0, x1, y0, y1, wx, wy, p, n);
      }
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

double pow_neg(double x, double s) { return std::exp(-s * std::log(x)); }

// (x+1)^a - x^a without cancellation for large x.
double forward_pow_difference(double x, double a) {
  if (x == 0.0) return 1.0;
  return std::pow(x, a) * std::expm1(a * std::log1p(1.0 / x));
}

// Unit-cell tail for the canonical box [qx0,qx1] x [qy0,qy1] (cell edges).
double tail_unit_1d(int i, double q0, double q1, double s) {
  const double a = 1.0 - s;
  const double left = forward_pow_difference(i - q0, a);
  const double right = forward_pow_difference(q1 - i - 1.0, a);
  return (left + right) / (s * a);
}

double tail_unit_2d(int i, int j, const std::array<double, 4>& q, double s) {
  const double qx0 = q[0], qx1 = q[1], qy0 = q[2], qy1 = q[3];
  const double dmin = std::min({i - qx0, qx1 - i - 1.0, j - qy0, qy1 - j - 1.0});
  const int order = dmin < 8.0 ? 4 : (dmin < 32.0 ? 3 : 2);
  const GaussRule& g = gauss_rule(order);
  const double p = 2.0 + s;
  auto side = [&](double d, double clo, double chi) {
    return pow_neg(d, s) *
           (detail::half_line_profile(clo / d, p) + detail::half_line_profile(chi / d, p));
  };
  double acc = 0.0;
  for (std::size_t a = 0; a < g.nodes.size(); ++a) {
    const double x = i + g.nodes[a];
    for (std::size_t b = 0; b < g.nodes.size(); ++b) {
      const double y = j + g.nodes[b];
      const double t = side(qx1 - x, y - qy0, qy1 - y) + side(x - qx0, y - qy0, qy1 - y) +
                       side(qy1 - y, x - qx0, qx1 - x) + side(y - qy0, x - qx0, qx1 - x);
      acc += g.weights[a] * g.weights[b] * t;
    }
  }
  return acc / s;
}

// Cropped occupancy in one of the lattice symmetries of the plane.
struct Bitmap {
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> bits;  // bits[y*w + x]
  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * w + x] != 0; }
  auto key() const { return std::tie(w, h, bits); }
};

// The perimeter is invariant under the lattice symmetries; summing over a
// canonical representative makes reflected, rotated and translated copies
// produce bit-identical results.
Bitmap canonical_bitmap(const GridSet& e) {
  const CellBox bb = e.bounding_box();
  const int w = bb.extent(0);
  const int h = e.spec().dim == 2 ? bb.extent(1) : 1;
  auto sample = [&](int x, int y) { return e.at(bb.lo[0] + x, bb.lo[1] + y); };
  Bitmap best;
  bool have = false;
  const int transforms = e.spec().dim == 2 ? 8 : 2;
  for (int t = 0; t < transforms; ++t) {
    const bool flip_x = t & 1;
    const bool flip_y = t & 2;
    const bool swap = t & 4;
    Bitmap cand;
    cand.w = swap ? h : w;
    cand.h = swap ? w : h;
    cand.bits.resize(static_cast<std::size_t>(cand.w) * cand.h);
    for (int y = 0; y < cand.h; ++y) {
      for (int x = 0; x < cand.w; ++x) {
        int sx = swap ? y : x;
        int sy = swap ? x : y;
        if (flip_x) sx = w - 1 - sx;
        if (flip_y) sy = h - 1 - sy;
        cand.bits[static_cast<std::size_t>(y) * cand.w + x] = sample(sx, sy) ? 1 : 0;
      }
    }
    if (!have || cand.key() < best.key()) {
      best = std::move(cand);
      have = true;
    }
  }
  return best;
}

struct Run {
  int lo;  // inclusive
  int hi;  // inclusive
};

std::vector<Run> runs_of(const Bitmap& b, int y, bool value, int from, int to) {
  std::vector<Run> out;
  int x = from;
  while (x < to) {
    const bool v = (x >= 0 && x < b.w && y >= 0 && y < b.h) ? b.at(x, y) : false;
    if (v != value) {
      ++x;
      continue;
    }
    int end = x;
    while (end + 1 < to) {
      const int nx = end + 1;
      const bool nv = (nx >= 0 && nx < b.w && y >= 0 && y < b.h) ? b.at(nx, y) : false;
      if (nv != value) break;
      end = nx;
    }
    out.push_back({x, end});
    x = end + 1;
  }
  return out;
}

void check_table_for_grid(const InteractionTable& table, const GridSpec& spec) {
  if (table.params().dim != spec.dim)
    throw Error(ErrorCode::IncompatibleGrid, "table dimension differs from the grid");
  if (std::abs(table.h() - spec.h) > 1e-12 * spec.h)
    throw Error(ErrorCode::IncompatibleGrid, "table cell size differs from the grid (use rescaled())");
}

}  // namespace

namespace detail {

double half_line_profile(double w, double p) {
  thread_local double cached_p = -1.0;
  thread_local double cached_total = 0.0;
  if (p != cached_p) {
    cached_total = 0.5 * boost::math::beta(0.5, 0.5 * (p - 1.0));
    cached_p = p;
  }
  if (!(w < std::numeric_limits<double>::infinity())) return cached_total;
  if (w <= 0.0) return 0.0;
  if (w <= 3.0) {
    // int_0^atan(w) cos(phi)^(p-2) dphi
    const double top = std::atan(w);
    const GaussRule& g = gauss_rule(kProfileOrder);
    double acc = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const double c = std::cos(top * g.nodes[k]);
      acc += g.weights[k] * std::exp((p - 2.0) * std::log(c));
    }
    return acc * top;
  }
  // Complement int_0^(1/w) u^(p-2) (1+u^2)^(-p/2) du by its binomial series.
  const double v = 1.0 / w;
  const double v2 = v * v;
  double coef = 1.0;
  double vp = 1.0;
  double sum = 1.0 / (p - 1.0);
  for (int k = 1; k < 200; ++k) {
    coef *= (-0.5 * p - k + 1.0) / k;
    vp *= v2;
    const double term = coef * vp / (p - 1.0 + 2.0 * k);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return cached_total - std::pow(v, p - 1.0) * sum;
}

}  // namespace detail

void KernelParams::validate() const {
  if (dim != 1 && dim != 2) throw Error(ErrorCode::InvalidParameter, "kernel dimension must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidParameter, "s must lie in (0, 1)");
}

double unit_cell_pair_integral(Offset offset, const KernelParams& params, int far_order) {
  params.validate();
  if (params.dim == 1) offset[1] = 0;
  if (offset[0] == 0 && offset[1] == 0)
    throw Error(ErrorCode::SameCell, "the self-interaction of a cell is infinite");
  if (params.dim == 1) return unit_pair_1d(offset[0], params.s);
  return unit_pair_2d(offset[0], offset[1], params.s, far_order);
}

double cell_pair_integral(Offset offset, const KernelParams& params, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidParameter, "cell size must be positive");
  return std::pow(h, params.dim - params.s) * unit_cell_pair_integral(offset, params);
}

// ---------------------------------------------------------------------------

struct InteractionTable::Memo {
  std::mutex mutex;
  std::shared_ptr<const DenseKernel> dense;
};

InteractionTable::InteractionTable(KernelParams params, double h, int cutoff, int far_order,
                                   std::vector<double> unit_entries)
    : params_(params),
      h_(h),
      cutoff_(cutoff),
      far_order_(far_order),
      prefactor_(std::pow(h, params.dim - params.s)),
      entries_(std::move(unit_entries)),
      memo_(std::make_shared<Memo>()) {
  params_.validate();
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidParameter, "cell size must be positive");
  if (cutoff < 2) throw Error(ErrorCode::InvalidParameter, "cutoff radius must be at least 2");
  if (far_order < 1) throw Error(ErrorCode::InvalidParameter, "far-field order must be positive");
  const std::size_t side = 2 * static_cast<std::size_t>(cutoff) + 1;
  const std::size_t expected = params.dim == 1 ? side : side * side;
  if (entries_.size() != expected) throw Error(ErrorCode::InvalidParameter, "table entry count mismatch");
}

std::size_t InteractionTable::slot(Offset offset) const {
  const std::size_t side = 2 * static_cast<std::size_t>(cutoff_) + 1;
  const std::size_t x = static_cast<std::size_t>(offset[0] + cutoff_);
  if (params_.dim == 1) return x;
  return static_cast<std::size_t>(offset[1] + cutoff_) * side + x;
}

double InteractionTable::unit_value(Offset offset) const {
  if (params_.dim == 1) offset[1] = 0;
  if (offset[0] == 0 && offset[1] == 0)
    throw Error(ErrorCode::SameCell, "the self-interaction of a cell is infinite");
  if (std::abs(offset[0]) <= cutoff_ && std::abs(offset[1]) <= cutoff_) return entries_[slot(offset)];
  return unit_cell_pair_integral(offset, params_, far_order_);
}

InteractionTable InteractionTable::rescaled(double h) const {
  InteractionTable out(params_, h, cutoff_, far_order_, entries_);
  out.memo_ = memo_;
  return out;
}

InteractionTable InteractionTable::perturbed(Offset offset, double factor) const {
  if (params_.dim == 1) offset[1] = 0;
  if (offset[0] == 0 && offset[1] == 0) throw Error(ErrorCode::SameCell, "cannot perturb the zero offset");
  if (std::abs(offset[0]) > cutoff_ || std::abs(offset[1]) > cutoff_)
    throw Error(ErrorCode::InvalidParameter, "offset outside the table");
  std::vector<double> entries = entries_;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int sw = 0; sw < (params_.dim == 2 ? 2 : 1); ++sw) {
        Offset o{sx * offset[0], sy * offset[1]};
        if (sw) std::swap(o[0], o[1]);
        entries[slot(o)] = entries_[slot(o)] * factor;
      }
    }
  }
  return InteractionTable(params_, h_, cutoff_, far_order_, std::move(entries));
}

std::shared_ptr<const DenseKernel> InteractionTable::dense(int nx, int ny) const {
  if (params_.dim == 1) ny = 0;
  std::lock_guard<std::mutex> lock(memo_->mutex);
  if (memo_->dense && memo_->dense->nx >= nx && memo_->dense->ny >= ny) return memo_->dense;
  auto d = std::make_shared<DenseKernel>();
  d->nx = std::max(nx, memo_->dense ? memo_->dense->nx : 0);
  d->ny = std::max(ny, memo_->dense ? memo_->dense->ny : 0);
  d->values.assign(static_cast<std::size_t>(d->nx + 1) * (d->ny + 1), 0.0);
  const auto* old = memo_->dense.get();
  for (int dy = 0; dy <= d->ny; ++dy) {
    for (int dx = 0; dx <= d->nx; ++dx) {
      if (dx == 0 && dy == 0) continue;
      double v;
      if (old && dx <= old->nx && dy <= old->ny) {
        v = old->at(dx, dy);
      } else if (dy > dx && dy <= d->nx) {
        v = d->values[static_cast<std::size_t>(dx) * (d->nx + 1) + dy];  // transposed, earlier row
      } else {
        v = unit_value({dx, dy});
      }
      d->values[static_cast<std::size_t>(dy) * (d->nx + 1) + dx] = v;
    }
  }
  memo_->dense = d;
  return d;
}

void InteractionTable::write(std::ostream& out) const {
  out << kVersion << " N=" << params_.dim << " s=" << fmt17(params_.s) << " Rc=" << cutoff_ << '\n';
  const int ymax = params_.dim == 2 ? cutoff_ : 0;
  for (int dx = -cutoff_; dx <= cutoff_; ++dx) {
    for (int dy = -ymax; dy <= ymax; ++dy) {
      if (dx == 0 && dy == 0) continue;
      out << dx;
      if (params_.dim == 2) out << ' ' << dy;
      out << ' ' << fmt17(entries_[slot({dx, dy})]) << '\n';
    }
  }
}

InteractionTable InteractionTable::read(std::istream& in, double h, int far_order) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Parse, "empty table cache");
  std::istringstream head(line);
  std::string magic, version, nkey, skey, rkey;
  head >> magic >> version >> nkey >> skey >> rkey;
  if (magic + " " + version != kVersion || nkey.rfind("N=", 0) != 0 || skey.rfind("s=", 0) != 0 ||
      rkey.rfind("Rc=", 0) != 0)
    throw Error(ErrorCode::Parse, "bad table header: " + line);
  KernelParams params;
  int cutoff = 0;
  try {
    params.dim = std::stoi(nkey.substr(2));
    params.s = std::stod(skey.substr(2));
    cutoff = std::stoi(rkey.substr(3));
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "bad table header: " + line);
  }
  params.validate();
  if (cutoff < 2) throw Error(ErrorCode::Parse, "bad cutoff in table header");
  const std::size_t side = 2 * static_cast<std::size_t>(cutoff) + 1;
  std::vector<double> entries(params.dim == 1 ? side : side * side, 0.0);
  const int ymax = params.dim == 2 ? cutoff : 0;
  for (int dx = -cutoff; dx <= cutoff; ++dx) {
    for (int dy = -ymax; dy <= ymax; ++dy) {
      if (dx == 0 && dy == 0) continue;
      int rx = 0, ry = 0;
      double v = 0.0;
      if (!(in >> rx)) throw Error(ErrorCode::Parse, "truncated table cache");
      if (params.dim == 2 && !(in >> ry)) throw Error(ErrorCode::Parse, "truncated table cache");
      if (!(in >> v)) throw Error(ErrorCode::Parse, "truncated table cache");
      if (rx != dx || ry != dy) throw Error(ErrorCode::Parse, "table offsets out of order");
      const std::size_t x = static_cast<std::size_t>(dx + cutoff);
      const std::size_t k = params.dim == 1 ? x : static_cast<std::size_t>(dy + cutoff) * side + x;
      entries[k] = v;
    }
  }
  return InteractionTable(params, h, cutoff, far_order, std::move(entries));
}

std::string InteractionTable::cache_file_name() const {
  return "fractab_N" + std::to_string(params_.dim) + "_s" + fmt17(params_.s) + "_Rc" +
         std::to_string(cutoff_) + ".txt";
}

InteractionTable build_table(const KernelParams& params, double h, int cutoff, const TableOptions& options) {
  params.validate();
  if (cutoff < 2) throw Error(ErrorCode::InvalidParameter, "cutoff radius must be at least 2");
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidParameter, "cell size must be positive");

  const std::size_t side = 2 * static_cast<std::size_t>(cutoff) + 1;
  InteractionTable probe(params, h, cutoff, options.far_order,
                         std::vector<double>(params.dim == 1 ? side : side * side, 0.0));
  std::filesystem::path cache;
  if (!options.cache_dir.empty()) {
    cache = std::filesystem::path(options.cache_dir) / probe.cache_file_name();
    std::ifstream in(cache);
    if (in) {
      try {
        InteractionTable loaded = InteractionTable::read(in, h, options.far_order);
        if (loaded.params() == params && loaded.cutoff() == cutoff) return loaded;
      } catch (const Error& err) {
        std::cerr << "warning: ignoring unreadable table cache " << cache << ": " << err.what() << '\n';
      }
    }
  }

  std::vector<double> entries(params.dim == 1 ? side : side * side, 0.0);
  auto put = [&](int dx, int dy, double v) {
    const std::size_t x = static_cast<std::size_t>(dx + cutoff);
    const std::size_t k = params.dim == 1 ? x : static_cast<std::size_t>(dy + cutoff) * side + x;
    entries[k] = v;
  };
  if (params.dim == 1) {
    for (int d = 1; d <= cutoff; ++d) {
      const double v = unit_cell_pair_integral({d, 0}, params);
      put(d, 0, v);
      put(-d, 0, v);
    }
  } else {
    // One evaluation per symmetry class 0 <= j <= i, mirrored to all eight images.
    for (int i = 0; i <= cutoff; ++i) {
      for (int j = 0; j <= i; ++j) {
        if (i == 0 && j == 0) continue;
        const double v = unit_cell_pair_integral({i, j}, params);
        for (int sx : {-1, 1})
          for (int sy : {-1, 1}) {
            put(sx * i, sy * j, v);
            put(sx * j, sy * i, v);
          }
      }
    }
  }
  InteractionTable table(params, h, cutoff, options.far_order, std::move(entries));

  if (!cache.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cache.parent_path(), ec);
    std::ofstream out(cache);
    if (out) table.write(out);
    if (!out) std::cerr << "warning: could not write table cache " << cache << '\n';
  }
  return table;
}

double tail_integral(Offset cell, const CellBox& q, const KernelParams& params, double h) {
  params.validate();
  const int dim = params.dim;
  for (int a = 0; a < dim; ++a) {
    if (cell[a] - q.lo[a] < 2 || q.hi[a] - cell[a] - 1 < 2)
      throw Error(ErrorCode::SingularTail, "cell must lie at least two cells inside the box");
  }
  const double pref = std::pow(h, dim - params.s);
  if (dim == 1) return pref * tail_unit_1d(cell[0], q.lo[0], q.hi[0], params.s);
  return pref * tail_unit_2d(cell[0], cell[1], {double(q.lo[0]), double(q.hi[0]), double(q.lo[1]), double(q.hi[1])},
                             params.s);
}

PerimeterBreakdown fractional_perimeter_breakdown(const GridSet& e, const InteractionTable& table, int margin,
                                                  int threads) {
  check_table_for_grid(table, e.spec());
  if (margin < 2) throw Error(ErrorCode::TailAccuracy, "bounding margin must be at least 2 cells");
  if (e.empty()) throw Error(ErrorCode::EmptySet, "fractional perimeter of an empty set");

  const int dim = e.spec().dim;
  const double s = table.params().s;
  const Bitmap b = canonical_bitmap(e);
  const int m = margin;
  const int qx0 = -m, qx1 = b.w + m;
  const int qy0 = dim == 2 ? -m : 0, qy1 = dim == 2 ? b.h + m : 1;
  const int nx = qx1 - qx0;
  const int ny = dim == 2 ? qy1 - qy0 : 0;
  const auto kernel = table.dense(nx, ny);

  // Double prefix sums along x for every row offset dy:
  // f1(n) = sum_{k<=n} K(k, dy), f2(n) = sum_{k<=n} f1(k), with K(0,0) := 0.
  const int lo_idx = -nx - 2;
  const int width = 2 * nx + 4;
  std::vector<std::vector<double>> f2(static_cast<std::size_t>(ny) + 1, std::vector<double>(width, 0.0));
  parallel_for(static_cast<std::size_t>(ny) + 1, threads, [&](std::size_t dy) {
    CompensatedSum s1, s2;
    auto& row = f2[dy];
    for (int n = lo_idx; n < lo_idx + width; ++n) {
      const int k = std::abs(n);
      if (k <= nx) s1.add(kernel->at(k, static_cast<int>(dy)));
      s2.add(s1.value());
      row[static_cast<std::size_t>(n - lo_idx)] = s2.value();
    }
  });
  auto g = [&](int dy, int n) {
    if (n < lo_idx) return 0.0;
    return f2[static_cast<std::size_t>(dy)][static_cast<std::size_t>(n - lo_idx)];
  };

  std::vector<std::vector<Run>> e_runs(static_cast<std::size_t>(b.h));
  std::vector<std::vector<Run>> c_runs(static_cast<std::size_t>(qy1 - qy0));
  for (int y = 0; y < b.h; ++y) e_runs[static_cast<std::size_t>(y)] = runs_of(b, y, true, 0, b.w);
  for (int y = qy0; y < qy1; ++y) c_runs[static_cast<std::size_t>(y - qy0)] = runs_of(b, y, false, qx0, qx1);

  std::vector<double> pair_rows(static_cast<std::size_t>(b.h), 0.0);
  std::vector<double> tail_rows(static_cast<std::size_t>(b.h), 0.0);
  const std::array<double, 4> qbox{double(qx0), double(qx1), double(qy0), double(qy1)};
  parallel_for(static_cast<std::size_t>(b.h), threads, [&](std::size_t yr) {
    const int ye = static_cast<int>(yr);
    CompensatedSum pair;
    for (int yc = qy0; yc < qy1; ++yc) {
      const int dy = std::abs(ye - yc);
      for (const Run& er : e_runs[yr]) {
        for (const Run& cr : c_runs[static_cast<std::size_t>(yc - qy0)]) {
          const int a = er.lo, bb = er.hi, c = cr.lo, d = cr.hi;
          pair.add(g(dy, d - a) - g(dy, d - bb - 1) - g(dy, c - 1 - a) + g(dy, c - bb - 2));
        }
      }
    }
    pair_rows[yr] = pair.value();
    CompensatedSum tail;
    for (const Run& er : e_runs[yr]) {
      for (int x = er.lo; x <= er.hi; ++x) {
        tail.add(dim == 1 ? tail_unit_1d(x, qx0, qx1, s) : tail_unit_2d(x, ye, qbox, s));
      }
    }
    tail_rows[yr] = tail.value();
  });

  PerimeterBreakdown out;
  const double pref = table.prefactor();
  out.pair_sum = pref * ordered_sum(pair_rows);
  out.tail = pref * ordered_sum(tail_rows);
  CompensatedSum total;
  total.add(ordered_sum(pair_rows));
  total.add(ordered_sum(tail_rows));
  out.value = pref * total.value();
  out.quadrature_bound = 1e-8 * out.pair_sum + 1e-6 * out.tail;
  return out;
}

double gagliardo_seminorm(const GridFunction& g, const InteractionTable& table, int margin) {
  check_table_for_grid(table, g.spec());
  if (margin < 2) throw Error(ErrorCode::TailAccuracy, "bounding margin must be at least 2 cells");
  const CellBox supp = g.support_box();
  if (supp.empty()) return 0.0;
  const int dim = g.spec().dim;
  const double s = table.params().s;
  const CellBox q = supp.dilated(margin, dim);
  const auto kernel = table.dense(q.extent(0), dim == 2 ? q.extent(1) : 0);

  std::vector<double> partial;
  const std::array<double, 4> qbox{double(q.lo[0]), double(q.hi[0]), double(q.lo[1]), double(q.hi[1])};
  for (int j = supp.lo[1]; j < supp.hi[1]; ++j) {
    for (int i = supp.lo[0]; i < supp.hi[0]; ++i) {
      const double gc = g.at(i, j);
      if (!(gc > 0.0)) continue;
      CompensatedSum acc;
      for (int jj = q.lo[1]; jj < q.hi[1]; ++jj) {
        for (int ii = q.lo[0]; ii < q.hi[0]; ++ii) {
          if (ii == i && jj == j) continue;
          const double k = kernel->at(std::abs(ii - i), std::abs(jj - j));
          const double go = g.test(ii, jj);
          if (go > 0.0) {
            acc.add((gc - go) * (gc - go) * k);
          } else {
            acc.add(2.0 * gc * gc * k);
          }
        }
      }
      const double tail = dim == 1 ? tail_unit_1d(i, q.lo[0], q.hi[0], s) : tail_unit_2d(i, j, qbox, s);
      acc.add(2.0 * gc * gc * tail);
      partial.push_back(acc.value());
    }
  }
  return table.prefactor() * ordered_sum(partial);
}

}  // namespace fracperim
