#include "fracperim/deficit.hpp"

#include "fracperim/error.hpp"
#include "fracperim/grid_geometry.hpp"
#include "fracperim/shape.hpp"
#include "text_io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace fracperim {
namespace {

// H(x) = int_0^x sqrt(R^2 - t^2) dt.
double half_chord_integral(double x, double r) {
  x = std::clamp(x, -r, r);
  return 0.5 * (x * std::sqrt(std::max(0.0, r * r - x * x)) + r * r * std::asin(x / r));
}

// Area of [x0, x1] x [y0, y1] ∩ {x^2 + y^2 <= r^2}.
double rect_disk_area(double x0, double x1, double y0, double y1, double r) {
  x0 = std::max(x0, -r);
  x1 = std::min(x1, r);
  if (x1 <= x0 || y1 <= y0) return 0.0;
  double cuts[6] = {x0, x1, 0, 0, 0, 0};
  int n = 2;
  for (double y : {y0, y1}) {
    if (std::abs(y) >= r) continue;
    const double w = std::sqrt(r * r - y * y);
    for (double x : {-w, w})
      if (x > x0 && x < x1) cuts[n++] = x;
  }
  std::sort(cuts, cuts + n);
  double area = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b <= a) continue;
    const double m = 0.5 * (a + b);
    const double hm = std::sqrt(std::max(0.0, r * r - m * m));
    const double chord = half_chord_integral(b, r) - half_chord_integral(a, r);
    // Upper boundary min(max(h, y0), y1) and lower boundary clamp(-h, y0, y1).
    double upper;
    if (hm <= y0) upper = y0 * (b - a);
    else if (hm >= y1) upper = y1 * (b - a);
    else upper = chord;
    double lower;
    if (-hm <= y0) lower = y0 * (b - a);
    else if (-hm >= y1) lower = y1 * (b - a);
    else lower = -chord;
    area += upper - lower;
  }
  return std::max(0.0, area);
}

// Occupancy cropped to the bounding box, in cell units with the box's low
// corner at the origin, plus per-row prefix counts.
struct Cropped {
  int dim = 1;
  int w = 0;
  int h = 0;
  std::vector<std::uint8_t> bits;
  std::vector<int> prefix;  // prefix[j*(w+1) + i] = cells < i occupied in row j

  bool at(int i, int j) const { return bits[static_cast<std::size_t>(j) * w + i] != 0; }
  int count(int j, int i0, int i1) const {  // occupied cells in [i0, i1) of row j
    i0 = std::clamp(i0, 0, w);
    i1 = std::clamp(i1, 0, w);
    if (i1 <= i0) return 0;
    const std::size_t row = static_cast<std::size_t>(j) * (w + 1);
    return prefix[row + i1] - prefix[row + i0];
  }
};

Cropped crop(const GridSet& e, const CellBox& box) {
  Cropped c;
  c.dim = e.spec().dim;
  c.w = box.extent(0);
  c.h = box.extent(1);
  c.bits.assign(static_cast<std::size_t>(c.w) * c.h, 0);
  c.prefix.assign(static_cast<std::size_t>(c.w + 1) * c.h, 0);
  for (int j = 0; j < c.h; ++j) {
    for (int i = 0; i < c.w; ++i) c.bits[static_cast<std::size_t>(j) * c.w + i] = e.at(i + box.lo[0], j + box.lo[1]);
    const std::size_t row = static_cast<std::size_t>(j) * (c.w + 1);
    for (int i = 0; i < c.w; ++i) c.prefix[row + i + 1] = c.prefix[row + i] + (c.at(i, j) ? 1 : 0);
  }
  return c;
}

// Exact overlap in cell units; center (cx, cy) and radius r in cells.
double exact_overlap(const Cropped& c, double cx, double cy, double r) {
  if (c.dim == 1) {
    const double a = cx - r, b = cx + r;
    const int full_lo = static_cast<int>(std::ceil(a));
    const int full_hi = static_cast<int>(std::floor(b));
    auto piece = [&](int i) {
      if (i < 0 || i >= c.w || !c.at(i, 0)) return 0.0;
      return std::max(0.0, std::min<double>(i + 1, b) - std::max<double>(i, a));
    };
    if (full_hi <= full_lo) {
      double acc = 0.0;
      for (int i = static_cast<int>(std::floor(a)); i < static_cast<int>(std::ceil(b)); ++i) acc += piece(i);
      return acc;
    }
    double acc = c.count(0, full_lo, full_hi);
    if (static_cast<double>(full_lo) > a) acc += piece(full_lo - 1);
    if (static_cast<double>(full_hi) < b) acc += piece(full_hi);
    return acc;
  }
  double acc = 0.0;
  const int j0 = std::max(0, static_cast<int>(std::floor(cy - r)));
  const int j1 = std::min(c.h, static_cast<int>(std::ceil(cy + r)));
  for (int j = j0; j < j1; ++j) {
    const double y0 = j - cy, y1 = j + 1 - cy;
    const double near = (y0 <= 0.0 && y1 >= 0.0) ? 0.0 : std::min(std::abs(y0), std::abs(y1));
    const double far = std::max(std::abs(y0), std::abs(y1));
    if (near >= r) continue;
    const double w_out = std::sqrt(r * r - near * near);
    int full_lo = 0, full_hi = 0;
    if (far < r) {
      const double w_in = std::sqrt(r * r - far * far);
      full_lo = static_cast<int>(std::ceil(cx - w_in));
      full_hi = static_cast<int>(std::floor(cx + w_in));
      if (full_hi > full_lo) acc += c.count(j, full_lo, full_hi);
      else full_lo = full_hi = static_cast<int>(std::floor(cx));
    } else {
      full_lo = full_hi = static_cast<int>(std::floor(cx));
    }
    const int lo = std::max(0, static_cast<int>(std::floor(cx - w_out)));
    const int hi = std::min(c.w, static_cast<int>(std::ceil(cx + w_out)));
    for (int i = lo; i < hi; ++i) {
      if (i >= full_lo && i < full_hi) {
        i = full_hi - 1;
        continue;
      }
      if (c.at(i, j)) acc += rect_disk_area(i - cx, i + 1 - cx, y0, y1, r);
    }
  }
  return acc;
}

// Approximate overlap: occupied cells whose centers lie in the disk.
int center_count(const Cropped& c, double cx, double cy, double r) {
  if (c.dim == 1) {
    // centers i + 1/2 with |i + 1/2 - cx| <= r
    return c.count(0, static_cast<int>(std::ceil(cx - r - 0.5)), static_cast<int>(std::floor(cx + r - 0.5)) + 1);
  }
  int acc = 0;
  const int j0 = std::max(0, static_cast<int>(std::ceil(cy - r - 0.5)));
  const int j1 = std::min(c.h - 1, static_cast<int>(std::floor(cy + r - 0.5)));
  for (int j = j0; j <= j1; ++j) {
    const double dy = j + 0.5 - cy;
    const double w = std::sqrt(std::max(0.0, r * r - dy * dy));
    acc += c.count(j, static_cast<int>(std::ceil(cx - w - 0.5)), static_cast<int>(std::floor(cx + w - 0.5)) + 1);
  }
  return acc;
}

}  // namespace

double equivalent_radius(const GridSet& e) {
  if (e.empty()) throw Error(ErrorCode::EmptySet, "equivalent radius of the empty set");
  const int n = e.spec().dim;
  return std::pow(e.measure() / unit_ball_volume(n), 1.0 / n);
}

double ball_overlap(const GridSet& e, std::array<double, 2> center, double r) {
  if (e.empty()) return 0.0;
  const GridSpec& spec = e.spec();
  const CellBox box = e.bounding_box();
  const Cropped c = crop(e, box);
  const double cx = (center[0] - spec.origin[0]) / spec.h - box.lo[0];
  const double cy = spec.dim == 2 ? (center[1] - spec.origin[1]) / spec.h - box.lo[1] : 0.5;
  return exact_overlap(c, cx, cy, r / spec.h) * spec.cell_volume();
}

Asymmetry fraenkel_asymmetry(const GridSet& e, const AsymmetryOptions& options) {
  if (e.empty()) throw Error(ErrorCode::EmptySet, "asymmetry of the empty set");
  const GridSpec& spec = e.spec();
  const CellBox box = e.bounding_box();
  const Cropped c = crop(e, box);
  const double r = equivalent_radius(e) / spec.h;
  const double total = static_cast<double>(e.count());
  const bool plane = spec.dim == 2;

  // Coarse scan on the half-cell lattice over the bounding box; the optimal
  // center always lies in the box (projection onto a convex set).
  struct Candidate {
    int score;
    int i;
    int j;
  };
  std::vector<Candidate> scan;
  const int ni = 2 * c.w + 1;
  const int nj = plane ? 2 * c.h + 1 : 1;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i) scan.push_back({center_count(c, 0.5 * i, plane ? 0.5 * j : 0.5, r), i, j});
  std::stable_sort(scan.begin(), scan.end(), [](const Candidate& a, const Candidate& b) { return a.score > b.score; });

  std::vector<std::array<double, 2>> starts;
  for (const auto& cand : scan) {
    if (static_cast<int>(starts.size()) >= options.starts) break;
    const std::array<double, 2> p{0.5 * cand.i, plane ? 0.5 * cand.j : 0.5};
    const bool distinct = std::none_of(starts.begin(), starts.end(), [&](const auto& q) {
      return std::abs(q[0] - p[0]) <= 2.0 && std::abs(q[1] - p[1]) <= 2.0;
    });
    if (distinct) starts.push_back(p);
  }
  for (const auto& hint : options.hints) {
    starts.push_back({(hint[0] - spec.origin[0]) / spec.h - box.lo[0],
                      plane ? (hint[1] - spec.origin[1]) / spec.h - box.lo[1] : 0.5});
  }

  double best = -1.0;
  std::array<double, 2> best_at{0.0, 0.0};
  const double min_step = 1.0 / options.refine_ratio;
  for (auto p : starts) {
    double value = exact_overlap(c, p[0], p[1], r);
    for (double step = 0.5; step >= min_step; step *= 0.5) {
      while (true) {
        double top = value;
        std::array<double, 2> next = p;
        for (int dj = plane ? -1 : 0; dj <= (plane ? 1 : 0); ++dj) {
          for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            const std::array<double, 2> q{p[0] + di * step, p[1] + dj * step};
            const double v = exact_overlap(c, q[0], q[1], r);
            if (v > top * (1.0 + 1e-14)) {
              top = v;
              next = q;
            }
          }
        }
        if (next == p) break;
        p = next;
        value = top;
      }
    }
    if (value > best) {
      best = value;
      best_at = p;
    }
  }
  Asymmetry out;
  out.overlap = std::min(best, total) * spec.cell_volume();
  out.A = std::clamp(2.0 * (total - std::min(best, total)) / total, 0.0, 2.0);
  out.center = {spec.origin[0] + (box.lo[0] + best_at[0]) * spec.h,
                plane ? spec.origin[1] + (box.lo[1] + best_at[1]) * spec.h : 0.0};
  return out;
}

GridSet discrete_ball(int dim, double h, std::size_t k, std::array<double, 2> offset, int margin) {
  if (k == 0) throw Error(ErrorCode::EmptySet, "discrete ball with no cells");
  const double radius = dim == 1 ? 0.5 * static_cast<double>(k) : std::sqrt(static_cast<double>(k) / std::numbers::pi);
  const int half = static_cast<int>(std::ceil(radius)) + 2;
  const int n = 2 * half;
  // Cells -half..half-1 around the vertex at index 0.
  std::vector<std::pair<double, std::size_t>> order;
  const int ny = dim == 2 ? n : 1;
  order.reserve(static_cast<std::size_t>(n) * ny);
  for (int j = 0; j < ny; ++j) {
    const double dy = dim == 2 ? (j - half + 0.5) - offset[1] : 0.0;
    for (int i = 0; i < n; ++i) {
      const double dx = (i - half + 0.5) - offset[0];
      order.push_back({dx * dx + dy * dy, static_cast<std::size_t>(j) * n + i});
    }
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  if (k > order.size()) throw Error(ErrorCode::DomainTooSmall, "discrete ball does not fit");
  const int m = margin;
  GridSpec spec = dim == 1 ? GridSpec::line(n + 2 * m, h, -(half + m) * h)
                           : GridSpec::plane(n + 2 * m, n + 2 * m, h, -(half + m) * h, -(half + m) * h);
  GridSet ball(spec);
  for (std::size_t q = 0; q < k; ++q) {
    const auto idx = order[q].second;
    ball.set(static_cast<int>(idx % n) + m, dim == 2 ? static_cast<int>(idx / n) + m : 0, true);
  }
  return ball;
}

DeficitReport s_deficit(const GridSet& e, const InteractionTable& table, const DeficitOptions& options) {
  if (e.empty()) throw Error(ErrorCode::EmptySet, "deficit of the empty set");
  const GridSpec& spec = e.spec();
  if (table.params().dim != spec.dim || table.h() != spec.h)
    throw Error(ErrorCode::IncompatibleGrid, "table does not match the grid");
  DeficitReport rep;
  rep.id = options.id;
  rep.dim = spec.dim;
  rep.s = table.params().s;
  rep.h = spec.h;
  const PerimeterBreakdown pe = fractional_perimeter_breakdown(e, table, options.margin, options.threads);
  rep.Ps = pe.value;
  rep.r = equivalent_radius(e);

  std::vector<std::array<double, 2>> offsets = {{0.0, 0.0}, {0.5, 0.0}};
  if (spec.dim == 2) offsets = {{0.0, 0.0}, {0.5, 0.5}, {0.5, 0.0}, {0.0, 0.5}};
  double quad = pe.quadrature_bound;
  double spread = 0.0;
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    const GridSet ball = discrete_ball(spec.dim, spec.h, e.count(), offsets[k], options.margin + 1);
    const PerimeterBreakdown pb = fractional_perimeter_breakdown(ball, table, options.margin, options.threads);
    if (k == 0) {
      rep.PsBall = pb.value;
      quad += pb.quadrature_bound;
    } else {
      spread = std::max(spread, std::abs(pb.value - rep.PsBall));
    }
  }
  rep.Ds = (rep.Ps - rep.PsBall) / rep.PsBall;
  rep.error_budget = (spread + quad) / rep.PsBall;
  const Asymmetry a = fraenkel_asymmetry(e);
  rep.A = a.A;
  rep.center = a.center;
  if (rep.Ds > 1.0) rep.flags.push_back("Ds_gt_1");
  if (rep.Ds < -rep.error_budget) rep.flags.push_back("below_ball");
  return rep;
}

std::string deficit_csv_header() { return "id,N,s,h,Ps,r,PsBall,Ds,A,cx,cy,err_budget,flags"; }

std::string deficit_csv_row(const DeficitReport& r) {
  using detail::fmt17;
  std::ostringstream out;
  std::string flags;
  for (const auto& f : r.flags) flags += (flags.empty() ? "" : "|") + f;
  out << r.id << ',' << r.dim << ',' << fmt17(r.s) << ',' << fmt17(r.h) << ',' << fmt17(r.Ps) << ',' << fmt17(r.r)
      << ',' << fmt17(r.PsBall) << ',' << fmt17(r.Ds) << ',' << fmt17(r.A) << ',' << fmt17(r.center[0]) << ','
      << fmt17(r.center[1]) << ',' << fmt17(r.error_budget) << ',' << flags;
  return out.str();
}

LemmaCheck lemma_tre_check(const GridSet& e, std::size_t allowed_defect, double tol) {
  if (e.empty()) throw Error(ErrorCode::EmptySet, "lemma check on the empty set");
  const GridSpec& spec = e.spec();
  for (int axis = 0; axis < spec.dim; ++axis) {
    const std::size_t defect = symmetry_defect(e, axis);
    if (defect > allowed_defect) {
      std::ostringstream msg;
      msg << "set is not symmetric about the domain center: " << defect << " defect cells along axis " << axis << ':';
      const GridSet mirrored = reflect(e, axis, spec.midpoint(axis));
      int listed = 0;
      for (auto cell : set_algebra(e, mirrored, SetOp::SymmDiff).occupied_cells()) {
        if (listed++ == 16) {
          msg << " ...";
          break;
        }
        msg << " (" << cell[0];
        if (spec.dim == 2) msg << ',' << cell[1];
        msg << ')';
      }
      throw Error(ErrorCode::PreconditionViolation, msg.str());
    }
  }
  const std::array<double, 2> center{spec.midpoint(0), spec.dim == 2 ? spec.midpoint(1) : 0.0};
  const double measure = e.measure();
  const double r = equivalent_radius(e);
  LemmaCheck out;
  out.centered_ratio = 2.0 * (measure - std::min(measure, ball_overlap(e, center, r))) / measure;
  AsymmetryOptions opts;
  opts.hints.push_back(center);
  out.A = fraenkel_asymmetry(e, opts).A;
  out.lower_slack = out.centered_ratio - out.A;
  out.upper_slack = 3.0 * out.A - out.centered_ratio;
  out.holds = out.lower_slack >= -tol && out.upper_slack >= -tol;
  return out;
}

Symmetrization n_symmetrize(const GridSet& e, const InteractionTable& table, const DeficitOptions& options) {
  Symmetrization out;
  DeficitReport current = s_deficit(e, table, options);
  out.Ds_initial = current.Ds;
  out.A_initial = current.A;
  GridSet f = e;
  for (int axis = 0; axis < e.spec().dim; ++axis) {
    const Bisection b = bisect_halves(f, axis);
    const DeficitReport rp = s_deficit(b.plus, table, options);
    const DeficitReport rm = s_deficit(b.minus, table, options);
    const double tol_reflect = 1e-9 * current.Ps;
    const bool reflection_ok = current.Ps >= 0.5 * (rp.Ps + rm.Ps) - tol_reflect;
    const double bound_p = 2.0 * current.Ds + current.error_budget + rp.error_budget;
    const double bound_m = 2.0 * current.Ds + current.error_budget + rm.error_budget;
    const bool ok_p = rp.Ds <= bound_p;
    const bool ok_m = rm.Ds <= bound_m;
    bool pick_plus;
    if (ok_p && ok_m) pick_plus = rp.A >= rm.A;
    else if (ok_p || ok_m) pick_plus = ok_p;
    else {
      out.bound_violated = true;
      pick_plus = rp.Ds <= rm.Ds;
    }
    for (const auto* r : {&rp, &rm}) {
      AuditEntry a;
      a.axis = axis;
      a.plane = b.plane;
      a.side = r == &rp ? '+' : '-';
      a.Ps = r->Ps;
      a.Ds = r->Ds;
      a.A = r->A;
      a.snap_error = b.snap_error;
      a.selected = (r == &rp) == pick_plus;
      a.reflection_ok = reflection_ok;
      out.trail.push_back(a);
    }
    f = pick_plus ? b.plus : b.minus;
    current = pick_plus ? rp : rm;
  }
  out.F = f;
  out.Ds_final = current.Ds;
  out.A_final = current.A;
  return out;
}

}  // namespace fracperim
