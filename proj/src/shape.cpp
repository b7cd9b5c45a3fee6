#include "fracperim/shape.hpp"

#include "fracperim/error.hpp"

#include <boost/math/special_functions/ellint_2.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace fracperim {
namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Half-angle of the arc of circle (r_self) lying inside circle (r_other) at
// center distance d, for intersecting circles.
double inner_half_angle(double d, double r_self, double r_other) {
  const double c = (d * d + r_self * r_self - r_other * r_other) / (2.0 * d * r_self);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

struct PairGeometry {
  double area;
  double perimeter;
};

PairGeometry disk_pair_geometry(const DiskPair& p) {
  const double d = std::hypot(p.c2[0] - p.c1[0], p.c2[1] - p.c1[1]);
  const double a1 = kPi * p.r1 * p.r1;
  const double a2 = kPi * p.r2 * p.r2;
  if (p.r2 == 0.0) return {a1, 2.0 * kPi * p.r1};
  if (d >= p.r1 + p.r2) return {a1 + a2, 2.0 * kPi * (p.r1 + p.r2)};
  if (d <= std::abs(p.r1 - p.r2)) {
    const double r = std::max(p.r1, p.r2);
    return {kPi * r * r, 2.0 * kPi * r};
  }
  const double t1 = inner_half_angle(d, p.r1, p.r2);
  const double t2 = inner_half_angle(d, p.r2, p.r1);
  const double lens = p.r1 * p.r1 * (t1 - 0.5 * std::sin(2.0 * t1)) +
                      p.r2 * p.r2 * (t2 - 0.5 * std::sin(2.0 * t2));
  return {a1 + a2 - lens, 2.0 * p.r1 * (kPi - t1) + 2.0 * p.r2 * (kPi - t2)};
}

double fourier_radius(const FourierDisk& f, double theta) {
  return f.r0 * (1.0 + f.eps * std::cos(f.k * theta));
}

Bounds merge(const Bounds& a, const Bounds& b) {
  Bounds out;
  for (int i = 0; i < 2; ++i) {
    out.lo[i] = std::min(a.lo[i], b.lo[i]);
    out.hi[i] = std::max(a.hi[i], b.hi[i]);
  }
  return out;
}

std::map<std::string, std::string> tokenize(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorCode::Parse, "expected key=value, got '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

class KeyReader {
 public:
  explicit KeyReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  double get(const std::string& key, std::optional<double> fallback = std::nullopt) {
    auto it = kv_.find(key);
    if (it == kv_.end()) {
      if (fallback) return *fallback;
      throw Error(ErrorCode::Parse, "missing key '" + key + "'");
    }
    used_.push_back(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "bad number for '" + key + "': " + it->second);
    }
  }
  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  void finish() const {
    for (const auto& [k, v] : kv_) {
      if (k == "kind") continue;
      if (std::find(used_.begin(), used_.end(), k) == used_.end())
        throw Error(ErrorCode::Parse, "unknown key '" + k + "'");
    }
  }

 private:
  std::map<std::string, std::string> kv_;
  std::vector<std::string> used_;
};

}  // namespace

double unit_ball_volume(int dim) {
  if (dim == 1) return 2.0;
  if (dim == 2) return kPi;
  throw Error(ErrorCode::InvalidParameter, "dimension must be 1 or 2");
}

ShapeSpec::ShapeSpec(Variant v) : v_(std::move(v)) { validate(); }

void ShapeSpec::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
  std::visit(Overloaded{
                 [&](const Interval& s) {
                   if (!(s.b > s.a)) bad("interval needs a < b");
                 },
                 [&](const Ball& s) {
                   if (s.dim != 1 && s.dim != 2) bad("ball dim must be 1 or 2");
                   if (!(s.r > 0.0)) bad("ball radius must be positive");
                 },
                 [&](const Ellipse& s) {
                   if (!(s.a > 0.0 && s.b > 0.0)) bad("ellipse semi-axes must be positive");
                 },
                 [&](const AxisBox& s) {
                   if (s.dim != 1 && s.dim != 2) bad("box dim must be 1 or 2");
                   for (int i = 0; i < s.dim; ++i)
                     if (!(s.hi[i] > s.lo[i])) bad("box needs lo < hi");
                 },
                 [&](const FourierDisk& s) {
                   if (!(s.r0 > 0.0)) bad("fourier disk needs r0 > 0");
                   if (!(std::abs(s.eps) < 1.0)) bad("fourier disk needs |eps| < 1");
                   if (s.k < 1) bad("fourier disk needs k >= 1");
                 },
                 [&](const DiskPair& s) {
                   if (!(s.r1 > 0.0) || !(s.r2 >= 0.0)) bad("disk pair radii invalid");
                 },
                 [&](const Dumbbell& s) {
                   if (!(s.R > 0.0)) bad("dumbbell needs R > 0");
                   if (!(s.w > 0.0 && s.w < 2.0 * s.R)) bad("dumbbell neck must satisfy 0 < w < 2R");
                   if (!(s.c > s.R)) bad("dumbbell disks must be disjoint (c > R)");
                 },
                 [&](const ShapeUnion& s) {
                   if (s.members.empty()) bad("union needs members");
                   const int d = s.members.front().dim();
                   for (std::size_t i = 0; i < s.members.size(); ++i) {
                     if (s.members[i].dim() != d) bad("union members must share a dimension");
                     const Bounds bi = s.members[i].bounds();
                     for (std::size_t j = 0; j < i; ++j) {
                       const Bounds bj = s.members[j].bounds();
                       bool separated = false;
                       for (int a = 0; a < d; ++a)
                         separated = separated || bi.hi[a] <= bj.lo[a] || bj.hi[a] <= bi.lo[a];
                       if (!separated) bad("union members must have disjoint bounding boxes");
                     }
                   }
                 },
             },
             v_);
}

int ShapeSpec::dim() const {
  return std::visit(Overloaded{
                        [](const Interval&) { return 1; },
                        [](const Ball& s) { return s.dim; },
                        [](const AxisBox& s) { return s.dim; },
                        [](const ShapeUnion& s) { return s.members.front().dim(); },
                        [](const auto&) { return 2; },
                    },
                    v_);
}

bool ShapeSpec::contains(double x, double y) const {
  return std::visit(
      Overloaded{
          [&](const Interval& s) { return x > s.a && x < s.b; },
          [&](const Ball& s) {
            const double dx = x - s.center[0];
            if (s.dim == 1) return std::abs(dx) < s.r;
            const double dy = y - s.center[1];
            return dx * dx + dy * dy < s.r * s.r;
          },
          [&](const Ellipse& s) {
            const double u = (x - s.center[0]) / s.a;
            const double v = (y - s.center[1]) / s.b;
            return u * u + v * v < 1.0;
          },
          [&](const AxisBox& s) {
            if (!(x > s.lo[0] && x < s.hi[0])) return false;
            return s.dim == 1 || (y > s.lo[1] && y < s.hi[1]);
          },
          [&](const FourierDisk& s) {
            const double dx = x - s.center[0];
            const double dy = y - s.center[1];
            const double rr = std::hypot(dx, dy);
            return rr < fourier_radius(s, std::atan2(dy, dx));
          },
          [&](const DiskPair& s) {
            const double d1 = std::hypot(x - s.c1[0], y - s.c1[1]);
            const double d2 = std::hypot(x - s.c2[0], y - s.c2[1]);
            return d1 < s.r1 || d2 < s.r2;
          },
          [&](const Dumbbell& s) {
            const double dx = x - s.center[0];
            const double dy = y - s.center[1];
            if (std::hypot(dx - s.c, dy) < s.R || std::hypot(dx + s.c, dy) < s.R) return true;
            return std::abs(dx) <= s.c && std::abs(dy) < 0.5 * s.w;
          },
          [&](const ShapeUnion& s) {
            return std::any_of(s.members.begin(), s.members.end(),
                               [&](const ShapeSpec& m) { return m.contains(x, y); });
          },
      },
      v_);
}

double ShapeSpec::volume() const {
  return std::visit(
      Overloaded{
          [](const Interval& s) { return s.b - s.a; },
          [](const Ball& s) { return s.dim == 1 ? 2.0 * s.r : kPi * s.r * s.r; },
          [](const Ellipse& s) { return kPi * s.a * s.b; },
          [](const AxisBox& s) {
            double v = s.hi[0] - s.lo[0];
            if (s.dim == 2) v *= s.hi[1] - s.lo[1];
            return v;
          },
          [](const FourierDisk& s) { return kPi * s.r0 * s.r0 * (1.0 + 0.5 * s.eps * s.eps); },
          [](const DiskPair& s) { return disk_pair_geometry(s).area; },
          [](const Dumbbell& s) {
            const double a = 0.5 * s.w;
            const double cap = a * std::sqrt(s.R * s.R - a * a) + s.R * s.R * std::asin(a / s.R);
            return 2.0 * kPi * s.R * s.R + 2.0 * s.c * s.w - 2.0 * cap;
          },
          [](const ShapeUnion& s) {
            double v = 0.0;
            for (const auto& m : s.members) v += m.volume();
            return v;
          },
      },
      v_);
}

double ShapeSpec::perimeter() const {
  return std::visit(
      Overloaded{
          [](const Interval&) { return 2.0; },
          [](const Ball& s) { return s.dim == 1 ? 2.0 : 2.0 * kPi * s.r; },
          [](const Ellipse& s) {
            const double major = std::max(s.a, s.b);
            const double minor = std::min(s.a, s.b);
            const double k = std::sqrt(1.0 - (minor / major) * (minor / major));
            return 4.0 * major * boost::math::ellint_2(k);
          },
          [](const AxisBox& s) {
            if (s.dim == 1) return 2.0;
            return 2.0 * ((s.hi[0] - s.lo[0]) + (s.hi[1] - s.lo[1]));
          },
          [](const FourierDisk& s) {
            // Periodic trapezoid rule: spectrally accurate for the smooth
            // arc-length integrand.
            constexpr int kSamples = 4096;
            double acc = 0.0;
            for (int i = 0; i < kSamples; ++i) {
              const double t = 2.0 * kPi * i / kSamples;
              const double r = fourier_radius(s, t);
              const double dr = -s.r0 * s.eps * s.k * std::sin(s.k * t);
              acc += std::sqrt(r * r + dr * dr);
            }
            return acc * 2.0 * kPi / kSamples;
          },
          [](const DiskPair& s) { return disk_pair_geometry(s).perimeter; },
          [](const Dumbbell& s) {
            const double a = 0.5 * s.w;
            const double arcs = 2.0 * (2.0 * kPi * s.R - 2.0 * s.R * std::asin(a / s.R));
            return arcs + 4.0 * (s.c - std::sqrt(s.R * s.R - a * a));
          },
          [](const ShapeUnion& s) {
            double p = 0.0;
            for (const auto& m : s.members) p += m.perimeter();
            return p;
          },
      },
      v_);
}

Bounds ShapeSpec::bounds() const {
  return std::visit(
      Overloaded{
          [](const Interval& s) { return Bounds{{s.a, 0.0}, {s.b, 0.0}}; },
          [](const Ball& s) {
            if (s.dim == 1) return Bounds{{s.center[0] - s.r, 0.0}, {s.center[0] + s.r, 0.0}};
            return Bounds{{s.center[0] - s.r, s.center[1] - s.r},
                          {s.center[0] + s.r, s.center[1] + s.r}};
          },
          [](const Ellipse& s) {
            return Bounds{{s.center[0] - s.a, s.center[1] - s.b},
                          {s.center[0] + s.a, s.center[1] + s.b}};
          },
          [](const AxisBox& s) {
            if (s.dim == 1) return Bounds{{s.lo[0], 0.0}, {s.hi[0], 0.0}};
            return Bounds{s.lo, s.hi};
          },
          [](const FourierDisk& s) {
            const double r = s.r0 * (1.0 + std::abs(s.eps));
            return Bounds{{s.center[0] - r, s.center[1] - r}, {s.center[0] + r, s.center[1] + r}};
          },
          [](const DiskPair& s) {
            Bounds a{{s.c1[0] - s.r1, s.c1[1] - s.r1}, {s.c1[0] + s.r1, s.c1[1] + s.r1}};
            if (s.r2 == 0.0) return a;
            Bounds b{{s.c2[0] - s.r2, s.c2[1] - s.r2}, {s.c2[0] + s.r2, s.c2[1] + s.r2}};
            return merge(a, b);
          },
          [](const Dumbbell& s) {
            return Bounds{{s.center[0] - s.c - s.R, s.center[1] - s.R},
                          {s.center[0] + s.c + s.R, s.center[1] + s.R}};
          },
          [](const ShapeUnion& s) {
            Bounds b = s.members.front().bounds();
            for (const auto& m : s.members) b = merge(b, m.bounds());
            return b;
          },
      },
      v_);
}

ShapeSpec ShapeSpec::translated(double dx, double dy) const {
  const std::array<double, 2> d{dx, dy};
  auto shift = [&](std::array<double, 2> c) { return std::array<double, 2>{c[0] + d[0], c[1] + d[1]}; };
  return std::visit(
      Overloaded{
          [&](const Interval& s) { return ShapeSpec(Interval{s.a + dx, s.b + dx}); },
          [&](const Ball& s) {
            Ball out = s;
            out.center = shift(s.center);
            if (s.dim == 1) out.center[1] = 0.0;
            return ShapeSpec(out);
          },
          [&](const Ellipse& s) { return ShapeSpec(Ellipse{shift(s.center), s.a, s.b}); },
          [&](const AxisBox& s) {
            AxisBox out = s;
            out.lo = shift(s.lo);
            out.hi = shift(s.hi);
            if (s.dim == 1) out.lo[1] = out.hi[1] = 0.0;
            return ShapeSpec(out);
          },
          [&](const FourierDisk& s) {
            FourierDisk out = s;
            out.center = shift(s.center);
            return ShapeSpec(out);
          },
          [&](const DiskPair& s) { return ShapeSpec(DiskPair{shift(s.c1), s.r1, shift(s.c2), s.r2}); },
          [&](const Dumbbell& s) {
            Dumbbell out = s;
            out.center = shift(s.center);
            return ShapeSpec(out);
          },
          [&](const ShapeUnion& s) {
            ShapeUnion out;
            for (const auto& m : s.members) out.members.push_back(m.translated(dx, dy));
            return ShapeSpec(out);
          },
      },
      v_);
}

ShapeSpec ShapeSpec::scaled(double f) const {
  if (!(f > 0.0)) throw Error(ErrorCode::InvalidParameter, "scale factor must be positive");
  auto mul = [&](std::array<double, 2> c) { return std::array<double, 2>{c[0] * f, c[1] * f}; };
  return std::visit(
      Overloaded{
          [&](const Interval& s) { return ShapeSpec(Interval{s.a * f, s.b * f}); },
          [&](const Ball& s) { return ShapeSpec(Ball{s.dim, mul(s.center), s.r * f}); },
          [&](const Ellipse& s) { return ShapeSpec(Ellipse{mul(s.center), s.a * f, s.b * f}); },
          [&](const AxisBox& s) { return ShapeSpec(AxisBox{s.dim, mul(s.lo), mul(s.hi)}); },
          [&](const FourierDisk& s) {
            return ShapeSpec(FourierDisk{mul(s.center), s.r0 * f, s.eps, s.k});
          },
          [&](const DiskPair& s) { return ShapeSpec(DiskPair{mul(s.c1), s.r1 * f, mul(s.c2), s.r2 * f}); },
          [&](const Dumbbell& s) { return ShapeSpec(Dumbbell{mul(s.center), s.R * f, s.c * f, s.w * f}); },
          [&](const ShapeUnion& s) {
            ShapeUnion out;
            for (const auto& m : s.members) out.members.push_back(m.scaled(f));
            return ShapeSpec(out);
          },
      },
      v_);
}

ShapeSpec ShapeSpec::normalized_to_unit_ball() const {
  const int n = dim();
  return scaled(std::pow(unit_ball_volume(n) / volume(), 1.0 / n));
}

std::string ShapeSpec::describe() const {
  return std::visit(
      Overloaded{
          [](const Interval& s) { return "kind=interval a=" + num(s.a) + " b=" + num(s.b); },
          [](const Ball& s) {
            std::string out = "kind=ball dim=" + std::to_string(s.dim) + " r=" + num(s.r) +
                              " cx=" + num(s.center[0]);
            if (s.dim == 2) out += " cy=" + num(s.center[1]);
            return out;
          },
          [](const Ellipse& s) {
            return "kind=ellipse a=" + num(s.a) + " b=" + num(s.b) + " cx=" + num(s.center[0]) +
                   " cy=" + num(s.center[1]);
          },
          [](const AxisBox& s) {
            std::string out = "kind=box dim=" + std::to_string(s.dim) + " x0=" + num(s.lo[0]) +
                              " x1=" + num(s.hi[0]);
            if (s.dim == 2) out += " y0=" + num(s.lo[1]) + " y1=" + num(s.hi[1]);
            return out;
          },
          [](const FourierDisk& s) {
            return "kind=fourier r0=" + num(s.r0) + " eps=" + num(s.eps) + " k=" +
                   std::to_string(s.k) + " cx=" + num(s.center[0]) + " cy=" + num(s.center[1]);
          },
          [](const DiskPair& s) {
            return "kind=diskpair r1=" + num(s.r1) + " cx1=" + num(s.c1[0]) + " cy1=" + num(s.c1[1]) +
                   " r2=" + num(s.r2) + " cx2=" + num(s.c2[0]) + " cy2=" + num(s.c2[1]);
          },
          [](const Dumbbell& s) {
            return "kind=dumbbell R=" + num(s.R) + " c=" + num(s.c) + " w=" + num(s.w) +
                   " cx=" + num(s.center[0]) + " cy=" + num(s.center[1]);
          },
          [](const ShapeUnion& s) {
            std::string out = "kind=union";
            for (const auto& m : s.members) out += "; " + m.describe();
            return out;
          },
      },
      v_);
}

ShapeSpec ShapeSpec::parse(const std::string& text) {
  if (text.find(';') != std::string::npos) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
      if (ch == ';') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    parts.push_back(cur);
    const auto head = tokenize(parts.front());
    if (head.size() != 1 || !head.count("kind") || head.at("kind") != "union")
      throw Error(ErrorCode::Parse, "';' separated blocks must start with kind=union");
    ShapeUnion u;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i].find_first_not_of(" \t\r\n") == std::string::npos) continue;
      u.members.push_back(parse(parts[i]));
    }
    return ShapeSpec(u);
  }

  auto kv = tokenize(text);
  if (!kv.count("kind")) throw Error(ErrorCode::Parse, "missing kind=");
  const std::string kind = kv.at("kind");
  KeyReader r(kv);
  auto build = [&]() -> ShapeSpec {
    if (kind == "interval") {
      return ShapeSpec(Interval{r.get("a"), r.get("b")});
    }
    if (kind == "ball") {
      const int d = static_cast<int>(r.get("dim", 2.0));
      Ball b{d, {r.get("cx", 0.0), d == 2 ? r.get("cy", 0.0) : 0.0}, r.get("r")};
      return ShapeSpec(b);
    }
    if (kind == "ellipse") {
      return ShapeSpec(Ellipse{{r.get("cx", 0.0), r.get("cy", 0.0)}, r.get("a"), r.get("b")});
    }
    if (kind == "box") {
      const int d = static_cast<int>(r.get("dim", r.has("y0") ? 2.0 : 1.0));
      AxisBox b{d, {r.get("x0"), d == 2 ? r.get("y0") : 0.0}, {r.get("x1"), d == 2 ? r.get("y1") : 0.0}};
      return ShapeSpec(b);
    }
    if (kind == "fourier") {
      return ShapeSpec(FourierDisk{{r.get("cx", 0.0), r.get("cy", 0.0)},
                                   r.get("r0"),
                                   r.get("eps"),
                                   static_cast<int>(r.get("k", 3.0))});
    }
    if (kind == "diskpair") {
      return ShapeSpec(DiskPair{{r.get("cx1", 0.0), r.get("cy1", 0.0)},
                                r.get("r1"),
                                {r.get("cx2", 0.0), r.get("cy2", 0.0)},
                                r.get("r2")});
    }
    if (kind == "dumbbell") {
      return ShapeSpec(
          Dumbbell{{r.get("cx", 0.0), r.get("cy", 0.0)}, r.get("R"), r.get("c"), r.get("w")});
    }
    throw Error(ErrorCode::Parse, "unknown shape kind '" + kind + "'");
  };
  ShapeSpec out = build();
  r.finish();
  return out;
}

}  // namespace fracperim
