#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace fracperim {

struct Interval {
  double a = 0.0;
  double b = 1.0;
};

/// Ball B_r(center); dim 1 is the interval (c - r, c + r).
struct Ball {
  int dim = 2;
  std::array<double, 2> center{0.0, 0.0};
  double r = 1.0;
};

struct Ellipse {
  std::array<double, 2> center{0.0, 0.0};
  double a = 1.0;  // semi-axis along x
  double b = 1.0;  // semi-axis along y
};

struct AxisBox {
  int dim = 2;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
};

/// Star domain r(theta) = r0 (1 + eps cos(k theta)) around center.
struct FourierDisk {
  std::array<double, 2> center{0.0, 0.0};
  double r0 = 1.0;
  double eps = 0.0;
  int k = 3;
};

/// Union of two possibly overlapping disks; lens geometry is handled exactly.
struct DiskPair {
  std::array<double, 2> c1{0.0, 0.0};
  double r1 = 1.0;
  std::array<double, 2> c2{0.0, 0.0};
  double r2 = 0.0;
};

/// Two disks of radius R centered at (cx -/+ c, cy) joined by the strip
/// |y - cy| <= w/2, |x - cx| <= c.
struct Dumbbell {
  std::array<double, 2> center{0.0, 0.0};
  double R = 1.0;
  double c = 2.0;
  double w = 0.5;
};

class ShapeSpec;

/// Members must be pairwise disjoint (checked through disjoint bounding boxes).
struct ShapeUnion {
  std::vector<ShapeSpec> members;
};

struct Bounds {
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};
};

/// Exact analytic shape description. Volume and classical perimeter come from
/// closed forms (or spectrally accurate quadrature for the Fourier disk),
/// never from a raster.
class ShapeSpec {
 public:
  using Variant =
      std::variant<Interval, Ball, Ellipse, AxisBox, FourierDisk, DiskPair, Dumbbell, ShapeUnion>;

  ShapeSpec(Variant v);  // NOLINT(google-explicit-constructor)

  const Variant& variant() const { return v_; }

  int dim() const;
  bool contains(double x, double y = 0.0) const;
  double volume() const;
  /// Classical perimeter; in 1D the number of boundary points.
  double perimeter() const;
  Bounds bounds() const;

  ShapeSpec translated(double dx, double dy = 0.0) const;
  ShapeSpec scaled(double factor) const;
  /// Rescales about the origin so that the volume equals the unit-ball volume.
  ShapeSpec normalized_to_unit_ball() const;

  /// Flat key-value form, e.g. `kind=ellipse a=1.2 b=0.8333 cx=0 cy=0`.
  std::string describe() const;
  static ShapeSpec parse(const std::string& text);

 private:
  void validate() const;
  Variant v_;
};

/// Volume of the unit ball |B|: 2 for N = 1, pi for N = 2.
double unit_ball_volume(int dim);

}  // namespace fracperim
