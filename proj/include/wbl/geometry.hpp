#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

namespace wbl {

using cplx = std::complex<double>;

/// Membership margin: points closer than this to the boundary are reported
/// as non-members.
inline constexpr double kBoundaryTol = 1e-12;
/// Relative tolerance for the internal tangency of a moon's two circles.
inline constexpr double kTangencyTol = 1e-9;

struct Circle {
  cplx center;
  double radius = 0.0;
};

/// Half-line {origin + t*direction : t >= 0}; direction has unit modulus.
struct Ray {
  cplx origin;
  cplx direction;
};

/// Full line through `point` with unit `direction`.
struct Line {
  cplx point;
  cplx direction;
};

using Curve = std::variant<Circle, Ray, Line>;

struct Box {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

  bool contains(cplx z) const {
    return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin && z.imag() <= ymax;
  }
  double diagonal() const;
  cplx center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
  Box merged(const Box& o) const;
};

struct Disc {
  Circle circle;
};

/// Outer disc minus the closed inner disc; the inner circle is internally
/// tangent to the outer one at a single point.
struct Moon {
  Circle outer;
  Circle inner;
};

/// The disc |z| < radius standing in for the whole plane.
struct TruncatedPlane {
  double radius = 0.0;
};

struct CircleConstraint {
  Circle circle;
  bool inside = true;  // |z - c| < r when true, |z - c| > r otherwise
};

/// Angular window about the origin. Open: lo < arg z < hi. Closed: lo <= arg z <= hi.
/// The window is measured continuously from lo, so hi - lo may not exceed 2*pi.
struct SectorConstraint {
  double lo = 0.0;
  double hi = 0.0;
  bool closed = false;

  bool contains(cplx z) const;
};

/// Intersection of circle constraints and at most one sector.
struct ArcCell {
  std::vector<CircleConstraint> circles;
  std::optional<SectorConstraint> sector;

  bool contains(cplx z, double margin) const;
};

/// Finite union of ArcCells. Used for the stage regions of the thin-moon
/// construction; general Jordan curves are not supported.
struct ArcRegion {
  std::vector<ArcCell> cells;
  cplx pole{0.0, 0.0};  // preferred polar origin for quadrature
};

class Domain {
 public:
  using Shape = std::variant<Disc, Moon, TruncatedPlane, ArcRegion>;

  static Domain disc(cplx center, double radius);
  /// Throws TangencyNotFound when the circles are not internally tangent.
  static Domain moon(Circle outer, Circle inner);
  static Domain truncated_plane(double radius);
  static Domain arc_region(ArcRegion region);

  /// Strict membership; points within kBoundaryTol of the boundary are outside.
  bool contains(cplx z) const { return contains_with_margin(z, kBoundaryTol); }
  /// Membership without the boundary margin (quadrature uses this).
  bool contains_raw(cplx z) const { return contains_with_margin(z, 0.0); }

  /// Distance from z to the boundary; 0 outside the closure. For ArcRegion this
  /// is a lower bound built from the distances to each cell's boundary curves.
  double boundary_distance(cplx z) const;

  const Box& bounding_box() const { return box_; }
  const Shape& shape() const { return shape_; }

  /// Every curve carrying part of the boundary (possibly with extra pieces).
  std::vector<Curve> boundary_curves() const;

  /// A point from which polar coordinates sweep the domain with analytic
  /// radial limits (disc center, inner center of a moon, region pole).
  cplx polar_center() const;

  template <class T>
  bool is() const { return std::holds_alternative<T>(shape_); }
  template <class T>
  const T& as() const { return std::get<T>(shape_); }

 private:
  explicit Domain(Shape s);
  bool contains_with_margin(cplx z, double margin) const;

  Shape shape_;
  Box box_;
};

/// Tangency data of a moon: the double boundary point Q, the probe circle
/// through Q, and a constant C with d(z) >= C |z - Q|^2 on the probe circle.
struct MoonTangency {
  cplx q;
  double c = 0.0;
  Circle probe;
  std::size_t samples = 0;
  cplx argmin;  // sample realizing the minimum ratio
};

/// Default probe radius: midway between the inner and outer radii.
double default_probe_radius(const Moon& m);

/// Throws InvalidArgument for non-moon domains, TangencyNotFound for
/// non-tangent circles, NoValidC when the sampled ratio collapses.
MoonTangency moon_tangency(const Domain& moon, std::optional<double> probe_radius = std::nullopt,
                           std::size_t samples = 4096);

/// Ray/curve crossings: parameters t > 0 with origin + t*dir on the curve.
void ray_crossings(const Curve& curve, cplx origin, cplx dir, std::vector<double>& out);

/// Intersection points of two curves (tangent circles yield the tangency point).
void curve_intersections(const Curve& a, const Curve& b, std::vector<cplx>& out);

}  // namespace wbl
