#include "wbl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wbl/errors.hpp"

namespace wbl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

Box circle_box(const Circle& c) {
  return {c.center.real() - c.radius, c.center.real() + c.radius, c.center.imag() - c.radius,
          c.center.imag() + c.radius};
}

double distance_to_ray_from_origin(cplx z, cplx dir) {
  const double along = (std::conj(dir) * z).real();
  if (along <= 0.0) return std::abs(z);
  return std::abs((std::conj(dir) * z).imag());
}

double normalize_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

// Both roots of t^2 + 2 b t + c = 0, computed without cancellation.
int quadratic_roots(double b, double c, double& t1, double& t2) {
  const double disc = b * b - c;
  if (disc < 0.0) return 0;
  const double sq = std::sqrt(disc);
  const double q = (b >= 0.0) ? -b - sq : -b + sq;
  if (q == 0.0) {
    t1 = t2 = 0.0;
    return 1;
  }
  t1 = q;
  t2 = c / q;
  return 2;
}

void line_circle(cplx a, cplx d, const Circle& c, bool ray, std::vector<double>& s_out) {
  const cplx w = a - c.center;
  double s1 = 0, s2 = 0;
  const int n = quadratic_roots((std::conj(d) * w).real(), std::norm(w) - c.radius * c.radius, s1, s2);
  if (n >= 1 && (!ray || s1 >= 0.0)) s_out.push_back(s1);
  if (n == 2 && s2 != s1 && (!ray || s2 >= 0.0)) s_out.push_back(s2);
}

struct LinePiece {
  cplx a, d;
  bool ray;
};

std::optional<LinePiece> as_line(const Curve& c) {
  if (const auto* r = std::get_if<Ray>(&c)) return LinePiece{r->origin, r->direction, true};
  if (const auto* l = std::get_if<Line>(&c)) return LinePiece{l->point, l->direction, false};
  return std::nullopt;
}

}  // namespace

double Box::diagonal() const { return std::hypot(xmax - xmin, ymax - ymin); }

Box Box::merged(const Box& o) const {
  return {std::min(xmin, o.xmin), std::max(xmax, o.xmax), std::min(ymin, o.ymin), std::max(ymax, o.ymax)};
}

bool SectorConstraint::contains(cplx z) const {
  if (z == cplx{}) return false;
  double t = normalize_angle(std::arg(z) - lo);
  const double width = hi - lo;
  if (closed) {
    if (t > kTwoPi - 1e-15) t = 0.0;
    return t <= width;
  }
  return t > 0.0 && t < width;
}

bool ArcCell::contains(cplx z, double margin) const {
  for (const auto& cc : circles) {
    const double r = std::abs(z - cc.circle.center);
    if (cc.inside ? !(r < cc.circle.radius - margin) : !(r > cc.circle.radius + margin)) return false;
  }
  if (sector) {
    if (!sector->contains(z)) return false;
    if (margin > 0.0) {
      if (distance_to_ray_from_origin(z, std::polar(1.0, sector->lo)) <= margin) return false;
      if (distance_to_ray_from_origin(z, std::polar(1.0, sector->hi)) <= margin) return false;
    }
  }
  return true;
}

Domain::Domain(Shape s) : shape_(std::move(s)) {
  std::visit(
      [this](const auto& sh) {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disc>) {
          box_ = circle_box(sh.circle);
        } else if constexpr (std::is_same_v<T, Moon>) {
          box_ = circle_box(sh.outer);
        } else if constexpr (std::is_same_v<T, TruncatedPlane>) {
          box_ = circle_box(Circle{{0.0, 0.0}, sh.radius});
        } else {
          bool first = true;
          for (const auto& cell : sh.cells) {
            std::optional<Box> cell_box;
            for (const auto& cc : cell.circles) {
              if (!cc.inside) continue;
              const Box b = circle_box(cc.circle);
              if (!cell_box) {
                cell_box = b;
              } else {
                cell_box = Box{std::max(cell_box->xmin, b.xmin), std::min(cell_box->xmax, b.xmax),
                               std::max(cell_box->ymin, b.ymin), std::min(cell_box->ymax, b.ymax)};
              }
            }
            if (!cell_box) throw InvalidParameters("arc cell without a bounding inside-circle");
            box_ = first ? *cell_box : box_.merged(*cell_box);
            first = false;
          }
          if (first) throw InvalidParameters("arc region without cells");
        }
      },
      shape_);
}

Domain Domain::disc(cplx center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("disc radius must be positive");
  return Domain(Disc{Circle{center, radius}});
}

Domain Domain::moon(Circle outer, Circle inner) {
  if (!(outer.radius > 0.0) || !(inner.radius > 0.0)) throw InvalidArgument("moon radii must be positive");
  if (!(inner.radius < outer.radius)) throw InvalidArgument("inner radius must be below outer radius");
  const double d = std::abs(inner.center - outer.center);
  if (d == 0.0 || std::abs(d + inner.radius - outer.radius) > kTangencyTol * outer.radius) {
    throw TangencyNotFound("moon circles are not internally tangent");
  }
  return Domain(Moon{outer, inner});
}

Domain Domain::truncated_plane(double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("truncation radius must be positive");
  return Domain(TruncatedPlane{radius});
}

Domain Domain::arc_region(ArcRegion region) { return Domain(std::move(region)); }

bool Domain::contains_with_margin(cplx z, double margin) const {
  return std::visit(
      [&](const auto& sh) -> bool {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disc>) {
          return std::abs(z - sh.circle.center) < sh.circle.radius - margin;
        } else if constexpr (std::is_same_v<T, Moon>) {
          return std::abs(z - sh.outer.center) < sh.outer.radius - margin &&
                 std::abs(z - sh.inner.center) > sh.inner.radius + margin;
        } else if constexpr (std::is_same_v<T, TruncatedPlane>) {
          return std::abs(z) < sh.radius - margin;
        } else {
          return std::any_of(sh.cells.begin(), sh.cells.end(),
                             [&](const ArcCell& c) { return c.contains(z, margin); });
        }
      },
      shape_);
}

double Domain::boundary_distance(cplx z) const {
  return std::visit(
      [&](const auto& sh) -> double {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disc>) {
          return std::max(0.0, sh.circle.radius - std::abs(z - sh.circle.center));
        } else if constexpr (std::is_same_v<T, Moon>) {
          const double to_outer = sh.outer.radius - std::abs(z - sh.outer.center);
          const double to_inner = std::abs(z - sh.inner.center) - sh.inner.radius;
          return std::max(0.0, std::min(to_outer, to_inner));
        } else if constexpr (std::is_same_v<T, TruncatedPlane>) {
          return std::max(0.0, sh.radius - std::abs(z));
        } else {
          double best = 0.0;
          for (const auto& cell : sh.cells) {
            if (!cell.contains(z, 0.0)) continue;
            double d = std::numeric_limits<double>::infinity();
            for (const auto& cc : cell.circles) {
              d = std::min(d, std::abs(cc.circle.radius - std::abs(z - cc.circle.center)));
            }
            if (cell.sector) {
              d = std::min(d, distance_to_ray_from_origin(z, std::polar(1.0, cell.sector->lo)));
              d = std::min(d, distance_to_ray_from_origin(z, std::polar(1.0, cell.sector->hi)));
            }
            best = std::max(best, d);
          }
          return best;
        }
      },
      shape_);
}

std::vector<Curve> Domain::boundary_curves() const {
  std::vector<Curve> out;
  std::visit(
      [&](const auto& sh) {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disc>) {
          out.emplace_back(sh.circle);
        } else if constexpr (std::is_same_v<T, Moon>) {
          out.emplace_back(sh.outer);
          out.emplace_back(sh.inner);
        } else if constexpr (std::is_same_v<T, TruncatedPlane>) {
          out.emplace_back(Circle{{0.0, 0.0}, sh.radius});
        } else {
          for (const auto& cell : sh.cells) {
            for (const auto& cc : cell.circles) out.emplace_back(cc.circle);
            if (cell.sector) {
              out.emplace_back(Ray{{0.0, 0.0}, std::polar(1.0, cell.sector->lo)});
              out.emplace_back(Ray{{0.0, 0.0}, std::polar(1.0, cell.sector->hi)});
            }
          }
        }
      },
      shape_);
  return out;
}

cplx Domain::polar_center() const {
  return std::visit(
      [](const auto& sh) -> cplx {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Disc>) {
          return sh.circle.center;
        } else if constexpr (std::is_same_v<T, Moon>) {
          return sh.inner.center;
        } else if constexpr (std::is_same_v<T, TruncatedPlane>) {
          return {0.0, 0.0};
        } else {
          return sh.pole;
        }
      },
      shape_);
}

double default_probe_radius(const Moon& m) { return 0.5 * (m.outer.radius + m.inner.radius); }

MoonTangency moon_tangency(const Domain& domain, std::optional<double> probe_radius, std::size_t samples) {
  if (!domain.is<Moon>()) throw InvalidArgument("moon_tangency requires a moon domain");
  const Moon& m = domain.as<Moon>();
  const cplx axis = m.inner.center - m.outer.center;
  const double sep = std::abs(axis);
  if (sep == 0.0 || std::abs(sep + m.inner.radius - m.outer.radius) > kTangencyTol * m.outer.radius) {
    throw TangencyNotFound("moon circles are not internally tangent");
  }
  const cplx u = axis / sep;
  const cplx q = m.outer.center + m.outer.radius * u;
  const double rho = probe_radius.value_or(default_probe_radius(m));
  if (!(rho > 0.0) || rho > m.outer.radius) throw InvalidArgument("probe radius out of range");
  const Circle probe{q - rho * u, rho};
  if (samples < 1000) samples = 1000;

  auto ratio = [&](double theta) {
    const cplx z = probe.center + rho * u * std::polar(1.0, theta);
    const double to_outer = m.outer.radius - std::abs(z - m.outer.center);
    const double to_inner = std::abs(z - m.inner.center) - m.inner.radius;
    return std::min(to_outer, to_inner) / std::norm(z - q);
  };

  const double step = kTwoPi / static_cast<double>(samples);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double r = ratio((static_cast<double>(k) + 0.5) * step);
    if (r < best) {
      best = r;
      best_k = k;
    }
  }

  // Golden-section polish around the sampled minimum.
  double lo = std::max((static_cast<double>(best_k) - 0.5) * step, 0.25 * step);
  double hi = std::min((static_cast<double>(best_k) + 1.5) * step, kTwoPi - 0.25 * step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = ratio(x1), f2 = ratio(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = ratio(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = ratio(x2);
    }
  }
  best = std::min({best, f1, f2});

  const double floor = 1e-12 / m.outer.radius;
  if (!(best > floor)) throw NoValidC("no positive constant C satisfies d(z) >= C|z-Q|^2 on the probe circle");

  MoonTangency out;
  out.q = q;
  out.c = best * (1.0 - 1e-9);
  out.probe = probe;
  out.samples = samples;
  out.argmin = probe.center + rho * u * std::polar(1.0, (static_cast<double>(best_k) + 0.5) * step);
  return out;
}

void ray_crossings(const Curve& curve, cplx origin, cplx dir, std::vector<double>& out) {
  if (const auto* c = std::get_if<Circle>(&curve)) {
    std::vector<double> ts;
    line_circle(origin, dir, *c, true, ts);
    for (double t : ts) {
      if (t > 0.0) out.push_back(t);
    }
    return;
  }
  const auto lp = as_line(curve);
  const double den = cross(dir, lp->d);
  if (std::abs(den) < 1e-14) return;
  const double t = cross(lp->a - origin, lp->d) / den;
  const double s = cross(lp->a - origin, dir) / den;
  if (t > 0.0 && (!lp->ray || s >= 0.0)) out.push_back(t);
}

void curve_intersections(const Curve& a, const Curve& b, std::vector<cplx>& out) {
  const auto* ca = std::get_if<Circle>(&a);
  const auto* cb = std::get_if<Circle>(&b);
  if (ca && cb) {
    const cplx delta = cb->center - ca->center;
    const double d = std::abs(delta);
    const double scale = std::max({ca->radius, cb->radius, 1e-300});
    if (d < 1e-14 * scale) return;
    const double tol = 1e-10 * scale;
    if (d > ca->radius + cb->radius + tol || d < std::abs(ca->radius - cb->radius) - tol) return;
    const double along = (d * d + ca->radius * ca->radius - cb->radius * cb->radius) / (2.0 * d);
    const double h2 = ca->radius * ca->radius - along * along;
    const cplx e = delta / d;
    const cplx base = ca->center + along * e;
    if (h2 <= tol * tol) {
      out.push_back(base);
      return;
    }
    const double h = std::sqrt(h2);
    out.push_back(base + cplx{0.0, h} * e);
    out.push_back(base - cplx{0.0, h} * e);
    return;
  }
  if (ca || cb) {
    const Circle& c = ca ? *ca : *cb;
    const auto lp = as_line(ca ? b : a);
    std::vector<double> ss;
    line_circle(lp->a, lp->d, c, lp->ray, ss);
    for (double s : ss) out.push_back(lp->a + s * lp->d);
    return;
  }
  const auto la = as_line(a);
  const auto lb = as_line(b);
  const double den = cross(la->d, lb->d);
  if (std::abs(den) < 1e-14) return;
  const double s = cross(lb->a - la->a, lb->d) / den;
  const double t = cross(lb->a - la->a, la->d) / den;
  if ((la->ray && s < 0.0) || (lb->ray && t < 0.0)) return;
  out.push_back(la->a + s * la->d);
}

}  // namespace wbl
