#include "wbl/moon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wbl/errors.hpp"
#include "wbl/target.hpp"

namespace wbl {

namespace {

constexpr double kPi = std::numbers::pi;

// Sampled ray extent: far enough to leave the bounding box.
double ray_extent(const Domain& d) {
  const Box& b = d.bounding_box();
  double r = 0.0;
  for (cplx c : {cplx(b.xmin, b.ymin), cplx(b.xmin, b.ymax), cplx(b.xmax, b.ymin), cplx(b.xmax, b.ymax)}) {
    r = std::max(r, std::abs(c));
  }
  return 1.01 * r;
}

void check_alphas(std::span<const double> a) {
  double prev = 0.25;
  for (double x : a) {
    if (!(x > 0.0 && x < prev)) throw InvalidParameters("need 0 < alpha_k < ... < alpha_1 < 1/4");
    prev = x;
  }
}

ArcCell stage_cell(int j, double alpha_prev) {
  // j = 1 uses the circle |z - 1/4| = 3/4.
  const double a = j == 1 ? 0.25 : alpha_prev;
  const double half = kPi / std::ldexp(1.0, j + 1);
  ArcCell cell;
  cell.circles.push_back({Circle{0.0, 1.0}, true});
  cell.circles.push_back({Circle{a, 1.0 - a}, false});
  cell.sector = SectorConstraint{half, 2.0 * kPi - half, false};
  return cell;
}

// Crossing of the ray arg z = theta with |z - a| = 1 - a.
double inner_radius(double alpha, double theta) {
  const double c = std::cos(theta);
  const double disc = alpha * alpha * c * c - alpha * alpha + (1.0 - alpha) * (1.0 - alpha);
  return alpha * c + std::sqrt(std::max(0.0, disc));
}

}  // namespace

BranchSpec BranchSpec::make(const Domain& domain, std::optional<cplx> direction) {
  cplx dir;
  if (direction) {
    dir = *direction;
  } else if (domain.is<Moon>()) {
    dir = moon_tangency(domain, std::nullopt, 1024).q;
  } else if (domain.is<ArcRegion>()) {
    dir = 1.0;
  } else {
    throw InvalidArgument("a cut direction is required for this domain");
  }
  const double m = std::abs(dir);
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidArgument("cut direction must be nonzero");
  dir /= m;
  if (domain.contains_raw(0.0)) throw CutIntersectsDomain("the branch point lies in the domain");
  const double extent = ray_extent(domain);
  const int n = 20000;
  for (int i = 1; i <= n; ++i) {
    const double t = extent * static_cast<double>(i) / n;
    if (domain.contains_raw(t * dir)) throw CutIntersectsDomain("cut ray enters the domain");
  }
  // Near the branch point the uniform grid is too coarse.
  for (int k = 1; k <= 60; ++k) {
    const double t = extent * std::ldexp(1.0, -k);
    if (domain.contains_raw(t * dir)) throw CutIntersectsDomain("cut ray enters the domain");
  }
  return BranchSpec(dir, std::arg(dir));
}

cplx branch_sqrt(const BranchSpec& spec, cplx z) { return sqrt_with_cut(z, spec.cut_angle()); }

std::pair<Polynomial, Polynomial> parity_split(const Polynomial& p) {
  if (p.center() != cplx(0.0, 0.0)) throw InvalidArgument("parity split needs a polynomial centred at 0");
  const auto& b = p.scaled_coefficients();
  const double s = p.scale();
  std::vector<cplx> even, odd;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (k % 2 == 0) {
      even.push_back(b[k]);
    } else {
      odd.push_back(b[k] / s);
    }
  }
  if (even.empty()) even.push_back(0.0);
  if (odd.empty()) odd.push_back(0.0);
  return {Polynomial(0.0, s * s, std::move(even)), Polynomial(0.0, s * s, std::move(odd))};
}

TransformCheck change_of_variables_check(const Target& f, const Domain& domain, const Weight& w,
                                         const BranchSpec& spec, const QuadOptions& opts) {
  std::vector<SingularPoint> sing = f.singularities;
  for (const auto& sp : singular_points(w)) sing.push_back(sp);
  const auto kinks = kink_curves(w);
  ProbeSet probes;
  probes.count = 1;
  probes.eval = [&](cplx z, double* out) { out[0] = std::norm(f(z)) * density(w, z); };
  const QuadratureGrid grid = build_grid(domain, sing, kinks, probes, opts);
  if (!grid.converged) {
    throw ToleranceNotMet("change of variables: quadrature did not converge", grid.probe_values[0],
                          grid.probe_errors[0]);
  }
  TransformCheck r;
  r.lhs = apply_rule_real(grid, [&](cplx z) { return std::norm(f(z)) * density(w, z); });
  r.rhs = apply_rule_real(grid, [&](cplx z) {
    const cplx u = branch_sqrt(spec, z);
    const cplx z2 = u * u;
    return 4.0 * std::norm(f(z2) * u) * density(w, z2) / (4.0 * std::norm(u));
  });
  r.discrepancy = std::abs(r.lhs - r.rhs);
  r.err = grid.probe_errors[0] + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(r.lhs);
  return r;
}

TransformCheck inverse_sqrt_identity_check(const Polynomial& rp, const Domain& domain, const Weight& w,
                                           const BranchSpec& spec, const QuadOptions& opts) {
  std::vector<SingularPoint> sing{{0.0, 1.0}};
  for (const auto& sp : singular_points(w)) sing.push_back(sp);
  const auto kinks = kink_curves(w);
  auto direct = [&](cplx z) { return std::norm(1.0 / branch_sqrt(spec, z) - rp(z)) * density(w, z); };
  auto transformed = [&](cplx z) {
    return std::norm(1.0 - branch_sqrt(spec, z) * rp(z)) * density(w, z) / std::abs(z);
  };
  ProbeSet probes;
  probes.count = 2;
  probes.eval = [&](cplx z, double* out) {
    out[0] = direct(z);
    out[1] = transformed(z);
  };
  const QuadratureGrid grid = build_grid(domain, sing, kinks, probes, opts);
  if (!grid.converged) {
    throw ToleranceNotMet("identity check: quadrature did not converge", grid.probe_values[0],
                          grid.probe_errors[0]);
  }
  TransformCheck r;
  r.lhs = grid.probe_values[0];
  r.rhs = grid.probe_values[1];
  r.discrepancy = std::abs(r.lhs - r.rhs);
  r.err = grid.probe_errors[0] + grid.probe_errors[1] +
          64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(r.lhs), std::abs(r.rhs));
  return r;
}

CriterionReport moon_density_criterion(const Domain& domain, const Weight& w, const BranchSpec& spec, int max_degree,
                                       const BergmanOptions& opts, std::optional<cplx> hole_point) {
  cplx hole;
  if (domain.is<Moon>()) {
    const Circle& in = domain.as<Moon>().inner;
    if (!(std::abs(in.center) < in.radius)) {
      throw InvalidParameters("the origin must lie strictly inside the inner disc");
    }
    hole = hole_point.value_or(in.center);
  } else if (hole_point) {
    hole = *hole_point;
  } else if (domain.is<ArcRegion>()) {
    bool found = false;
    for (const auto& cc : domain.as<ArcRegion>().cells.front().circles) {
      if (!cc.inside) {
        hole = cc.circle.center;
        found = true;
        break;
      }
    }
    if (!found) throw InvalidArgument("no hole point for this region");
  } else {
    throw InvalidArgument("a hole point is required for this domain");
  }
  if (domain.contains_raw(hole)) throw InvalidParameters("hole point lies in the domain");

  CriterionReport rep;
  rep.hole_point = hole;
  rep.criterion = "polynomials are dense iff 1/sqrt(z) is a limit of polynomials";
  rep.scan = density_scan(make_target("inv-sqrt", spec.direction()), domain, w, max_degree, opts);
  const Target control("pole", [hole](cplx z) { return 1.0 / (z - hole); }, {{hole, 2.0}});
  rep.control = density_scan(control, domain, w, max_degree, opts);
  return rep;
}

Domain thin_moon_region(int k, std::span<const double> alphas) {
  if (k < 1) throw InvalidParameters("stage index must be >= 1");
  if (alphas.size() + 1 < static_cast<std::size_t>(k)) throw InvalidParameters("not enough alpha parameters");
  check_alphas(alphas.first(static_cast<std::size_t>(k - 1)));
  ArcRegion reg;
  for (int j = 1; j <= k; ++j) reg.cells.push_back(stage_cell(j, j == 1 ? 0.0 : alphas[j - 2]));
  reg.pole = 0.0;
  return Domain::arc_region(std::move(reg));
}

Domain thin_moon_strip(int k, double alpha) {
  if (k < 1) throw InvalidParameters("stage index must be >= 1");
  if (!(alpha > 0.0 && alpha < 0.25)) throw InvalidParameters("need 0 < alpha < 1/4");
  const double half = kPi / std::ldexp(1.0, k + 1);
  ArcCell cell;
  cell.circles.push_back({Circle{0.0, 1.0}, true});
  cell.circles.push_back({Circle{alpha, 1.0 - alpha}, false});
  cell.sector = SectorConstraint{-half, half, true};
  ArcRegion reg;
  reg.cells.push_back(std::move(cell));
  reg.pole = 0.0;
  return Domain::arc_region(std::move(reg));
}

ThinMoonStage thin_moon_stage(int k, std::vector<double> alphas) {
  if (k < 1 || alphas.size() != static_cast<std::size_t>(k)) {
    throw InvalidParameters("stage k needs exactly k alpha parameters");
  }
  check_alphas(alphas);
  ThinMoonStage st{k, alphas, thin_moon_region(k, alphas), thin_moon_strip(k, alphas.back())};
  return st;
}

double strip_sup(int k, double alpha, const Polynomial& p, std::size_t samples) {
  const double half = kPi / std::ldexp(1.0, k + 1);
  auto err = [&](cplx z) { return std::norm(1.0 / sqrt_with_cut(z, 0.0) - p(z)); };
  double best = 0.0;
  auto visit = [&](double theta) {
    const double rin = inner_radius(alpha, std::abs(theta));
    for (double r : {rin, 1.0}) best = std::max(best, err(std::polar(r, theta)));
  };
  const std::size_t n = std::max<std::size_t>(samples, 16);
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = half * static_cast<double>(i) / static_cast<double>(n);
    visit(t);
    visit(-t);
  }
  // The two horns pinch at z = 1; cluster samples there.
  for (int e = 1; e <= 60; ++e) {
    const double t = half * std::ldexp(1.0, -e);
    visit(t);
    visit(-t);
  }
  const double rin = inner_radius(alpha, half);
  for (std::size_t i = 0; i <= n / 4; ++i) {
    const double r = rin + (1.0 - rin) * static_cast<double>(i) / static_cast<double>(n / 4);
    best = std::max(best, err(std::polar(r, half)));
    best = std::max(best, err(std::polar(r, -half)));
  }
  return best;
}

StripSearch strip_budget_search(int k, std::span<const double> previous, const Weight& w, int degree,
                                const BergmanOptions& opts) {
  if (previous.size() + 1 != static_cast<std::size_t>(k)) {
    throw InvalidParameters("stage k needs alpha_1 .. alpha_{k-1}");
  }
  if (degree < 0) throw InvalidArgument("degree must be >= 0");
  const Domain region = thin_moon_region(k, previous);
  StripSearch out;
  out.k = k;
  out.degree = degree;
  out.region_budget = std::ldexp(1.0, -(k + 1));
  const ApproximationResult fit = best_poly_approx(make_target("inv-sqrt", cplx(1.0, 0.0)), region, w, degree, opts);
  out.poly = fit.poly;
  out.region_distance_sq = fit.distance * fit.distance;
  out.region_met = out.region_distance_sq < out.region_budget;

  const Target one = make_target("one");
  auto bound_at = [&](double a, double& sup, double& mass) {
    sup = strip_sup(k, a, out.poly);
    mass = weighted_norm_sq(one, thin_moon_strip(k, a), w, opts.quad).value;
    return sup * mass;
  };

  const double upper = previous.empty() ? 0.25 : previous.back();
  double fail = upper;  // alpha known (or assumed) to miss the budget
  double pass = -1.0;
  double sup = 0.0, mass = 0.0;
  double a = 0.5 * upper;
  for (int it = 0; it < 60; ++it) {
    ++out.iterations;
    if (bound_at(a, sup, mass) < out.region_budget) {
      pass = a;
      break;
    }
    fail = a;
    a *= 0.5;
  }
  if (pass < 0.0) {
    out.alpha = a;
    out.strip_sup = sup;
    out.strip_mass = mass;
    out.strip_bound = sup * mass;
    return out;
  }
  // Both factors shrink with alpha, so bisection finds the largest passing value.
  for (int it = 0; it < 30 && fail - pass > 1e-6 * pass; ++it) {
    ++out.iterations;
    const double mid = 0.5 * (pass + fail);
    if (bound_at(mid, sup, mass) < out.region_budget) {
      pass = mid;
    } else {
      fail = mid;
    }
  }
  out.alpha = pass;
  out.strip_bound = bound_at(pass, out.strip_sup, out.strip_mass);
  out.strip_met = true;
  return out;
}

}  // namespace wbl
