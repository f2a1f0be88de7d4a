#include "wbl/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wbl/errors.hpp"

namespace wbl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<cplx> box_corners(const Box& b) {
  return {{b.xmin, b.ymin}, {b.xmin, b.ymax}, {b.xmax, b.ymin}, {b.xmax, b.ymax}};
}

double max_distance(const Box& b, cplx from) {
  double d = 0.0;
  for (cplx c : box_corners(b)) d = std::max(d, std::abs(c - from));
  return d;
}

}  // namespace

Weight::Weight(ImAbsPlusPower w) : v(w) {
  if (!(w.p > 0.0 && w.p < 1.0)) throw InvalidArgument("|Im z| + |z|^p requires 0 < p < 1");
}

Weight::Weight(LogPotential w) : v(std::move(w)) {
  const auto& lp = std::get<LogPotential>(v);
  for (const auto& a : lp.atoms) {
    if (!(a.alpha > 0.0)) throw InvalidArgument("log-potential masses must be positive");
  }
  if (!(lp.offset_bound >= 0.0)) throw InvalidArgument("offset bound must be non-negative");
}

Weight zero_weight() { return Weight{ZeroWeight{}}; }

Weight im_abs_plus_power(double p) { return Weight{ImAbsPlusPower{p}}; }

Weight log_potential(std::vector<LogAtom> atoms, double offset_bound, std::function<double(cplx)> offset) {
  return Weight{LogPotential{std::move(atoms), offset_bound, std::move(offset)}};
}

Weight weight_sum(std::vector<Weight> terms) { return Weight{WeightSum{std::move(terms)}}; }

double evaluate(const Weight& w, cplx z) {
  return std::visit(
      overloaded{
          [](const ZeroWeight&) { return 0.0; },
          [&](const ImAbsPlusPower& t) { return std::abs(z.imag()) + std::pow(std::abs(z), t.p); },
          [&](const LogPotential& t) {
            double acc = 0.0;
            for (const auto& a : t.atoms) {
              const double r = std::abs(z - a.z);
              if (r == 0.0) return -std::numeric_limits<double>::infinity();
              acc += a.alpha * std::log(r);
            }
            if (t.offset) acc += t.offset(z);
            return acc;
          },
          [&](const PolyBump& t) {
            const double x = std::norm(t.poly(z)) - t.threshold;
            return x > 0.0 ? t.scale * x * x : 0.0;
          },
          [&](const WeightSum& t) {
            double acc = 0.0;
            for (const auto& term : t.terms) acc += evaluate(term, z);
            return acc;
          },
      },
      w.v);
}

double density(const Weight& w, cplx z) {
  // Products of distances avoid exp(log) round-off for pure atoms.
  if (const auto* lp = std::get_if<LogPotential>(&w.v)) {
    double acc = 1.0;
    for (const auto& a : lp->atoms) {
      const double r = std::abs(z - a.z);
      if (r == 0.0) return std::numeric_limits<double>::infinity();
      acc *= (a.alpha == 1.0) ? 1.0 / r : std::pow(r, -a.alpha);
    }
    if (lp->offset) acc *= std::exp(-lp->offset(z));
    return acc;
  }
  if (std::holds_alternative<ZeroWeight>(w.v)) return 1.0;
  return std::exp(-evaluate(w, z));
}

double lelong_number(const Weight& w, cplx x) {
  return std::visit(overloaded{
                        [&](const LogPotential& t) {
                          double acc = 0.0;
                          for (const auto& a : t.atoms) {
                            if (a.z == x) acc += a.alpha;
                          }
                          return acc;
                        },
                        [&](const WeightSum& t) {
                          double acc = 0.0;
                          for (const auto& term : t.terms) acc += lelong_number(term, x);
                          return acc;
                        },
                        [](const auto&) { return 0.0; },
                    },
                    w.v);
}

double mass_on_disc(const Weight& w, cplx center, double radius) {
  return std::visit(overloaded{
                        [](const ZeroWeight&) { return 0.0; },
                        [](const ImAbsPlusPower&) -> double {
                          throw UnsupportedMeasure("Riesz measure of |Im z| + |z|^p is not atomic");
                        },
                        [](const PolyBump&) -> double {
                          throw UnsupportedMeasure("Riesz measure of a polynomial bump is not atomic");
                        },
                        [&](const LogPotential& t) {
                          double acc = 0.0;
                          for (const auto& a : t.atoms) {
                            if (std::abs(a.z - center) <= radius) acc += a.alpha;
                          }
                          return acc;
                        },
                        [&](const WeightSum& t) {
                          double acc = 0.0;
                          for (const auto& term : t.terms) acc += mass_on_disc(term, center, radius);
                          return acc;
                        },
                    },
                    w.v);
}

bool satisfies_condition_A(const Weight& w) { return mass_on_disc(w, {0.0, 0.0}, 1.0) < 2.0; }

Weight poly_bump_weight(Polynomial poly, double threshold, double scale) {
  if (!(threshold >= 1.0)) throw InvalidArgument("bump threshold must be at least 1");
  if (!(scale > 0.0)) throw InvalidArgument("bump scale must be positive");
  return Weight{PolyBump{std::move(poly), threshold, scale}};
}

std::optional<double> sup_bound(const Weight& w, const Domain& domain) {
  const Box& box = domain.bounding_box();
  return std::visit(
      overloaded{
          [](const ZeroWeight&) -> std::optional<double> { return 0.0; },
          [&](const ImAbsPlusPower& t) -> std::optional<double> {
            const double ymax = std::max(std::abs(box.ymin), std::abs(box.ymax));
            return ymax + std::pow(max_distance(box, {0.0, 0.0}), t.p);
          },
          [&](const LogPotential& t) -> std::optional<double> {
            if (t.offset && !std::isfinite(t.offset_bound)) return std::nullopt;
            double acc = t.offset_bound;
            for (const auto& a : t.atoms) acc += a.alpha * std::log(max_distance(box, a.z));
            return acc;
          },
          [&](const PolyBump& t) -> std::optional<double> {
            const double umax = max_distance(box, t.poly.center()) / t.poly.scale();
            double bound = 0.0, uk = 1.0;
            for (const auto& c : t.poly.scaled_coefficients()) {
              bound += std::abs(c) * uk;
              uk *= umax;
            }
            const double x = bound * bound - t.threshold;
            return x > 0.0 ? t.scale * x * x : 0.0;
          },
          [&](const WeightSum& t) -> std::optional<double> {
            double acc = 0.0;
            for (const auto& term : t.terms) {
              const auto b = sup_bound(term, domain);
              if (!b) return std::nullopt;
              acc += *b;
            }
            return acc;
          },
      },
      w.v);
}

std::vector<SingularPoint> singular_points(const Weight& w) {
  std::vector<SingularPoint> out;
  std::visit(overloaded{
                 [&](const LogPotential& t) {
                   for (const auto& a : t.atoms) out.push_back({a.z, a.alpha});
                 },
                 [&](const WeightSum& t) {
                   for (const auto& term : t.terms) {
                     auto sub = singular_points(term);
                     out.insert(out.end(), sub.begin(), sub.end());
                   }
                 },
                 [](const auto&) {},
             },
             w.v);
  return out;
}

std::vector<Curve> kink_curves(const Weight& w) {
  std::vector<Curve> out;
  std::visit(overloaded{
                 [&](const ImAbsPlusPower&) { out.emplace_back(Line{{0.0, 0.0}, {1.0, 0.0}}); },
                 [&](const WeightSum& t) {
                   for (const auto& term : t.terms) {
                     auto sub = kink_curves(term);
                     out.insert(out.end(), sub.begin(), sub.end());
                   }
                 },
                 [](const auto&) {},
             },
             w.v);
  return out;
}

}  // namespace wbl
