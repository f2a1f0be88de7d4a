#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "wbl/geometry.hpp"
#include "wbl/polynomial.hpp"

namespace wbl {

/// A point where an integrand blows up like |z - z0|^{-order}. An empty
/// order means "unknown"; quadrature then falls back to dyadic rings.
struct SingularPoint {
  cplx z;
  std::optional<double> order;
};

struct ZeroWeight {};

/// |Im z| + |z|^p with 0 < p < 1.
struct ImAbsPlusPower {
  double p = 0.5;
};

struct LogAtom {
  cplx z;
  double alpha = 0.0;
};

/// sum_i alpha_i log|z - z_i| + h(z), where |h| <= offset_bound on the working domain.
struct LogPotential {
  std::vector<LogAtom> atoms;
  double offset_bound = 0.0;
  std::function<double(cplx)> offset;  // empty means h = 0
};

/// L * max(0, |P(z)|^2 - threshold)^2.
struct PolyBump {
  Polynomial poly;
  double threshold = 1.0;
  double scale = 1.0;
};

struct Weight;

struct WeightSum {
  std::vector<Weight> terms;
};

struct Weight {
  using Variant = std::variant<ZeroWeight, ImAbsPlusPower, LogPotential, PolyBump, WeightSum>;
  Variant v;

  Weight() : v(ZeroWeight{}) {}
  Weight(ZeroWeight w) : v(w) {}
  Weight(ImAbsPlusPower w);
  Weight(LogPotential w);
  Weight(PolyBump w) : v(std::move(w)) {}
  Weight(WeightSum w) : v(std::move(w)) {}
};

Weight zero_weight();
Weight im_abs_plus_power(double p);
Weight log_potential(std::vector<LogAtom> atoms, double offset_bound = 0.0,
                     std::function<double(cplx)> offset = {});
Weight weight_sum(std::vector<Weight> terms);

/// phi(z); -infinity exactly at log-potential atoms.
double evaluate(const Weight& w, cplx z);

/// exp(-phi(z)), +infinity at atoms.
double density(const Weight& w, cplx z);

double lelong_number(const Weight& w, cplx x);

/// Riesz mass of the closed disc. Throws UnsupportedMeasure for
/// weights whose measure is not atomic.
double mass_on_disc(const Weight& w, cplx center, double radius);

bool satisfies_condition_A(const Weight& w);

/// Throws InvalidArgument for threshold < 1 or non-positive L.
Weight poly_bump_weight(Polynomial poly, double threshold, double scale);

/// Upper bound for sup phi over the domain's bounding box.
std::optional<double> sup_bound(const Weight& w, const Domain& domain);

/// Atoms of the weight as singularities of exp(-phi).
std::vector<SingularPoint> singular_points(const Weight& w);

/// Curves along which phi is not smooth (the real axis for |Im z|).
std::vector<Curve> kink_curves(const Weight& w);

}  // namespace wbl
