#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wbl/weights.hpp"

namespace wbl {

/// Pointwise bound |f(z)|^2 <= amplitude * exp(growth * |Im z|).
struct Growth {
  double amplitude = 1.0;
  double growth = 0.0;
};

/// A holomorphic function together with what quadrature needs to know
/// about it: where |f|^2 blows up and how fast it grows.
struct Target {
  std::string tag;
  std::function<cplx(cplx)> f;
  std::vector<SingularPoint> singularities;  // singularities of |f|^2
  std::optional<Growth> growth;

  Target() = default;
  Target(std::string t, std::function<cplx(cplx)> fn, std::vector<SingularPoint> s = {},
         std::optional<Growth> g = std::nullopt)
      : tag(std::move(t)), f(std::move(fn)), singularities(std::move(s)), growth(g) {}
  // NOLINTNEXTLINE(google-explicit-constructor)
  Target(std::function<cplx(cplx)> fn) : tag("custom"), f(std::move(fn)) {}

  cplx operator()(cplx z) const { return f(z); }
};

/// "one", "monomial:k", "pole:a" (a real or "x,y"), "inv-sqrt", "cos-half".
/// inv-sqrt uses the principal branch unless a cut direction is given.
/// Throws InvalidArgument for unknown tags.
Target make_target(const std::string& tag, std::optional<cplx> cut_direction = std::nullopt);

Target polynomial_target(const Polynomial& p);

/// sqrt(z) with arg z taken in (cut_angle, cut_angle + 2 pi).
cplx sqrt_with_cut(cplx z, double cut_angle);

}  // namespace wbl
