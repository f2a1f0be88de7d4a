#include "wbl/target.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wbl/errors.hpp"

namespace wbl {

namespace {

cplx parse_point(const std::string& text) {
  std::istringstream in(text);
  double x = 0.0, y = 0.0;
  char sep = 0;
  if (!(in >> x)) throw InvalidArgument("bad point '" + text + "'");
  if (in >> sep) {
    if (sep != ',' || !(in >> y)) throw InvalidArgument("bad point '" + text + "'");
  }
  in >> std::ws;
  if (!in.eof()) throw InvalidArgument("bad point '" + text + "'");
  return {x, y};
}

}  // namespace

cplx sqrt_with_cut(cplx z, double cut_angle) {
  const cplx rot = std::polar(1.0, -cut_angle);
  cplx w0 = std::sqrt(z * rot);
  // sqrt of the rotated point, taken with argument in (0, pi).
  if (w0.imag() < 0.0 || (w0.imag() == 0.0 && w0.real() < 0.0)) w0 = -w0;
  return w0 * std::polar(1.0, 0.5 * cut_angle);
}

Target make_target(const std::string& tag, std::optional<cplx> cut_direction) {
  if (tag == "one") return {tag, [](cplx) { return cplx{1.0, 0.0}; }};
  if (tag == "cos-half") {
    return {tag, [](cplx z) { return std::cos(0.5 * z); }, {}, Growth{1.0, 1.0}};
  }
  if (tag == "inv-sqrt") {
    if (cut_direction) {
      const double cut = std::arg(*cut_direction);
      return {tag, [cut](cplx z) { return 1.0 / sqrt_with_cut(z, cut); }, {{cplx{0.0, 0.0}, 1.0}}};
    }
    return {tag, [](cplx z) { return 1.0 / std::sqrt(z); }, {{cplx{0.0, 0.0}, 1.0}}};
  }
  if (tag.rfind("monomial:", 0) == 0) {
    int k = -1;
    try {
      std::size_t used = 0;
      k = std::stoi(tag.substr(9), &used);
      if (used != tag.size() - 9) k = -1;
    } catch (...) {
      k = -1;
    }
    if (k < 0) throw InvalidArgument("bad monomial degree in '" + tag + "'");
    return {tag, [k](cplx z) { return std::pow(z, k); }};
  }
  if (tag.rfind("pole:", 0) == 0) {
    const cplx a = parse_point(tag.substr(5));
    return {tag, [a](cplx z) { return 1.0 / (z - a); }, {{a, 2.0}}};
  }
  throw InvalidArgument("unknown target '" + tag + "'");
}

Target polynomial_target(const Polynomial& p) {
  return {"polynomial", [p](cplx z) { return p(z); }};
}

}  // namespace wbl
