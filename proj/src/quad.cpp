#include "wbl/quad.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "wbl/errors.hpp"
#include "wbl/gauss.hpp"
#include "wbl/kernels.hpp"

namespace wbl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kRingDepth = 34;  // dyadic rings for singularities of unknown order

struct OriginData {
  cplx o;
  std::optional<double> order;  // 0 for a plain polar centre; empty when unknown
  std::vector<Curve> curves;
  Rule1D jacobi;
};

struct Context {
  const Domain* domain = nullptr;
  const ProbeSet* probes = nullptr;
  std::vector<OriginData> origins;
  std::vector<int> group;
  int ngroups = 0;
  int order = 8;
  double diag = 1.0;
  int max_level = 10;
};

struct PanelSums {
  std::vector<double> value;
  std::vector<double> l1;
};

struct PanelState {
  Panel panel;
  std::vector<double> q0, e_theta, e_radial, l1;
  bool dirty = true;
  bool frozen = false;
};

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

double distance_to_curve(const Curve& c, cplx z) {
  if (const auto* ci = std::get_if<Circle>(&c)) return std::abs(std::abs(z - ci->center) - ci->radius);
  if (const auto* l = std::get_if<Line>(&c)) {
    return std::abs((std::conj(l->direction) * (z - l->point)).imag());
  }
  const auto& r = std::get<Ray>(c);
  const cplx rel = std::conj(r.direction) * (z - r.origin);
  return rel.real() <= 0.0 ? std::abs(z - r.origin) : std::abs(rel.imag());
}

bool in_cell(const Context& c, std::size_t i, cplx z) {
  const double di = std::norm(z - c.origins[i].o);
  for (std::size_t j = 0; j < c.origins.size(); ++j) {
    if (j == i) continue;
    const double dj = std::norm(z - c.origins[j].o);
    if (dj < di || (dj == di && j < i)) return false;
  }
  return true;
}

struct Piece {
  double a, b;
};

void ray_pieces(const Context& c, std::size_t i, cplx dir, std::vector<double>& ts, std::vector<Piece>& out) {
  const OriginData& od = c.origins[i];
  ts.clear();
  ts.push_back(0.0);
  for (const auto& curve : od.curves) ray_crossings(curve, od.o, dir, ts);
  std::sort(ts.begin(), ts.end());
  const double eps = 1e-13 * c.diag;
  std::size_t m = 1;
  for (std::size_t k = 1; k < ts.size(); ++k) {
    if (ts[k] - ts[m - 1] > eps) ts[m++] = ts[k];
  }
  ts.resize(m);
  out.clear();
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const cplx mid = od.o + 0.5 * (ts[k] + ts[k + 1]) * dir;
    if (c.domain->contains_raw(mid) && in_cell(c, i, mid)) out.push_back({ts[k], ts[k + 1]});
  }
}

struct NodeBuffer {
  std::vector<cplx> z;
  std::vector<double> w;
  std::vector<double> f;  // count values per node
};

void push_node(NodeBuffer& buf, const ProbeSet& probes, cplx z, double w) {
  buf.z.push_back(z);
  buf.w.push_back(w);
  const std::size_t off = buf.f.size();
  buf.f.resize(off + static_cast<std::size_t>(probes.count));
  probes.eval(z, buf.f.data() + off);
}

void gl_interval(NodeBuffer& buf, const Context& c, cplx o, cplx dir, double ra, double rb, double wtheta) {
  const Rule1D& gl = gauss_legendre(c.order);
  const double len = rb - ra;
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double r = ra + len * gl.nodes[j];
    push_node(buf, *c.probes, o + r * dir, wtheta * len * gl.weights[j] * r);
  }
}

// Nodes of one ray piece at radial refinement level `level`.
void piece_nodes(NodeBuffer& buf, const Context& c, const OriginData& od, cplx dir, const Piece& pc, double wtheta,
                 int level) {
  if (pc.a > 0.0) {
    const int n = 1 << std::min(level, c.max_level);
    const double h = (pc.b - pc.a) / n;
    for (int k = 0; k < n; ++k) gl_interval(buf, c, od.o, dir, pc.a + k * h, pc.a + (k + 1) * h, wtheta);
    return;
  }
  const double b = pc.b;
  std::vector<double> br;
  const int uniform = 1 << level;
  for (int j = 1; j < uniform; ++j) br.push_back(static_cast<double>(j) / uniform);
  br.push_back(1.0);

  if (od.order) {
    for (int k = 1; k <= 2 * level; ++k) br.push_back(std::ldexp(1.0, -k));
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    const double alpha = *od.order;
    const double r1 = b * br.front();
    for (std::size_t j = 0; j < od.jacobi.nodes.size(); ++j) {
      const double x = od.jacobi.nodes[j];
      const double sing = alpha == 0.0 ? 1.0 : std::pow(x, alpha);
      push_node(buf, *c.probes, od.o + r1 * x * dir, wtheta * r1 * r1 * od.jacobi.weights[j] * sing);
    }
    for (std::size_t k = 0; k + 1 < br.size(); ++k) gl_interval(buf, c, od.o, dir, b * br[k], b * br[k + 1], wtheta);
    return;
  }

  // Unknown order: dyadic rings, innermost two tracked for the tail.
  for (int k = 1; k <= kRingDepth; ++k) br.push_back(std::ldexp(1.0, -k));
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  const std::size_t start = buf.w.size();
  gl_interval(buf, c, od.o, dir, b * br[0], b * br[1], wtheta);
  const std::size_t mid = buf.w.size();
  gl_interval(buf, c, od.o, dir, b * br[1], b * br[2], wtheta);
  const std::size_t end = buf.w.size();
  auto mass = [&](std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    const auto cnt = static_cast<std::size_t>(c.probes->count);
    for (std::size_t i = lo; i < hi; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < cnt; ++k) s += std::abs(buf.f[i * cnt + k]);
      acc += buf.w[i] * s;
    }
    return acc;
  };
  const double inner = mass(start, mid);
  const double next = mass(mid, end);
  const double q = next > 0.0 ? inner / next : 0.0;
  if (!std::isfinite(q) || q >= 0.999) {
    throw NonIntegrableSingularity("ring contributions do not decay near a singular point");
  }
  const double factor = 1.0 / (1.0 - q);
  for (std::size_t i = start; i < mid; ++i) buf.w[i] *= factor;
  for (std::size_t k = 2; k + 1 < br.size(); ++k) gl_interval(buf, c, od.o, dir, b * br[k], b * br[k + 1], wtheta);
}

void panel_nodes(NodeBuffer& buf, const Context& c, std::size_t origin, double tlo, double thi, int level) {
  const OriginData& od = c.origins[origin];
  const Rule1D& gl = gauss_legendre(c.order);
  std::vector<double> ts;
  std::vector<Piece> pieces;
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double theta = tlo + (thi - tlo) * gl.nodes[j];
    const double wtheta = (thi - tlo) * gl.weights[j];
    const cplx dir = std::polar(1.0, theta);
    ray_pieces(c, origin, dir, ts, pieces);
    for (const auto& pc : pieces) piece_nodes(buf, c, od, dir, pc, wtheta, level);
  }
}

PanelSums panel_sums(const Context& c, std::size_t origin, double tlo, double thi, int level, bool want_l1) {
  NodeBuffer buf;
  panel_nodes(buf, c, origin, tlo, thi, level);
  const auto cnt = static_cast<std::size_t>(c.probes->count);
  PanelSums s;
  s.value.assign(cnt, 0.0);
  if (want_l1) s.l1.assign(static_cast<std::size_t>(c.ngroups), 0.0);
  std::vector<double> gsq(static_cast<std::size_t>(c.ngroups));
  for (std::size_t i = 0; i < buf.w.size(); ++i) {
    const double* f = buf.f.data() + i * cnt;
    for (std::size_t k = 0; k < cnt; ++k) s.value[k] += buf.w[i] * f[k];
    if (want_l1) {
      std::fill(gsq.begin(), gsq.end(), 0.0);
      for (std::size_t k = 0; k < cnt; ++k) gsq[static_cast<std::size_t>(c.group[k])] += f[k] * f[k];
      for (std::size_t g = 0; g < gsq.size(); ++g) s.l1[g] += std::abs(buf.w[i]) * std::sqrt(gsq[g]);
    }
  }
  return s;
}

void evaluate_panel(const Context& c, PanelState& st) {
  const Panel& p = st.panel;
  const double tm = 0.5 * (p.theta_lo + p.theta_hi);
  PanelSums q0 = panel_sums(c, p.origin, p.theta_lo, p.theta_hi, p.radial_level, true);
  PanelSums left = panel_sums(c, p.origin, p.theta_lo, tm, p.radial_level, false);
  PanelSums right = panel_sums(c, p.origin, tm, p.theta_hi, p.radial_level, false);
  const auto cnt = q0.value.size();
  st.q0 = q0.value;
  st.l1 = q0.l1;
  st.e_theta.assign(cnt, 0.0);
  st.e_radial.assign(cnt, 0.0);
  for (std::size_t k = 0; k < cnt; ++k) st.e_theta[k] = std::abs(q0.value[k] - left.value[k] - right.value[k]);
  if (p.radial_level < c.max_level) {
    PanelSums fine = panel_sums(c, p.origin, p.theta_lo, p.theta_hi, p.radial_level + 1, false);
    // |Q_L - Q_{L+1}| only sees (1 - rho) of the level-L error. Non-smooth
    // points (|z|^p weights) converge algebraically, rho = 4^{-(beta+1)};
    // assume rho <= 1/2.
    for (std::size_t k = 0; k < cnt; ++k) st.e_radial[k] = 2.0 * std::abs(q0.value[k] - fine.value[k]);
  }
  st.dirty = false;
}

std::vector<double> critical_angles(const OriginData& od, double diag) {
  std::vector<double> out{0.0};
  const double tol = 1e-12 * diag;
  for (const auto& curve : od.curves) {
    if (const auto* ci = std::get_if<Circle>(&curve)) {
      const cplx rel = ci->center - od.o;
      const double d = std::abs(rel);
      if (d == 0.0) continue;
      const double base = std::arg(rel);
      if (std::abs(d - ci->radius) <= tol) {
        out.push_back(base + 0.5 * std::numbers::pi);
        out.push_back(base - 0.5 * std::numbers::pi);
      } else if (d > ci->radius) {
        const double beta = std::asin(ci->radius / d);
        out.push_back(base + beta);
        out.push_back(base - beta);
      }
      continue;
    }
    cplx point, dir;
    if (const auto* r = std::get_if<Ray>(&curve)) {
      point = r->origin;
      dir = r->direction;
      if (std::abs(point - od.o) > tol) out.push_back(std::arg(point - od.o));
    } else {
      const auto& l = std::get<Line>(curve);
      point = l.point;
      dir = l.direction;
    }
    if (distance_to_curve(Line{point, dir}, od.o) <= tol) {
      out.push_back(std::arg(dir));
      out.push_back(std::arg(-dir));
    }
  }
  std::vector<cplx> pts;
  for (std::size_t a = 0; a < od.curves.size(); ++a) {
    for (std::size_t b = a + 1; b < od.curves.size(); ++b) curve_intersections(od.curves[a], od.curves[b], pts);
  }
  for (cplx p : pts) {
    if (std::abs(p - od.o) > tol) out.push_back(std::arg(p - od.o));
  }
  for (double& t : out) t = wrap_angle(t);
  std::sort(out.begin(), out.end());
  std::vector<double> uniq;
  for (double t : out) {
    if (uniq.empty() || t - uniq.back() > 1e-12) uniq.push_back(t);
  }
  if (uniq.size() > 1 && kTwoPi - uniq.back() + uniq.front() <= 1e-12) uniq.pop_back();
  return uniq;
}

Context make_context(const Domain& domain, std::span<const SingularPoint> singular, std::span<const Curve> kinks,
                     const ProbeSet& probes, const QuadOptions& opts) {
  if (opts.rule_order < 2) throw InvalidArgument("rule order must be at least 2");
  if (!(opts.tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (probes.count < 1 || !probes.eval) throw InvalidArgument("probe set is empty");
  Context c;
  c.domain = &domain;
  c.probes = &probes;
  c.order = opts.rule_order;
  c.diag = domain.bounding_box().diagonal();
  c.max_level = std::clamp(opts.max_radial_level, 0, 20);
  c.group = probes.group;
  if (c.group.empty()) {
    c.group.resize(static_cast<std::size_t>(probes.count));
    std::iota(c.group.begin(), c.group.end(), 0);
  }
  if (c.group.size() != static_cast<std::size_t>(probes.count)) throw InvalidArgument("probe group size mismatch");
  c.ngroups = *std::max_element(c.group.begin(), c.group.end()) + 1;

  const auto pts = relevant_singularities(domain, singular);
  for (const auto& sp : pts) c.origins.push_back({sp.z, sp.order, {}, {}});
  const cplx pc = domain.polar_center();
  const bool covered = std::any_of(c.origins.begin(), c.origins.end(),
                                   [&](const OriginData& od) { return std::abs(od.o - pc) <= 1e-12 * c.diag; });
  if (!covered) c.origins.insert(c.origins.begin(), OriginData{pc, 0.0, {}, {}});

  std::vector<Curve> global = domain.boundary_curves();
  global.insert(global.end(), kinks.begin(), kinks.end());
  for (std::size_t i = 0; i < c.origins.size(); ++i) {
    auto& od = c.origins[i];
    od.curves = global;
    for (std::size_t j = 0; j < c.origins.size(); ++j) {
      if (j == i) continue;
      const cplx d = c.origins[j].o - od.o;
      od.curves.emplace_back(Line{0.5 * (od.o + c.origins[j].o), cplx{0.0, 1.0} * d / std::abs(d)});
    }
    if (od.order) {
      if (*od.order >= 2.0) throw NonIntegrableSingularity("singularity of order >= 2 inside the domain");
      od.jacobi = gauss_jacobi_left(c.order, 1.0 - *od.order);
    }
  }
  return c;
}

void emit(const Context& c, const std::vector<PanelState>& states, QuadratureGrid& grid, bool parallel) {
  std::vector<NodeBuffer> bufs(states.size());
  auto work = [&](std::size_t i) {
    const Panel& p = states[i].panel;
    panel_nodes(bufs[i], c, p.origin, p.theta_lo, p.theta_hi, p.radial_level);
  };
  if (parallel) {
    kernels::parallel_for(states.size(), work);
  } else {
    for (std::size_t i = 0; i < states.size(); ++i) work(i);
  }
  std::size_t total = 0;
  for (const auto& b : bufs) total += b.z.size();
  grid.nodes.reserve(total);
  grid.weights.reserve(total);
  for (const auto& b : bufs) {
    grid.nodes.insert(grid.nodes.end(), b.z.begin(), b.z.end());
    grid.weights.insert(grid.weights.end(), b.w.begin(), b.w.end());
  }
}

}  // namespace

std::vector<SingularPoint> relevant_singularities(const Domain& domain, std::span<const SingularPoint> pts) {
  const double diag = domain.bounding_box().diagonal();
  const auto curves = domain.boundary_curves();
  std::vector<SingularPoint> out;
  for (const auto& sp : pts) {
    bool keep = domain.contains_raw(sp.z);
    if (!keep) {
      for (const auto& cv : curves) {
        if (distance_to_curve(cv, sp.z) <= 1e-9 * diag) {
          // On the closure only if some nearby point is inside.
          for (int k = 0; k < 16 && !keep; ++k) {
            keep = domain.contains_raw(sp.z + 1e-6 * diag * std::polar(1.0, kTwoPi * (k + 0.5) / 16.0));
          }
          break;
        }
      }
    }
    if (!keep) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const SingularPoint& q) { return std::abs(q.z - sp.z) <= 1e-12 * diag; });
    if (it == out.end()) {
      out.push_back(sp);
    } else if (it->order && sp.order) {
      it->order = *it->order + *sp.order;
    } else {
      it->order.reset();
    }
  }
  return out;
}

QuadratureGrid build_grid(const Domain& domain, std::span<const SingularPoint> singular,
                          std::span<const Curve> kinks, const ProbeSet& probes, const QuadOptions& opts) {
  const Context c = make_context(domain, singular, kinks, probes, opts);
  const auto cnt = static_cast<std::size_t>(probes.count);

  std::vector<PanelState> states;
  for (std::size_t i = 0; i < c.origins.size(); ++i) {
    const auto angles = critical_angles(c.origins[i], c.diag);
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double lo = angles[k];
      const double hi = (k + 1 < angles.size()) ? angles[k + 1] : angles[0] + kTwoPi;
      const int parts = std::max(1, static_cast<int>(std::ceil((hi - lo) / opts.max_panel_width - 1e-9)));
      for (int m = 0; m < parts; ++m) {
        PanelState st;
        st.panel = {i, lo + (hi - lo) * m / parts, lo + (hi - lo) * (m + 1) / parts, 0, 0.0};
        states.push_back(std::move(st));
      }
    }
  }

  QuadratureGrid grid;
  grid.tol = opts.tol;
  for (const auto& od : c.origins) grid.origins.push_back(od.o);
  grid.singular_points = relevant_singularities(domain, singular);

  std::vector<double> values(cnt), errors(cnt), scales(static_cast<std::size_t>(c.ngroups));
  while (true) {
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i].dirty) todo.push_back(i);
    }
    auto work = [&](std::size_t t) { evaluate_panel(c, states[todo[t]]); };
    if (opts.parallel) {
      kernels::parallel_for(todo.size(), work);
    } else {
      for (std::size_t t = 0; t < todo.size(); ++t) work(t);
    }

    std::fill(values.begin(), values.end(), 0.0);
    std::fill(errors.begin(), errors.end(), 0.0);
    std::fill(scales.begin(), scales.end(), 0.0);
    for (const auto& st : states) {
      for (std::size_t k = 0; k < cnt; ++k) {
        values[k] += st.q0[k];
        errors[k] += st.e_theta[k] + st.e_radial[k];
      }
      for (std::size_t g = 0; g < scales.size(); ++g) scales[g] += st.l1[g];
    }
    bool done = true;
    for (std::size_t k = 0; k < cnt; ++k) {
      const double s = scales[static_cast<std::size_t>(c.group[k])];
      if (errors[k] > opts.tol * s) done = false;
    }
    grid.converged = done;
    if (done || states.size() >= opts.max_cells) break;

    auto norm_err = [&](const std::vector<double>& e) {
      double acc = 0.0;
      for (std::size_t k = 0; k < cnt; ++k) {
        const double s = scales[static_cast<std::size_t>(c.group[k])];
        if (s > 0.0) acc += e[k] / s;
      }
      return acc;
    };
    std::vector<double> score(states.size());
    double total = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      auto& st = states[i];
      const double et = norm_err(st.e_theta), er = norm_err(st.e_radial);
      st.panel.err = et + er;
      score[i] = st.frozen ? 0.0 : st.panel.err;
      total += score[i];
    }
    if (!(total > 0.0)) break;
    std::vector<std::size_t> order(states.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    std::vector<char> pick(states.size(), 0);
    double acc = 0.0;
    for (std::size_t idx : order) {
      if (acc >= 0.5 * total || score[idx] <= 0.0) break;
      pick[idx] = 1;
      acc += score[idx];
    }

    std::vector<PanelState> next;
    next.reserve(states.size() * 2);
    bool refined = false;
    for (std::size_t i = 0; i < states.size(); ++i) {
      PanelState& st = states[i];
      if (!pick[i]) {
        next.push_back(std::move(st));
        continue;
      }
      const Panel p = st.panel;
      const bool can_theta = (p.theta_hi - p.theta_lo) > 1e-10;
      const bool can_radial = p.radial_level < c.max_level;
      const bool prefer_theta = norm_err(st.e_theta) >= norm_err(st.e_radial);
      if ((prefer_theta && can_theta) || (!can_radial && can_theta)) {
        const double tm = 0.5 * (p.theta_lo + p.theta_hi);
        PanelState a, b;
        a.panel = {p.origin, p.theta_lo, tm, p.radial_level, 0.0};
        b.panel = {p.origin, tm, p.theta_hi, p.radial_level, 0.0};
        next.push_back(std::move(a));
        next.push_back(std::move(b));
        refined = true;
      } else if (can_radial) {
        PanelState a;
        a.panel = {p.origin, p.theta_lo, p.theta_hi, p.radial_level + 1, 0.0};
        next.push_back(std::move(a));
        refined = true;
      } else {
        st.frozen = true;
        next.push_back(std::move(st));
      }
    }
    states = std::move(next);
    if (!refined) break;
  }

  grid.probe_values = values;
  grid.probe_errors = errors;
  grid.probe_scales.resize(cnt);
  grid.rel_error = 0.0;
  for (std::size_t k = 0; k < cnt; ++k) {
    const double s = scales[static_cast<std::size_t>(c.group[k])];
    grid.probe_scales[k] = s;
    if (s > 0.0) grid.rel_error = std::max(grid.rel_error, errors[k] / s);
  }
  grid.panels.reserve(states.size());
  for (const auto& st : states) grid.panels.push_back(st.panel);
  emit(c, states, grid, opts.parallel);
  return grid;
}

cplx apply_rule(const QuadratureGrid& grid, const std::function<cplx(cplx)>& g) {
  std::vector<cplx> v(grid.nodes.size());
  kernels::parallel_for(v.size(), [&](std::size_t i) { v[i] = g(grid.nodes[i]); });
  return kernels::weighted_sum(grid.weights, v);
}

double apply_rule_real(const QuadratureGrid& grid, const std::function<double(cplx)>& g) {
  std::vector<double> v(grid.nodes.size());
  kernels::parallel_for(v.size(), [&](std::size_t i) { v[i] = g(grid.nodes[i]); });
  return kernels::weighted_sum(grid.weights, v);
}

QuadResult integrate(const Domain& domain, const std::function<cplx(cplx)>& g, std::span<const SingularPoint> singular,
                     const QuadOptions& opts) {
  ProbeSet probes;
  probes.count = 2;
  probes.eval = [&](cplx z, double* out) {
    const cplx v = g(z);
    out[0] = v.real();
    out[1] = v.imag();
  };
  probes.group = {0, 0};
  const QuadratureGrid grid = build_grid(domain, singular, {}, probes, opts);
  QuadResult r;
  r.value = {grid.probe_values[0], grid.probe_values[1]};
  r.err = grid.probe_errors[0] + grid.probe_errors[1];
  r.converged = grid.converged;
  r.cells = grid.cells();
  r.nodes = grid.nodes.size();
  if (!grid.converged) throw ToleranceNotMet("integral did not reach tolerance", r.value, r.err);
  return r;
}

QuadResult integrate(const Domain& domain, const std::function<cplx(cplx)>& g, const std::vector<cplx>& singular_points,
                     double tol) {
  std::vector<SingularPoint> sp;
  for (cplx z : singular_points) sp.push_back({z, std::nullopt});
  QuadOptions opts;
  opts.tol = tol;
  return integrate(domain, g, sp, opts);
}

NormResult weighted_norm_sq(const Target& f, const Domain& domain, const Weight& w, const QuadOptions& opts) {
  std::vector<SingularPoint> sing = f.singularities;
  for (const auto& sp : singular_points(w)) sing.push_back(sp);
  const auto kinks = kink_curves(w);
  ProbeSet probes;
  probes.count = 1;
  probes.eval = [&](cplx z, double* out) { out[0] = std::norm(f(z)) * density(w, z); };
  const QuadratureGrid grid = build_grid(domain, sing, kinks, probes, opts);
  NormResult r;
  r.value = grid.probe_values[0];
  r.err = grid.probe_errors[0];
  r.cells = grid.cells();
  if (!grid.converged) throw ToleranceNotMet("weighted norm did not reach tolerance", r.value, r.err);
  if (domain.is<TruncatedPlane>() && f.growth && std::holds_alternative<ImAbsPlusPower>(w.v)) {
    r.tail = truncation_tail(w, domain.as<TruncatedPlane>().radius, f.growth->amplitude, f.growth->growth);
  }
  return r;
}

QuadResult inner_product(const Target& f, const Target& g, const Domain& domain, const Weight& w,
                         const QuadOptions& opts) {
  std::vector<SingularPoint> sing;
  for (const auto* t : {&f, &g}) {
    for (const auto& sp : t->singularities) {
      sing.push_back({sp.z, sp.order ? std::optional<double>(0.5 * *sp.order) : std::nullopt});
    }
  }
  for (const auto& sp : singular_points(w)) sing.push_back(sp);
  const auto kinks = kink_curves(w);
  ProbeSet probes;
  probes.count = 2;
  probes.group = {0, 0};
  probes.eval = [&](cplx z, double* out) {
    const cplx v = f(z) * std::conj(g(z)) * density(w, z);
    out[0] = v.real();
    out[1] = v.imag();
  };
  const QuadratureGrid grid = build_grid(domain, sing, kinks, probes, opts);
  QuadResult r;
  r.value = {grid.probe_values[0], grid.probe_values[1]};
  r.err = grid.probe_errors[0] + grid.probe_errors[1];
  r.converged = grid.converged;
  r.cells = grid.cells();
  r.nodes = grid.nodes.size();
  if (!grid.converged) throw ToleranceNotMet("inner product did not reach tolerance", r.value, r.err);
  return r;
}

double truncation_tail(const Weight& w, double radius, double amplitude, double growth) {
  const auto* iap = std::get_if<ImAbsPlusPower>(&w.v);
  if (iap == nullptr) throw InvalidArgument("truncation tail is defined for |Im z| + |z|^p weights");
  if (growth > 1.0) throw UnsupportedGrowth("growth rate above 1 is not dominated by exp(-|Im z|)");
  if (!(radius >= 0.0)) throw InvalidArgument("truncation radius must be non-negative");
  const double p = iap->p;
  boost::math::quadrature::exp_sinh<double> rule;
  double err = 0.0;
  const double radial = rule.integrate([&](double t) { return (radius + t) * std::exp(-std::pow(radius + t, p)); },
                                       0.0, std::numeric_limits<double>::infinity(), 1e-13, &err);
  if (err > 1e-9 * std::abs(radial) + 1e-300) {
    throw ToleranceNotMet("radial tail integral did not converge", radial, err);
  }
  return amplitude * 2.0 * std::numbers::pi * radial;
}

double domain_area(const Domain& domain, double tol) {
  if (domain.is<Disc>()) return std::numbers::pi * std::pow(domain.as<Disc>().circle.radius, 2);
  if (domain.is<TruncatedPlane>()) return std::numbers::pi * std::pow(domain.as<TruncatedPlane>().radius, 2);
  if (domain.is<Moon>()) {
    const auto& m = domain.as<Moon>();
    return std::numbers::pi * (m.outer.radius * m.outer.radius - m.inner.radius * m.inner.radius);
  }
  ProbeSet probes;
  probes.eval = [](cplx, double* out) { out[0] = 1.0; };
  QuadOptions opts;
  opts.tol = tol;
  return build_grid(domain, {}, {}, probes, opts).probe_values[0];
}

cplx domain_centroid(const Domain& domain, double tol) {
  if (domain.is<Disc>()) return domain.as<Disc>().circle.center;
  if (domain.is<TruncatedPlane>()) return {0.0, 0.0};
  if (domain.is<Moon>()) {
    const auto& m = domain.as<Moon>();
    const double ao = m.outer.radius * m.outer.radius, ai = m.inner.radius * m.inner.radius;
    return (ao * m.outer.center - ai * m.inner.center) / (ao - ai);
  }
  ProbeSet probes;
  probes.count = 3;
  probes.group = {0, 1, 1};
  probes.eval = [](cplx z, double* out) {
    out[0] = 1.0;
    out[1] = z.real();
    out[2] = z.imag();
  };
  QuadOptions opts;
  opts.tol = tol;
  const auto grid = build_grid(domain, {}, {}, probes, opts);
  return cplx{grid.probe_values[1], grid.probe_values[2]} / grid.probe_values[0];
}

}  // namespace wbl
