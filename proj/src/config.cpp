#include "wbl/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "wbl/bergman.hpp"
#include "wbl/certs.hpp"
#include "wbl/moon.hpp"
#include "wbl/target.hpp"

namespace wbl::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown field '" + key + "'");
  }
}

double get_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

cplx to_complex(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(where + ": expected a number or [re, im]");
}

json from_complex(cplx z) { return json::array({z.real(), z.imag()}); }

std::vector<double> to_doubles(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + ": expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

// Circles accept {"center", "radius"} or the short form {"c", "r"}.
Circle parse_circle(const json& rec, const std::string& where) {
  check_keys(rec, {"center", "radius", "c", "r"}, where);
  const char* ck = rec.contains("c") ? "c" : "center";
  const char* rk = rec.contains("r") ? "r" : "radius";
  if (!rec.contains(ck)) throw ConfigError(where + ": missing 'center'");
  return {to_complex(rec.at(ck), where + ".center"), get_number(rec, rk, where)};
}

std::string type_of(const json& rec, const std::string& where) {
  if (!rec.is_object() || !rec.contains("type") || !rec.at("type").is_string()) {
    throw ConfigError(where + ": needs a string 'type'");
  }
  std::string t = rec.at("type").get<std::string>();
  std::replace(t.begin(), t.end(), '-', '_');
  return t;
}

BergmanOptions bergman_options(const ExperimentConfig& cfg) {
  BergmanOptions o;
  o.quad = cfg.quad;
  o.center = cfg.center;
  o.scale = cfg.scale;
  return o;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::filesystem::path artifact(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir / (cfg.prefix + name);
}

std::string csv_header(const json& config, const json& extra) {
  std::ostringstream s;
  s << "# config: " << config.dump() << '\n';
  for (const auto& [key, value] : extra.items()) s << "# " << key << ": " << value.dump() << '\n';
  return s.str();
}

json scan_json(const ScanResult& scan) {
  return {{"distances", scan.distances},
          {"err_budgets", scan.budgets},
          {"cond_estimates", scan.conds},
          {"verdict", to_string(scan.verdict)},
          {"verdict_kind", "heuristic"},
          {"center", from_complex(scan.center)},
          {"scale", scan.scale},
          {"target_norm", scan.target_norm},
          {"quad_rel_error", scan.quad_rel_error},
          {"ill_conditioned", scan.ill_conditioned}};
}

const Domain& need_domain(const ExperimentConfig& cfg) { return *cfg.domain; }

// Uniform doubles in [0, 1) from the raw 64-bit stream, identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

json run_gram(const ExperimentConfig& cfg, const json& config) {
  const Domain& dom = need_domain(cfg);
  const GramMatrix gm = gram_matrix(dom, cfg.weight, cfg.n_max, bergman_options(cfg));
  const Eigen::MatrixXcd g = monomial_gram(gm);
  json diag = json::array();
  for (Eigen::Index j = 0; j < g.rows(); ++j) diag.push_back(g(j, j).real());
  json summary = {{"config", config},
                  {"subcommand", "gram"}, {"quad_tol", cfg.quad.tol},
                  {"degree", gm.degree},
                  {"center", from_complex(gm.center)},
                  {"scale", gm.scale},
                  {"cond_estimate", gm.cond},
                  {"ill_conditioned", gm.ill_conditioned},
                  {"positive_definite", gm.positive_definite},
                  {"quad_rel_error", gm.quad_rel_error},
                  {"diagonal", diag}};
  if (cfg.mc_samples > 0) {
    // Plain Monte Carlo over the bounding box, an independent cross-check of the diagonal.
    std::mt19937_64 rng(cfg.seed);
    const Box& b = dom.bounding_box();
    const double box_area = (b.xmax - b.xmin) * (b.ymax - b.ymin);
    const auto n = static_cast<Eigen::Index>(g.rows());
    std::vector<double> sum(static_cast<std::size_t>(n), 0.0), sum2(static_cast<std::size_t>(n), 0.0);
    for (std::size_t i = 0; i < cfg.mc_samples; ++i) {
      const cplx z(b.xmin + (b.xmax - b.xmin) * unit(rng), b.ymin + (b.ymax - b.ymin) * unit(rng));
      if (!dom.contains_raw(z)) continue;
      const double e = density(cfg.weight, z);
      double pw = 1.0;
      const double r2 = std::norm(z - gm.center);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double v = pw * e;
        sum[static_cast<std::size_t>(j)] += v;
        sum2[static_cast<std::size_t>(j)] += v * v;
        pw *= r2;
      }
    }
    json est = json::array(), se = json::array();
    const double m = static_cast<double>(cfg.mc_samples);
    for (std::size_t j = 0; j < sum.size(); ++j) {
      const double mean = sum[j] / m;
      const double var = std::max(0.0, sum2[j] / m - mean * mean);
      est.push_back(box_area * mean);
      se.push_back(box_area * std::sqrt(var / m));
    }
    summary["monte_carlo"] = {{"seed", cfg.seed}, {"samples", cfg.mc_samples}, {"diagonal", est}, {"stderr", se}};
  }

  std::ostringstream csv;
  csv.precision(17);
  csv << csv_header(config, {{"center", from_complex(gm.center)},
                             {"cond_estimate", gm.cond},
                             {"quad_rel_error", gm.quad_rel_error},
                             {"quad_tol", cfg.quad.tol}});
  csv << "j,k,re,im\n";
  for (Eigen::Index j = 0; j < g.rows(); ++j) {
    for (Eigen::Index k = 0; k < g.cols(); ++k) {
      csv << j << ',' << k << ',' << g(j, k).real() << ',' << g(j, k).imag() << '\n';
    }
  }
  write_text(artifact(cfg, "gram.csv"), csv.str());
  write_text(artifact(cfg, "gram.json"), summary.dump(2) + "\n");
  return summary;
}

json run_scan(const ExperimentConfig& cfg, const json& config) {
  const Target f = make_target(cfg.target, cfg.cut_direction);
  const ScanResult scan = density_scan(f, need_domain(cfg), cfg.weight, cfg.n_max, bergman_options(cfg));
  json summary = scan_json(scan);
  summary["config"] = config;
  summary["subcommand"] = "density-scan";
  summary["quad_tol"] = cfg.quad.tol;
  summary["target"] = cfg.target;
  std::ostringstream csv;
  csv << csv_header(config, {{"verdict", to_string(scan.verdict) + " (heuristic)"},
                             {"quad_rel_error", scan.quad_rel_error},
                             {"quad_tol", cfg.quad.tol}});
  write_scan_csv(csv, scan);
  write_text(artifact(cfg, "scan.csv"), csv.str());
  write_text(artifact(cfg, "scan.json"), summary.dump(2) + "\n");
  return summary;
}

json run_criterion(const ExperimentConfig& cfg, const json& config) {
  const Domain& dom = need_domain(cfg);
  const BranchSpec spec = BranchSpec::make(dom, cfg.cut_direction);
  const CriterionReport rep =
      moon_density_criterion(dom, cfg.weight, spec, cfg.n_max, bergman_options(cfg), cfg.hole_point);
  json control = scan_json(rep.control);
  control["hole_point"] = from_complex(rep.hole_point);
  json summary = scan_json(rep.scan);
  summary["config"] = config;
  summary["subcommand"] = "moon-criterion";
  summary["quad_tol"] = cfg.quad.tol;
  summary["cut_direction"] = from_complex(spec.direction());
  summary["control"] = control;
  summary["criterion"] = rep.criterion;
  write_text(artifact(cfg, "criterion.json"), summary.dump(2) + "\n");
  return summary;
}

json run_certify(const ExperimentConfig& cfg, const json& config) {
  const double p = cfg.p.value_or(0.5);
  json summary = {{"config", config}, {"subcommand", "certify"}, {"quad_tol", cfg.quad.tol}};
  double m;
  if (cfg.M) {
    m = *cfg.M;
  } else {
    const NormEnclosure enc = cos_half_norm_enclosure(p, cfg.enclosure_radius, cfg.quad);
    m = 1.0 + enc.upper;
    summary["enclosure"] = {{"radius", enc.radius}, {"truncated_sq", enc.truncated_sq}, {"err", enc.err},
                            {"tail", enc.tail},     {"lower", enc.lower},               {"upper", enc.upper}};
  }
  const NonDensityCertificate c = nondensity_certificate(p, m);
  const auto samples = log_spaced_half_plane(cfg.samples);
  const PoissonReport pr = poisson_bounds_check(p, samples);
  const double alpha[] = {1.0};
  const cplx origin[] = {cplx(0.0, 0.0)};
  const PotentialBound pb = potential_mass_bound(alpha, origin, Domain::disc(0.0, 1.0), cfg.quad);
  summary["p"] = c.p;
  summary["M"] = c.M;
  summary["C_p"] = c.C_p;
  summary["C_1"] = c.C_1;
  summary["r_star"] = c.r_star;
  summary["Y"] = c.Y;
  summary["epsilon0_sq"] = c.epsilon0_sq;
  summary["log_epsilon0_sq"] = c.log_epsilon0_sq;
  summary["checks"] = {
      {"gap_samples", c.gap_samples},
      {"gap_min", c.gap_min},
      {"poisson",
       {{"samples", pr.samples},
        {"violations", pr.violations},
        {"min_lower_ratio", pr.min_lower_ratio},
        {"max_upper_ratio", pr.max_upper_ratio}}},
      {"potential",
       {{"integral", pb.integral}, {"err", pb.err}, {"lebesgue_bound", pb.lebesgue_bound},
        {"area_bound", pb.area_bound}}}};
  write_text(artifact(cfg, "certificate.json"), summary.dump(2) + "\n");
  return summary;
}

json run_poisson(const ExperimentConfig& cfg, const json& config) {
  const double p = cfg.p.value_or(0.5);
  const auto samples = log_spaced_half_plane(cfg.samples);
  const PoissonReport pr = poisson_bounds_check(p, samples);
  json summary = {{"config", config},
                  {"subcommand", "poisson-check"}, {"quad_tol", cfg.quad.tol},
                  {"p", p},
                  {"C_p", cp_constant(p)},
                  {"samples", pr.samples},
                  {"violations", pr.violations},
                  {"min_lower_ratio", pr.min_lower_ratio},
                  {"tightest_lower", from_complex(pr.tightest_lower)},
                  {"max_upper_ratio", pr.max_upper_ratio},
                  {"tightest_upper", from_complex(pr.tightest_upper)},
                  {"U_0_1", poisson_extension(p, 0.0, 1.0)},
                  {"poisson_rel_tol", 1e-10}};
  write_text(artifact(cfg, "poisson.json"), summary.dump(2) + "\n");
  return summary;
}

json run_potential(const ExperimentConfig& cfg, const json& config) {
  if (!cfg.potential) throw ConfigError("potential-check needs a 'potential' record");
  const PotentialBound pb = potential_mass_bound(cfg.potential->alphas, cfg.potential->points, need_domain(cfg),
                                                 cfg.quad);
  json summary = {{"config", config},       {"subcommand", "potential-check"}, {"quad_tol", cfg.quad.tol},
                  {"integral", pb.integral}, {"err", pb.err},
                  {"radius", pb.radius},     {"alpha", pb.alpha},
                  {"area_bound", pb.area_bound}, {"lebesgue_bound", pb.lebesgue_bound}};
  write_text(artifact(cfg, "potential.json"), summary.dump(2) + "\n");
  return summary;
}

json run_stage(const ExperimentConfig& cfg, const json& config) {
  if (!cfg.stage) throw ConfigError("moon-stage needs a 'stage' record");
  const StageSpec& st = *cfg.stage;
  BergmanOptions opts = bergman_options(cfg);
  const StripSearch s = strip_budget_search(st.k, st.alphas, cfg.weight, st.degree, opts);
  std::vector<double> alphas = st.alphas;
  alphas.push_back(s.alpha);
  json summary = {{"config", config},
                  {"subcommand", "moon-stage"}, {"quad_tol", cfg.quad.tol},
                  {"k", s.k},
                  {"degree", s.degree},
                  {"alphas", alphas},
                  {"alpha_k", s.alpha},
                  {"region_distance_sq", s.region_distance_sq},
                  {"region_budget", s.region_budget},
                  {"region_met", s.region_met},
                  {"strip_sup", s.strip_sup},
                  {"strip_mass", s.strip_mass},
                  {"strip_bound", s.strip_bound},
                  {"strip_met", s.strip_met},
                  {"iterations", s.iterations}};
  write_text(artifact(cfg, "stage.json"), summary.dump(2) + "\n");
  return summary;
}

}  // namespace

Domain parse_domain(const json& rec) {
  const std::string where = "domain";
  const std::string type = type_of(rec, where);
  if (type == "disc") {
    check_keys(rec, {"type", "center", "radius", "c", "r"}, where);
    json circle = rec;
    circle.erase("type");
    if (!circle.contains("c") && !circle.contains("center")) circle["center"] = 0.0;
    const Circle c = parse_circle(circle, where);
    return Domain::disc(c.center, c.radius);
  }
  if (type == "moon") {
    check_keys(rec, {"type", "outer", "inner"}, where);
    if (!rec.contains("outer") || !rec.contains("inner")) throw ConfigError(where + ": needs 'outer' and 'inner'");
    return Domain::moon(parse_circle(rec.at("outer"), where + ".outer"), parse_circle(rec.at("inner"), where + ".inner"));
  }
  if (type == "truncated_plane") {
    check_keys(rec, {"type", "radius"}, where);
    return Domain::truncated_plane(get_number(rec, "radius", where));
  }
  if (type == "thin_moon") {
    check_keys(rec, {"type", "k", "alphas", "part"}, where);
    if (!rec.contains("k")) throw ConfigError(where + ": missing 'k'");
    const int k = get_int(rec, "k", where);
    const std::vector<double> alphas =
        rec.contains("alphas") ? to_doubles(rec.at("alphas"), where + ".alphas") : std::vector<double>{};
    const std::string part = rec.value("part", std::string("region"));
    if (part == "region") return thin_moon_region(k, alphas);
    if (part == "strip") return thin_moon_stage(k, alphas).strip;
    throw ConfigError(where + ": 'part' must be region or strip");
  }
  if (type == "arc_region") {
    check_keys(rec, {"type", "cells", "pole"}, where);
    ArcRegion reg;
    if (rec.contains("pole")) reg.pole = to_complex(rec.at("pole"), where + ".pole");
    if (!rec.contains("cells") || !rec.at("cells").is_array()) throw ConfigError(where + ": needs 'cells'");
    for (const auto& c : rec.at("cells")) {
      check_keys(c, {"circles", "sector"}, where + ".cells");
      ArcCell cell;
      if (c.contains("circles")) {
        for (const auto& cc : c.at("circles")) {
          check_keys(cc, {"center", "radius", "inside"}, where + ".circles");
          const Circle circ{to_complex(cc.at("center"), where + ".circles"), get_number(cc, "radius", where)};
          cell.circles.push_back({circ, cc.value("inside", true)});
        }
      }
      if (c.contains("sector")) {
        const json& s = c.at("sector");
        check_keys(s, {"lo", "hi", "closed"}, where + ".sector");
        cell.sector = SectorConstraint{get_number(s, "lo", where), get_number(s, "hi", where), s.value("closed", false)};
      }
      reg.cells.push_back(std::move(cell));
    }
    return Domain::arc_region(std::move(reg));
  }
  throw ConfigError(where + ": unknown type '" + type + "'");
}

Weight parse_weight(const json& rec) {
  const std::string where = "weight";
  const std::string type = type_of(rec, where);
  if (type == "zero") {
    check_keys(rec, {"type"}, where);
    return zero_weight();
  }
  if (type == "im_abs_plus_power") {
    check_keys(rec, {"type", "p"}, where);
    return im_abs_plus_power(get_number(rec, "p", where));
  }
  if (type == "log_potential") {
    check_keys(rec, {"type", "atoms"}, where);
    std::vector<LogAtom> atoms;
    if (!rec.contains("atoms") || !rec.at("atoms").is_array()) throw ConfigError(where + ": needs 'atoms'");
    for (const auto& a : rec.at("atoms")) {
      // [z, alpha] pairs or {"z", "alpha"} objects.
      if (a.is_array() && a.size() == 2 && a[1].is_number()) {
        atoms.push_back({to_complex(a[0], where + ".atoms.z"), a[1].get<double>()});
        continue;
      }
      check_keys(a, {"z", "alpha"}, where + ".atoms");
      if (!a.contains("z")) throw ConfigError(where + ".atoms: missing 'z'");
      atoms.push_back({to_complex(a.at("z"), where + ".atoms.z"), get_number(a, "alpha", where + ".atoms")});
    }
    return log_potential(std::move(atoms));
  }
  if (type == "poly_bump") {
    check_keys(rec, {"type", "center", "coefficients", "threshold", "scale"}, where);
    const cplx c = rec.contains("center") ? to_complex(rec.at("center"), where + ".center") : cplx{};
    std::vector<cplx> coeffs;
    if (!rec.contains("coefficients") || !rec.at("coefficients").is_array()) {
      throw ConfigError(where + ": needs 'coefficients'");
    }
    for (const auto& x : rec.at("coefficients")) coeffs.push_back(to_complex(x, where + ".coefficients"));
    return poly_bump_weight(Polynomial::from_taylor(c, coeffs), get_number(rec, "threshold", where),
                            get_number(rec, "scale", where));
  }
  if (type == "sum") {
    check_keys(rec, {"type", "terms"}, where);
    std::vector<Weight> terms;
    if (!rec.contains("terms") || !rec.at("terms").is_array()) throw ConfigError(where + ": needs 'terms'");
    for (const auto& t : rec.at("terms")) terms.push_back(parse_weight(t));
    return weight_sum(std::move(terms));
  }
  throw ConfigError(where + ": unknown type '" + type + "'");
}

ExperimentConfig parse_config(const json& doc) {
  try {
    check_keys(doc, {"domain", "weight", "target", "center", "scale", "n_max", "quad", "p", "M", "enclosure_radius",
                     "samples", "cut_direction", "hole_point", "potential", "stage", "seed", "mc_samples", "output"},
               "config");
    ExperimentConfig cfg;
    cfg.domain_record = doc.value("domain", json{{"type", "disc"}, {"center", {0.0, 0.0}}, {"radius", 1.0}});
    cfg.weight_record = doc.value("weight", json{{"type", "zero"}});
    cfg.domain = parse_domain(cfg.domain_record);
    cfg.weight = parse_weight(cfg.weight_record);
    if (doc.contains("target")) {
      if (!doc.at("target").is_string()) throw ConfigError("config: 'target' must be a string");
      cfg.target = doc.at("target").get<std::string>();
      (void)make_target(cfg.target);
    }
    if (doc.contains("center")) cfg.center = to_complex(doc.at("center"), "center");
    if (doc.contains("scale")) {
      cfg.scale = get_number(doc, "scale", "config");
      if (!(*cfg.scale > 0.0)) throw ConfigError("config: 'scale' must be positive");
    }
    if (doc.contains("n_max")) {
      cfg.n_max = get_int(doc, "n_max", "config");
      if (cfg.n_max < 0) throw ConfigError("config: 'n_max' must be >= 0");
    }
    if (doc.contains("quad")) {
      const json& q = doc.at("quad");
      check_keys(q, {"tol", "rule_order", "max_cells", "max_panel_width", "max_radial_level", "parallel"}, "quad");
      if (q.contains("tol")) cfg.quad.tol = get_number(q, "tol", "quad");
      if (q.contains("rule_order")) cfg.quad.rule_order = get_int(q, "rule_order", "quad");
      if (q.contains("max_cells")) cfg.quad.max_cells = static_cast<std::size_t>(get_int(q, "max_cells", "quad"));
      if (q.contains("max_panel_width")) cfg.quad.max_panel_width = get_number(q, "max_panel_width", "quad");
      if (q.contains("max_radial_level")) cfg.quad.max_radial_level = get_int(q, "max_radial_level", "quad");
      if (q.contains("parallel")) cfg.quad.parallel = q.at("parallel").get<bool>();
      if (!(cfg.quad.tol > 0.0) || cfg.quad.rule_order < 1 || cfg.quad.max_cells < 1) {
        throw ConfigError("quad: tol, rule_order and max_cells must be positive");
      }
    }
    if (doc.contains("p")) cfg.p = get_number(doc, "p", "config");
    if (doc.contains("M")) cfg.M = get_number(doc, "M", "config");
    if (doc.contains("enclosure_radius")) cfg.enclosure_radius = get_number(doc, "enclosure_radius", "config");
    if (doc.contains("samples")) {
      const int n = get_int(doc, "samples", "config");
      if (n < 1) throw ConfigError("config: 'samples' must be positive");
      cfg.samples = static_cast<std::size_t>(n);
    }
    if (doc.contains("cut_direction")) cfg.cut_direction = to_complex(doc.at("cut_direction"), "cut_direction");
    if (doc.contains("hole_point")) cfg.hole_point = to_complex(doc.at("hole_point"), "hole_point");
    if (doc.contains("potential")) {
      const json& r = doc.at("potential");
      check_keys(r, {"alphas", "points"}, "potential");
      PotentialSpec ps;
      ps.alphas = to_doubles(r.at("alphas"), "potential.alphas");
      for (const auto& z : r.at("points")) ps.points.push_back(to_complex(z, "potential.points"));
      cfg.potential = std::move(ps);
    }
    if (doc.contains("stage")) {
      const json& r = doc.at("stage");
      check_keys(r, {"k", "alphas", "degree"}, "stage");
      StageSpec st;
      st.k = get_int(r, "k", "stage");
      if (r.contains("alphas")) st.alphas = to_doubles(r.at("alphas"), "stage.alphas");
      if (r.contains("degree")) st.degree = get_int(r, "degree", "stage");
      cfg.stage = std::move(st);
    }
    if (doc.contains("seed")) {
      if (!doc.at("seed").is_number_unsigned()) throw ConfigError("config: 'seed' must be a non-negative integer");
      cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("mc_samples")) {
      const int n = get_int(doc, "mc_samples", "config");
      if (n < 0) throw ConfigError("config: 'mc_samples' must be >= 0");
      cfg.mc_samples = static_cast<std::size_t>(n);
    }
    if (doc.contains("output")) {
      const json& o = doc.at("output");
      check_keys(o, {"dir", "prefix"}, "output");
      cfg.out_dir = o.value("dir", cfg.out_dir);
      cfg.prefix = o.value("prefix", cfg.prefix);
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return parse_config(doc);
}

json ExperimentConfig::resolved() const {
  json j = {{"domain", domain_record},
            {"weight", weight_record},
            {"target", target},
            {"n_max", n_max},
            {"quad",
             {{"tol", quad.tol},
              {"rule_order", quad.rule_order},
              {"max_cells", quad.max_cells},
              {"max_panel_width", quad.max_panel_width},
              {"max_radial_level", quad.max_radial_level},
              {"parallel", quad.parallel}}},
            {"center", from_complex(center.value_or(default_center(*domain)))},
            {"scale", scale.value_or(default_scale(*domain))},
            {"p", p ? json(*p) : json(nullptr)},
            {"M", M ? json(*M) : json(nullptr)},
            {"enclosure_radius", enclosure_radius},
            {"samples", samples},
            {"seed", seed},
            {"mc_samples", mc_samples},
            {"output", {{"dir", out_dir}, {"prefix", prefix}}}};
  if (cut_direction) j["cut_direction"] = from_complex(*cut_direction);
  if (hole_point) j["hole_point"] = from_complex(*hole_point);
  if (potential) {
    json pts = json::array();
    for (cplx z : potential->points) pts.push_back(from_complex(z));
    j["potential"] = {{"alphas", potential->alphas}, {"points", pts}};
  }
  if (stage) j["stage"] = {{"k", stage->k}, {"alphas", stage->alphas}, {"degree", stage->degree}};
  return j;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"gram",          "density-scan",    "moon-criterion", "certify",
                                              "poisson-check", "potential-check", "moon-stage"};
  return names;
}

json run(const std::string& subcommand, const ExperimentConfig& cfg) {
  const json config = cfg.resolved();
  if (subcommand == "gram") return run_gram(cfg, config);
  if (subcommand == "density-scan") return run_scan(cfg, config);
  if (subcommand == "moon-criterion") return run_criterion(cfg, config);
  if (subcommand == "certify") return run_certify(cfg, config);
  if (subcommand == "poisson-check") return run_poisson(cfg, config);
  if (subcommand == "potential-check") return run_potential(cfg, config);
  if (subcommand == "moon-stage") return run_stage(cfg, config);
  throw ConfigError("unknown subcommand '" + subcommand + "'");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const InvalidParameters*>(&e) ||
      dynamic_cast<const OutOfRange*>(&e) || dynamic_cast<const TangencyNotFound*>(&e) ||
      dynamic_cast<const CutIntersectsDomain*>(&e) || dynamic_cast<const MassTooLarge*>(&e) ||
      dynamic_cast<const DegenerateWeight*>(&e) || dynamic_cast<const UnsupportedMeasure*>(&e) ||
      dynamic_cast<const UnsupportedGrowth*>(&e) || dynamic_cast<const nlohmann::json::exception*>(&e)) {
    return 1;
  }
  return 2;
}

}  // namespace wbl::cli
