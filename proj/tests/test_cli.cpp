#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "wbl/config.hpp"

using namespace wbl;
using namespace wbl::cli;
using nlohmann::json;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wbl_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(WBL_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig config_in(const json& doc, const fs::path& dir) {
  ExperimentConfig cfg = parse_config(doc);
  cfg.out_dir = dir.string();
  return cfg;
}

// Data rows of a CSV with '#' header lines and one column-name line.
std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  bool named = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!named) {
      named = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Parse, Defaults) {
  const ExperimentConfig cfg = parse_config(json::object());
  ASSERT_TRUE(cfg.domain.has_value());
  EXPECT_TRUE(cfg.domain->is<Disc>());
  EXPECT_EQ(cfg.target, "one");
  EXPECT_EQ(cfg.n_max, 20);
  const json r = cfg.resolved();
  EXPECT_TRUE(r.contains("domain"));
  EXPECT_TRUE(r.contains("quad"));
  EXPECT_EQ(parse_config(json::object()).resolved().dump(), r.dump());
}

TEST(Parse, DomainsAndWeights) {
  const json doc = json::parse(R"({
    "domain": {"type": "moon", "outer": {"c": [0, 0], "r": 2}, "inner": {"center": 1.3, "radius": 0.7}},
    "weight": {"type": "sum", "terms": [
      {"type": "im-abs-plus-power", "p": 0.5},
      {"type": "log_potential", "atoms": [{"z": [0.1, 0.2], "alpha": 0.5}, [[0.3, 0], 0.25]]}]},
    "target": "pole:1.3", "n_max": 4, "quad": {"tol": 1e-9, "parallel": false},
    "output": {"dir": "x", "prefix": "run1_"}})");
  const ExperimentConfig cfg = parse_config(doc);
  EXPECT_TRUE(cfg.domain->is<Moon>());
  EXPECT_DOUBLE_EQ(cfg.quad.tol, 1e-9);
  EXPECT_FALSE(cfg.quad.parallel);
  EXPECT_EQ(cfg.prefix, "run1_");
  EXPECT_NEAR(evaluate(cfg.weight, cplx(0.0, 1.0)),
              1.0 + 1.0 + 0.5 * std::log(std::abs(cplx(-0.1, 0.8))) + 0.25 * std::log(std::abs(cplx(-0.3, 1.0))),
              1e-14);

  const Domain s = parse_domain(json::parse(R"({"type": "thin_moon", "k": 2, "alphas": [0.2, 0.1], "part": "strip"})"));
  EXPECT_TRUE(s.contains(std::polar(0.999, 0.3)));
  EXPECT_FALSE(s.contains(0.95));
  EXPECT_TRUE(parse_domain(json::parse(R"({"type": "truncated_plane", "radius": 40})")).contains(cplx(0, 39)));
}

TEST(Parse, Rejects) {
  EXPECT_THROW(parse_config(json::parse(R"({"bogus": 1})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"quad": {"tol": 1e-8, "extra": 2}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"domain": {"type": "disc", "radius": 1, "colour": 3}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"domain": {"type": "square"}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"weight": {"type": "zero", "p": 1}})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"n_max": "ten"})")), ConfigError);
  EXPECT_THROW(parse_config(json::parse(R"({"domain": {"type": "disc", "radius": -1}})")), InvalidArgument);
  try {
    parse_config(json::parse(R"({"bogus": 1})"));
  } catch (const std::exception& e) {
    EXPECT_EQ(exit_code_for(e), 1);
  }
  EXPECT_EQ(exit_code_for(ToleranceNotMet("x", 0.0, 1.0)), 2);
}

TEST(Run, DensityScanMatchesSeries) {
  const fs::path dir = scratch("scan");
  const auto cfg = config_in(json::parse(R"({"target": "pole:2", "n_max": 20, "center": 0, "scale": 1,
                                             "quad": {"tol": 1e-12}})"),
                             dir);
  run("density-scan", cfg);
  const std::string text = slurp(dir / "scan.csv");
  EXPECT_EQ(text.rfind("# config: ", 0), 0u);
  EXPECT_NE(text.find("# quad_rel_error: "), std::string::npos);
  EXPECT_NE(text.find("(heuristic)"), std::string::npos);
  const auto rows = csv_rows(text);
  ASSERT_EQ(rows.size(), 21u);
  for (int n = 0; n <= 20; ++n) {
    double d2 = 0.0;
    for (int k = 200; k > n; --k) d2 += pi / ((k + 1) * std::pow(4.0, k + 1));
    EXPECT_NEAR(rows[n][1], std::sqrt(d2), 1e-6) << n;
  }
  const json j = json::parse(slurp(dir / "scan.json"));
  EXPECT_EQ(j["verdict"], "decaying");
  EXPECT_EQ(j["verdict_kind"], "heuristic");
}

TEST(Run, GramDiagonal) {
  const fs::path dir = scratch("gram");
  const auto cfg = config_in(json::parse(R"({"n_max": 3, "center": 0, "scale": 1})"), dir);
  const json s = run("gram", cfg);
  for (int j = 0; j <= 3; ++j) EXPECT_NEAR(s["diagonal"][j].get<double>(), pi / (j + 1), 1e-8);
  const auto rows = csv_rows(slurp(dir / "gram.csv"));
  ASSERT_EQ(rows.size(), 16u);
  for (const auto& r : rows) {
    const double expect = r[0] == r[1] ? pi / (r[0] + 1) : 0.0;
    EXPECT_NEAR(r[2], expect, 1e-8);
    EXPECT_NEAR(r[3], 0.0, 1e-8);
  }
}

TEST(Run, GramMonteCarloIsSeeded) {
  const fs::path dir = scratch("mc");
  auto cfg = config_in(json::parse(R"({"n_max": 2, "center": 0, "scale": 1, "mc_samples": 200000, "seed": 5})"), dir);
  const json a = run("gram", cfg);
  const json b = run("gram", cfg);
  EXPECT_EQ(a["monte_carlo"].dump(), b["monte_carlo"].dump());
  for (int j = 0; j <= 2; ++j) {
    const double est = a["monte_carlo"]["diagonal"][j], se = a["monte_carlo"]["stderr"][j];
    EXPECT_NEAR(est, pi / (j + 1), 5 * se);
  }
}

TEST(Run, Certify) {
  const fs::path dir = scratch("certify");
  auto cfg = config_in(json::object(), dir);
  cfg.p = 0.5;
  cfg.M = 10.0;
  const json s = run("certify", cfg);
  EXPECT_NEAR(s["C_1"].get<double>(), 2.7302201500693456, 1e-14);
  EXPECT_NEAR(s["C_p"].get<double>(), 2.8284271247461901, 1e-15);
  EXPECT_EQ(s["checks"]["poisson"]["violations"], 0);
  EXPECT_GT(s["checks"]["gap_min"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(dir / "certificate.json"));
}

TEST(Run, OtherSubcommands) {
  const fs::path dir = scratch("others");
  const json moon = json::parse(R"({"type": "moon", "outer": {"center": 0, "radius": 1},
                                    "inner": {"center": 0.45, "radius": 0.55}})");
  {
    json doc = {{"domain", moon}, {"n_max", 6}};
    const json s = run("moon-criterion", config_in(doc, dir));
    EXPECT_EQ(s["distances"].size(), 7u);
    EXPECT_TRUE(s.contains("control"));
    EXPECT_TRUE(s.contains("criterion"));
  }
  {
    json doc = {{"samples", 20}};
    const json s = run("poisson-check", config_in(doc, dir));
    EXPECT_EQ(s["violations"], 0);
  }
  {
    json doc = json::parse(R"({"potential": {"alphas": [1.0], "points": [0]}})");
    const json s = run("potential-check", config_in(doc, dir));
    EXPECT_NEAR(s["integral"].get<double>(), 2 * pi, 1e-7);
  }
  {
    json doc = json::parse(R"({"stage": {"k": 1, "alphas": [], "degree": 4}})");
    const json s = run("moon-stage", config_in(doc, dir));
    EXPECT_TRUE(s["strip_met"].get<bool>());
  }
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string text = slurp(e.path());
    if (e.path().extension() == ".json") {
      const json j = json::parse(text);
      EXPECT_TRUE(j.contains("config")) << e.path();
      EXPECT_TRUE(j.contains("quad_tol")) << e.path();
    }
  }
  EXPECT_THROW(run("potential-check", config_in(json::object(), dir)), ConfigError);
  EXPECT_THROW(run("nope", config_in(json::object(), dir)), ConfigError);
}

TEST(Run, BitIdenticalReruns) {
  const json doc = json::parse(R"({
    "domain": {"type": "moon", "outer": {"center": 0, "radius": 2}, "inner": {"center": 1.3, "radius": 0.7}},
    "weight": {"type": "log_potential", "atoms": [{"z": -0.5, "alpha": 0.7}]},
    "target": "pole:1.3", "n_max": 8})");
  // The output directory is part of the embedded config, so rerun in place.
  const fs::path dir = scratch("rerun");
  std::map<std::string, std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    run("density-scan", config_in(doc, dir));
    run("gram", config_in(doc, dir));
    for (const char* f : {"scan.csv", "scan.json", "gram.csv", "gram.json"}) {
      if (pass == 0) {
        first[f] = slurp(dir / f);
      } else {
        EXPECT_EQ(slurp(dir / f), first[f]) << f;
      }
    }
  }
}

TEST(Binary, ExitCodes) {
  const fs::path dir = scratch("binary");
  std::ofstream(dir / "ok.json") << R"({"target": "pole:2", "n_max": 5})";
  std::ofstream(dir / "bad.json") << R"({"target": "pole:2", "unknown": true})";
  std::ofstream(dir / "tight.json") << R"({"n_max": 3, "quad": {"tol": 1e-15, "max_cells": 10}})";
  std::ofstream(dir / "plateau.json")
      << R"({"domain": {"type": "moon", "outer": {"center": 0, "radius": 2}, "inner": {"center": 1.3, "radius": 0.7}},
             "target": "pole:1.3", "n_max": 6})";
  const std::string out = " --out " + dir.string();
  EXPECT_EQ(run_binary("--config " + (dir / "ok.json").string() + out + " density-scan"), 0);
  EXPECT_EQ(run_binary("density-scan --config " + (dir / "ok.json").string() + out), 0);
  EXPECT_EQ(run_binary("--config " + (dir / "bad.json").string() + out + " density-scan"), 1);
  EXPECT_EQ(run_binary("--config " + (dir / "tight.json").string() + out + " gram"), 2);
  EXPECT_EQ(run_binary("--config " + (dir / "plateau.json").string() + out + " density-scan"), 0);
  EXPECT_EQ(run_binary("--config /nonexistent.json density-scan"), 1);
  EXPECT_EQ(run_binary("frobnicate"), 1);
  EXPECT_EQ(run_binary(out + " certify --p 0.5 --M 10"), 0);
  EXPECT_EQ(run_binary(out + " certify --p 1.5 --M 10"), 1);
  const json c = json::parse(slurp(dir / "certificate.json"));
  EXPECT_NEAR(c["C_1"].get<double>(), 2.7302201500693456, 1e-14);
}
