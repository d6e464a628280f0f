#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "splitgen/cli.hpp"

using namespace splitgen;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string diag;
};

Run run_gen(CommandConfig cfg) {
  std::ostringstream out, diag;
  Run r;
  r.code = cmd_gen(cfg, out, diag);
  r.out = out.str();
  r.diag = diag.str();
  return r;
}

Run run_check(CommandConfig cfg) {
  std::ostringstream out, diag;
  Run r;
  r.code = cmd_check(cfg, out, diag);
  r.out = out.str();
  r.diag = diag.str();
  return r;
}

Run run_converge(CommandConfig cfg) {
  std::ostringstream out, diag;
  Run r;
  r.code = cmd_converge(cfg, out, diag);
  r.out = out.str();
  r.diag = diag.str();
  return r;
}

Run run_figure(CommandConfig cfg) {
  std::ostringstream out, diag;
  Run r;
  r.code = cmd_figure(cfg, out, diag);
  r.out = out.str();
  r.diag = diag.str();
  return r;
}

fs::path temp_file(const std::string& stem) {
  return fs::temp_directory_path() / ("splitgen_test_" + stem + ".json");
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST_CASE("gen emits the 4A coefficient document") {
  CommandConfig cfg;
  cfg.family = "4a";
  const Run r = run_gen(cfg);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("name") == "4a");
  CHECK(j.at("arrangement") == "t_first");
  REQUIRE(j.at("t").size() == 3);
  CHECK(j.at("t")[0].get<double>() == 0.0);
  CHECK(j.at("t")[1].get<double>() == 0.5);
  CHECK(j.at("v")[0].get<double>() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(j.at("v")[1].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(j.at("e_vtv").get<double>() == doctest::Approx(-1.0 / 72.0).epsilon(1e-14));
  CHECK(j.at("positivity").at("forward") == true);
}

TEST_CASE("gen writes the exact forest-ruth drift weight") {
  CommandConfig cfg;
  cfg.family = "forest-ruth";
  const Run r = run_gen(cfg);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  // 1/(2 - 2^(1/3)) at binary64
  CHECK(j.at("t")[1].get<double>() == 1.3512071919596578);
}

TEST_CASE("gen flags non-forward parameter choices without rejecting them") {
  CommandConfig cfg;
  cfg.family = "4bda";
  cfg.family_params = {0.9};  // v_1 = 1/2 - 1/(12*0.9*0.1) < 0
  const Run r = run_gen(cfg);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("positivity").at("forward") == false);
  CHECK(!j.at("positivity").at("negative_v").empty());
  CHECK(r.diag.find("not forward") != std::string::npos);
}

TEST_CASE("gen rejects unknown families and domain violations with exit 2") {
  CommandConfig cfg;
  cfg.family = "4z";
  CHECK(run_gen(cfg).code == 2);
  cfg.family = "4bda";
  cfg.family_params = {0.0};
  const Run r = run_gen(cfg);
  CHECK(r.code == 2);
  CHECK(r.diag.find("t2") != std::string::npos);
}

TEST_CASE("check confirms generated files and reports the effective order") {
  CommandConfig gen_cfg;
  gen_cfg.family = "4a";
  const Run gen = run_gen(gen_cfg);
  const fs::path file = temp_file("4a");
  write_file(file, gen.out);

  CommandConfig cfg;
  cfg.input_file = file.string();
  const Run r = run_check(cfg);
  CHECK(r.code == 0);
  CHECK(r.out.find("order: 3") != std::string::npos);
  CHECK(r.out.find("effective 4") != std::string::npos);
  CHECK(r.out.find("confirmed") != std::string::npos);
  fs::remove(file);
}

TEST_CASE("check fails corrupted sums with exit 1 naming the constraint") {
  CommandConfig gen_cfg;
  gen_cfg.family = "4a";
  auto j = nlohmann::json::parse(run_gen(gen_cfg).out);
  j["v"][1] = 0.9;  // sum v != 1
  const fs::path file = temp_file("corrupt");
  write_file(file, j.dump());

  CommandConfig cfg;
  cfg.input_file = file.string();
  const Run r = run_check(cfg);
  CHECK(r.code == 1);
  CHECK(r.out.find("sum v_i") != std::string::npos);
  fs::remove(file);
}

TEST_CASE("check exits 2 on unparseable input") {
  const fs::path file = temp_file("broken");
  write_file(file, "{ not json");
  CommandConfig cfg;
  cfg.input_file = file.string();
  CHECK(run_check(cfg).code == 2);
  fs::remove(file);
  cfg.input_file = "/nonexistent/coeffs.json";
  CHECK(run_check(cfg).code == 2);
}

TEST_CASE("check --oracle confirms forest-ruth") {
  CommandConfig gen_cfg;
  gen_cfg.family = "forest-ruth";
  const fs::path file = temp_file("fr");
  write_file(file, run_gen(gen_cfg).out);

  CommandConfig cfg;
  cfg.input_file = file.string();
  cfg.oracle = true;
  cfg.seed = 41;
  const Run r = run_check(cfg);
  CHECK(r.code == 0);
  CHECK(r.out.find("oracle agreement") != std::string::npos);
  CHECK(r.out.find("<= 1e-6") != std::string::npos);
  fs::remove(file);
}

TEST_CASE("converge produces a CSV with a fitted slope footer") {
  CommandConfig cfg;
  cfg.family = "leapfrog";
  cfg.system = "harmonic";
  cfg.eps_min = 1e-2;
  cfg.eps_max = 1e-1;
  cfg.eps_count = 5;
  const Run r = run_converge(cfg);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("eps,global_error") == 0);
  const auto pos = r.out.find("# fitted_slope = ");
  REQUIRE(pos != std::string::npos);
  const double slope = std::stod(r.out.substr(pos + 17));
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));

  // identical config -> byte-identical output
  const Run again = run_converge(cfg);
  CHECK(again.out == r.out);
}

TEST_CASE("converge maps kepler alias and rejects even-kick central gradients") {
  CommandConfig cfg;
  cfg.family = "4d";
  cfg.system = "harmonic";
  cfg.gradient = "central";
  const Run r = run_converge(cfg);
  CHECK(r.code == 2);
  CHECK(r.diag.find("proportional") != std::string::npos);

  cfg.family = "forest-ruth";
  cfg.gradient = "none";
  cfg.system = "kepler";
  cfg.eps_min = 1e-2;
  cfg.eps_max = 1e-1;
  cfg.eps_count = 4;
  CHECK(run_converge(cfg).code == 0);
}

TEST_CASE("figure grids carry the symmetric-point phi values") {
  CommandConfig cfg;
  cfg.figure = "fig1";
  const Run r = run_figure(cfg);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("kind,t2,t3,phi,v1_pred,v2_pred,v1_ref,v2_ref") == 0);
  CHECK(r.out.find("grid,0.25,,0.9375,") != std::string::npos);
  // overlay row predicted from (t2,t3) = (0.2029, 0.1926)
  const auto pos = r.out.find("omf11,0.2029,0.1926,");
  REQUIRE(pos != std::string::npos);
  CHECK(r.out.find("0.0667") != std::string::npos);
  CHECK(r.out.find("0.262") != std::string::npos);

  CommandConfig cfg2;
  cfg2.figure = "fig2";
  const Run r2 = run_figure(cfg2);
  REQUIRE(r2.code == 0);
  CHECK(r2.out.find("grid,0.25,,") != std::string::npos);
  CHECK(r2.out.find("omf11,0.1518,0.2158,") != std::string::npos);

  const Run again = run_figure(cfg);
  CHECK(again.out == r.out);  // determinism
}

TEST_CASE("figure rejects unknown ids") {
  CommandConfig cfg;
  cfg.figure = "fig9";
  const Run r = run_figure(cfg);
  CHECK(r.code == 2);
  CHECK(r.diag.find("fig9") != std::string::npos);
}

TEST_CASE("figure accepts a user overlay file") {
  const fs::path file = temp_file("overlay");
  write_file(file, R"({"fig1_nine_stage":[{"param":0.25,"ref1":0.08,"ref2":0.31}]})");
  CommandConfig cfg;
  cfg.figure = "fig1";
  cfg.overlay_file = file.string();
  const Run r = run_figure(cfg);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("omf9,0.25,,0.9375,") != std::string::npos);
  fs::remove(file);

  cfg.overlay_file = "/nonexistent/overlay.json";
  CHECK(run_figure(cfg).code == 2);
}

TEST_CASE("output files are written when requested") {
  const fs::path file = temp_file("outfile");
  CommandConfig cfg;
  cfg.family = "4a";
  cfg.output = file.string();
  std::ostringstream out, diag;
  REQUIRE(cmd_gen(cfg, out, diag) == 0);
  CHECK(out.str().empty());
  std::ifstream f(file);
  REQUIRE(f.good());
  nlohmann::json j;
  f >> j;
  CHECK(j.at("name") == "4a");
  fs::remove(file);
}
