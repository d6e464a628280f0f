// splitgen: construct, check and exercise split-coefficient symplectic
// integrators from the command line.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splitgen/cli.hpp"
#include "splitgen/extended_linear.hpp"

namespace {

struct FlagValues {
  double t2 = 0.0, t3 = 0.0, v2 = 0.0, v3 = 0.0;
  int n = 0;
  std::vector<double> alphas;
};

// Maps per-family flags onto the family's positional parameters.
bool assemble_params(const CLI::App& sub, const std::string& family,
                     const FlagValues& fv, std::vector<double>& params,
                     std::ostream& diag) {
  auto need = [&](const char* flag, double value) {
    if (sub.count(flag) == 0) {
      diag << "error: family '" << family << "' requires " << flag << "\n";
      return false;
    }
    params.push_back(value);
    return true;
  };
  if (family == "4bda" || family == "nine-stage-velocity")
    return need("--t2", fv.t2);
  if (family == "eleven-stage-velocity")
    return need("--t2", fv.t2) && need("--t3", fv.t3);
  if (family == "4acb" || family == "nine-stage-position")
    return need("--v2", fv.v2);
  if (family == "eleven-stage-position")
    return need("--v2", fv.v2) && need("--v3", fv.v3);
  if (family == "minimal-velocity" || family == "minimal-position") {
    if (sub.count("--n") == 0) {
      diag << "error: family '" << family << "' requires --n\n";
      return false;
    }
    params.push_back(static_cast<double>(fv.n));
    return true;
  }
  if (family == "generalized-fr-even" || family == "generalized-fr-odd") {
    if (sub.count("--alphas") == 0) {
      diag << "error: family '" << family << "' requires --alphas (alpha_2 = 1 first)\n";
      return false;
    }
    params = fv.alphas;
    return true;
  }
  return true;  // fixed-parameter aliases take nothing
}

void add_family_flags(CLI::App* sub, splitgen::CommandConfig& cfg, FlagValues& fv) {
  sub->add_option("--family", cfg.family, "family name (see `splitgen list`)")
      ->required();
  sub->add_option("--t2", fv.t2, "free drift weight t2");
  sub->add_option("--t3", fv.t3, "free drift weight t3");
  sub->add_option("--v2", fv.v2, "free kick weight v2");
  sub->add_option("--v3", fv.v3, "free kick weight v3");
  sub->add_option("--n", fv.n, "stage-count parameter N for the minimal families");
  sub->add_option("--alphas", fv.alphas,
                  "alpha_2..alpha_k for the generalized Forest-Ruth families");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"split-coefficient symplectic integrator kit"};
  app.require_subcommand(1);

  splitgen::CommandConfig cfg;
  FlagValues fv;

  CLI::App* gen = app.add_subcommand("gen", "write a coefficient JSON file");
  add_family_flags(gen, cfg, fv);
  gen->add_option("-o,--output", cfg.output, "output path (default stdout)");

  CLI::App* check = app.add_subcommand("check", "verify a coefficient JSON file");
  check->add_option("file", cfg.input_file, "coefficient JSON file")->required();
  check->add_flag("--oracle", cfg.oracle,
                  "also extract the error coefficients numerically");
  check->add_option("--seed", cfg.seed, "matrix-pair seed")
      ->envname("SPLITGEN_SEED");
  check->add_option("--tol", cfg.tolerance, "verification tolerance");

  CLI::App* converge = app.add_subcommand("converge", "run a convergence study");
  add_family_flags(converge, cfg, fv);
  converge->add_option("--system", cfg.system, "harmonic or kepler2d");
  converge->add_option("--eps-min", cfg.eps_min, "smallest step size");
  converge->add_option("--eps-max", cfg.eps_max, "largest step size");
  converge->add_option("--eps-count", cfg.eps_count, "grid size");
  converge->add_option("--gradient", cfg.gradient,
                       "force-gradient distribution: central, proportional, none");
  converge->add_option("-o,--output", cfg.output, "output CSV path (default stdout)");

  CLI::App* figure = app.add_subcommand("figure", "emit figure data as CSV");
  figure->add_option("which", cfg.figure, "fig1 (velocity) or fig2 (position)")
      ->required();
  figure->add_option("--overlay", cfg.overlay_file,
                     "JSON file with externally published coefficient points");
  figure->add_option("-o,--output", cfg.output, "output CSV path (default stdout)");

  CLI::App* list = app.add_subcommand("list", "list built-in family names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  if (list->parsed()) {
    for (const auto& n : splitgen::builtin_family_names()) std::cout << n << "\n";
    return 0;
  }
  if (gen->parsed() || converge->parsed()) {
    CLI::App* sub = gen->parsed() ? gen : converge;
    if (!assemble_params(*sub, cfg.family, fv, cfg.family_params, std::cerr))
      return 2;
  }

  if (gen->parsed()) return splitgen::cmd_gen(cfg, std::cout, std::cerr);
  if (check->parsed()) return splitgen::cmd_check(cfg, std::cout, std::cerr);
  if (converge->parsed()) return splitgen::cmd_converge(cfg, std::cout, std::cerr);
  return splitgen::cmd_figure(cfg, std::cout, std::cerr);
}
