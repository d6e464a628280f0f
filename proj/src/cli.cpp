#include "splitgen/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "splitgen/bch_oracle.hpp"
#include "splitgen/coefficients_io.hpp"
#include "splitgen/extended_linear.hpp"
#include "splitgen/stepper.hpp"

namespace splitgen {

namespace {

constexpr int kOk = 0;
constexpr int kVerificationFailure = 1;
constexpr int kUsageError = 2;

// Writes either to the given stream (output empty or "-") or to a file.
int with_output(const CommandConfig& cfg, std::ostream& out, std::ostream& diag,
                const std::function<void(std::ostream&)>& writer) {
  if (cfg.output.empty() || cfg.output == "-") {
    writer(out);
    return kOk;
  }
  std::ofstream f(cfg.output);
  if (!f) {
    diag << "error: cannot open output file '" << cfg.output << "'\n";
    return kUsageError;
  }
  writer(f);
  return kOk;
}

Distribution parse_distribution(const std::string& s) {
  if (s == "central") return Distribution::central;
  if (s == "proportional") return Distribution::proportional;
  if (s == "none") return Distribution::none;
  throw std::invalid_argument("gradient must be central, proportional or none");
}

void print_indices(std::ostream& os, const std::vector<std::size_t>& idx) {
  os << "[";
  for (std::size_t i = 0; i < idx.size(); ++i)
    os << (i ? "," : "") << idx[i] + 1;  // 1-based in reports
  os << "]";
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

int cmd_gen(const CommandConfig& cfg, std::ostream& out, std::ostream& diag) {
  ConstructedSet set;
  try {
    set = make_named_family(cfg.family, cfg.family_params);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kUsageError;
  }
  const PositivityReport pos = positivity_report(set.coefficients);
  if (!pos.forward) {
    diag << "note: " << set.coefficients.name << " is not forward; negative t ";
    print_indices(diag, pos.negative_t);
    diag << ", negative v ";
    print_indices(diag, pos.negative_v);
    diag << "\n";
  }

  nlohmann::json j = nlohmann::json::parse(
      to_json_string(CoefficientDocument{set.coefficients, set.errors.e_vtv}));
  j["positivity"] = {{"forward", pos.forward},
                     {"negative_t", pos.negative_t},
                     {"negative_v", pos.negative_v}};
  return with_output(cfg, out, diag,
                     [&](std::ostream& os) { os << j.dump(2) << "\n"; });
}

int cmd_check(const CommandConfig& cfg, std::ostream& out, std::ostream& diag) {
  std::ifstream f(cfg.input_file);
  if (!f) {
    diag << "error: cannot read '" << cfg.input_file << "'\n";
    return kUsageError;
  }
  std::stringstream buf;
  buf << f.rdbuf();

  CoefficientDocument doc;
  try {
    doc = parse_coefficient_json(buf.str());
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kUsageError;
  }

  const SplitCoefficients& c = doc.coefficients;
  const ErrorCoefficients e = error_coefficients(c);
  const int order = classify_order(c, cfg.tolerance);
  const PositivityReport pos = positivity_report(c);
  const bool gradient_correctable =
      order == 3 && std::abs(e.e_vtv) > cfg.tolerance;

  out << "name:        " << c.name << "\n";
  out << "arrangement: "
      << (c.arrangement == Arrangement::t_first ? "t_first" : "v_first") << "\n";
  out << "N:           " << c.size() << "\n";
  out << "e_T   = " << format_double(e.e_t) << "\n";
  out << "e_V   = " << format_double(e.e_v) << "\n";
  out << "e_TV  = " << format_double(e.e_tv) << "\n";
  out << "e_TTV = " << format_double(e.e_ttv) << "\n";
  out << "e_VTV = " << format_double(e.e_vtv) << "\n";
  out << "order: " << order;
  if (gradient_correctable)
    out << " (effective 4 with the force-gradient kick attached)";
  out << "\n";
  out << "forward: " << (pos.forward ? "yes" : "no");
  if (!pos.forward) {
    out << "  negative t ";
    print_indices(out, pos.negative_t);
    out << " v ";
    print_indices(out, pos.negative_v);
  }
  out << "\n";

  std::vector<std::string> violations;
  if (std::abs(e.e_t - 1.0) > cfg.tolerance)
    violations.push_back("sum t_i = " + format_double(e.e_t) + " != 1");
  if (std::abs(e.e_v - 1.0) > cfg.tolerance)
    violations.push_back("sum v_i = " + format_double(e.e_v) + " != 1");
  if (doc.e_vtv && std::abs(*doc.e_vtv - e.e_vtv) > cfg.tolerance)
    violations.push_back("claimed e_VTV = " + format_double(*doc.e_vtv) +
                         " but computed " + format_double(e.e_vtv));

  if (cfg.oracle) {
    const MatrixPair pair = random_matrix_pair(cfg.seed);
    const auto grid = default_epsilon_grid();
    const ExtractionResult ex = extract_error_coefficients(c, pair, grid);
    out << "oracle (seed " << cfg.seed << "): e_TV = " << format_double(ex.e_tv)
        << "  e_TTV = " << format_double(ex.e_ttv)
        << "  e_VTV = " << format_double(ex.e_vtv)
        << "  residual order = " << format_double(ex.residual_order) << "\n";
    const double worst =
        std::max({std::abs(ex.e_tv - e.e_tv), std::abs(ex.e_ttv - e.e_ttv),
                  std::abs(ex.e_vtv - e.e_vtv)});
    out << "oracle agreement: " << format_double(worst)
        << (worst <= 1e-6 ? " (<= 1e-6)" : " (EXCEEDS 1e-6)") << "\n";
    if (worst > 1e-6) violations.push_back("oracle disagreement " + format_double(worst));
    if (!ex.converged) violations.push_back("oracle extrapolation did not converge");
  }

  if (!violations.empty()) {
    for (const auto& v : violations) out << "violated: " << v << "\n";
    return kVerificationFailure;
  }
  out << "confirmed\n";
  return kOk;
}

int cmd_converge(const CommandConfig& cfg, std::ostream& out, std::ostream& diag) {
  ConstructedSet set;
  Integrator integ;
  SplitSystem sys;
  try {
    set = make_named_family(cfg.family, cfg.family_params);
    integ = make_integrator(set.coefficients, parse_distribution(cfg.gradient));
    std::string system = cfg.system;
    if (system == "kepler") system = "kepler2d";
    sys = builtin_system(system);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kUsageError;
  }
  if (!(cfg.eps_min > 0.0) || !(cfg.eps_max > cfg.eps_min) || cfg.eps_count < 2) {
    diag << "error: need 0 < eps-min < eps-max and eps-count >= 2\n";
    return kUsageError;
  }

  std::vector<double> eps(cfg.eps_count);
  const double lf = std::log(cfg.eps_max / cfg.eps_min) / (cfg.eps_count - 1);
  for (int i = 0; i < cfg.eps_count; ++i)
    eps[i] = cfg.eps_max * std::exp(-lf * i);  // decreasing

  Vec q0, p0;
  double t_final;
  if (sys.name == "harmonic") {
    q0 = {1.0};
    p0 = {0.0};
    t_final = 2.0 * std::acos(-1.0);
  } else {
    const double ecc = 0.2;  // one period of a mildly eccentric orbit
    q0 = {1.0 - ecc, 0.0};
    p0 = {0.0, std::sqrt((1.0 + ecc) / (1.0 - ecc))};
    t_final = 2.0 * std::acos(-1.0);
  }

  const ConvergenceReport rep = convergence_study(integ, sys, q0, p0, t_final, eps);
  return with_output(cfg, out, diag, [&](std::ostream& os) {
    os << "eps,global_error\n";
    for (std::size_t i = 0; i < rep.step_sizes.size(); ++i)
      os << format_double(rep.step_sizes[i]) << ","
         << format_double(rep.global_errors[i]) << "\n";
    os << "# family = " << set.coefficients.name << ", system = " << sys.name
       << ", gradient = " << cfg.gradient << "\n";
    os << "# fitted_slope = " << format_double(rep.fitted_slope) << "\n";
    os << "# slope_stderr = " << format_double(rep.slope_stderr) << "\n";
  });
}

namespace {

struct OmfPoint {
  double x1 = 0.0, x2 = 0.0;  // free parameters (t2[,t3] or v2[,v3])
  double ref1 = 0.0, ref2 = 0.0;  // published (v1,v2) or (t1,t2)
};

struct OverlayData {
  std::vector<OmfPoint> fig1_nine_stage;  // (t2) -> (v1, v2); none in this kit
  std::vector<OmfPoint> fig2_nine_stage;  // (v2) -> (t1, t2); none in this kit
  OmfPoint eleven_velocity{0.2029, 0.1926, 0.0667, 0.2620};
  OmfPoint eleven_position{0.1518, 0.2158, 0.0642, 0.1920};
};

OverlayData load_overlay(const std::string& path) {
  OverlayData d;
  if (path.empty()) return d;
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read overlay file '" + path + "'");
  nlohmann::json j;
  f >> j;
  auto read_points = [](const nlohmann::json& arr) {
    std::vector<OmfPoint> pts;
    for (const auto& e : arr) {
      OmfPoint p;
      p.x1 = e.at("param").get<double>();
      p.ref1 = e.at("ref1").get<double>();
      p.ref2 = e.at("ref2").get<double>();
      pts.push_back(p);
    }
    return pts;
  };
  if (j.contains("fig1_nine_stage"))
    d.fig1_nine_stage = read_points(j.at("fig1_nine_stage"));
  if (j.contains("fig2_nine_stage"))
    d.fig2_nine_stage = read_points(j.at("fig2_nine_stage"));
  return d;
}

}  // namespace

int cmd_figure(const CommandConfig& cfg, std::ostream& out, std::ostream& diag) {
  if (cfg.figure != "fig1" && cfg.figure != "fig2") {
    diag << "error: unknown figure id '" << cfg.figure << "' (use fig1 or fig2)\n";
    return kUsageError;
  }
  OverlayData overlay;
  try {
    overlay = load_overlay(cfg.overlay_file);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return kUsageError;
  }

  const bool velocity = cfg.figure == "fig1";
  return with_output(cfg, out, diag, [&](std::ostream& os) {
    if (velocity)
      os << "kind,t2,t3,phi,v1_pred,v2_pred,v1_ref,v2_ref\n";
    else
      os << "kind,v2,v3,phi_prime,t1_pred,t2_pred,t1_ref,t2_ref\n";

    // parameter grid 0.05..0.45 (i/200 keeps the symmetric point 1/4 exact)
    for (int i = 10; i <= 90; ++i) {
      const double x = i / 200.0;
      const ConstructedSet set =
          velocity ? make_family({Family::nine_stage_velocity, {x}})
                   : make_family({Family::nine_stage_position, {x}});
      const auto& p = *set.params;
      const double first = velocity ? set.coefficients.v[0] : set.coefficients.t[0];
      const double second = velocity ? set.coefficients.v[1] : set.coefficients.t[1];
      os << "grid," << format_double(x) << ",," << format_double(p.phi) << ","
         << format_double(first) << "," << format_double(second) << ",,\n";
    }

    const auto& nine = velocity ? overlay.fig1_nine_stage : overlay.fig2_nine_stage;
    for (const OmfPoint& pt : nine) {
      const ConstructedSet set =
          velocity ? make_family({Family::nine_stage_velocity, {pt.x1}})
                   : make_family({Family::nine_stage_position, {pt.x1}});
      const double first = velocity ? set.coefficients.v[0] : set.coefficients.t[0];
      const double second = velocity ? set.coefficients.v[1] : set.coefficients.t[1];
      os << "omf9," << format_double(pt.x1) << ",," << format_double(set.params->phi)
         << "," << format_double(first) << "," << format_double(second) << ","
         << format_double(pt.ref1) << "," << format_double(pt.ref2) << "\n";
    }

    const OmfPoint& e11 = velocity ? overlay.eleven_velocity : overlay.eleven_position;
    const ConstructedSet set =
        velocity ? make_family({Family::eleven_stage_velocity, {e11.x1, e11.x2}})
                 : make_family({Family::eleven_stage_position, {e11.x1, e11.x2}});
    const double first = velocity ? set.coefficients.v[0] : set.coefficients.t[0];
    const double second = velocity ? set.coefficients.v[1] : set.coefficients.t[1];
    os << "omf11," << format_double(e11.x1) << "," << format_double(e11.x2) << ","
       << format_double(set.params->phi) << "," << format_double(first) << ","
       << format_double(second) << "," << format_double(e11.ref1) << ","
       << format_double(e11.ref2) << "\n";
  });
}

}  // namespace splitgen
