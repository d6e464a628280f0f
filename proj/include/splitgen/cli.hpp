// Command implementations behind the splitgen tool: generate coefficient
// files, check/classify them, run convergence studies, and emit the data
// behind the coefficient-comparison figures.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/domain error.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace splitgen {

struct CommandConfig {
  std::string family;
  std::vector<double> family_params;
  std::string system = "harmonic";
  double eps_min = 1e-3;
  double eps_max = 1e-1;
  int eps_count = 7;
  std::string gradient = "none";  // central | proportional | none
  bool oracle = false;
  std::uint64_t seed = 20240817;
  std::string output;      // empty or "-": write to the provided stream
  std::string input_file;  // check: coefficient JSON to verify
  std::string figure;      // figure: fig1 | fig2
  std::string overlay_file;  // figure: optional OMF point data (JSON)
  double tolerance = 1e-12;
};

int cmd_gen(const CommandConfig& cfg, std::ostream& out, std::ostream& diag);
int cmd_check(const CommandConfig& cfg, std::ostream& out, std::ostream& diag);
int cmd_converge(const CommandConfig& cfg, std::ostream& out, std::ostream& diag);
int cmd_figure(const CommandConfig& cfg, std::ostream& out, std::ostream& diag);

/// Shortest round-trip decimal form of a binary64 value.
std::string format_double(double x);

}  // namespace splitgen
