// Executable symplectic maps for separable classical Hamiltonians
// H = p^2/2 + V(q), including the force-gradient kick that lifts
// gradient-correctable splittings to genuine fourth order.

#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "splitgen/split_coefficients.hpp"

namespace splitgen {

using Vec = std::vector<double>;

struct SplitSystem {
  std::string name;
  int dimension = 1;
  // Advances positions under the kinetic flow (q += tau p for unit mass).
  std::function<void(Vec& q, const Vec& p, double tau)> drift;
  std::function<Vec(const Vec& q)> kick_force;            // -grad V
  std::function<Vec(const Vec& q)> gradient_force;        // -grad |grad V|^2
  std::function<void(const Vec& q0, const Vec& p0, double time, Vec& q, Vec& p)>
      exact_flow;  // may be empty
  std::function<double(const Vec& q, const Vec& p)> energy;

  bool has_exact_flow() const { return static_cast<bool>(exact_flow); }
};

/// "harmonic" (V = |q|^2/2, any dimension, default 1, exact flow is a
/// rotation) or "kepler2d" (V = -1/|q|, dimension 2).
SplitSystem builtin_system(const std::string& name, int dimension = 0);

enum class Distribution { central, proportional, none };

struct Integrator {
  SplitCoefficients coefficients;
  std::vector<double> gradient_weights;  // aligned with v; sum = -e_VTV
  Distribution distribution = Distribution::none;
  bool forward = false;  // all splitting coefficients nonnegative
};

/// Gradient kick weights for a set with the given e_VTV. central puts the
/// whole weight -e_VTV on the middle nonzero kick (rejects an even nonzero
/// count); proportional assigns c_i proportional to v_i over nonzero kicks.
/// All-zero when |e_VTV| <= 1e-14 or distribution is none.
std::vector<double> gradient_kick_weights(const SplitCoefficients& c, double e_vtv,
                                          Distribution distribution);

/// Requires classify_order(c) >= 3 unless distribution is none.
Integrator make_integrator(const SplitCoefficients& c, Distribution distribution);

/// One step of size eps (negative eps allowed: time reversal). Zero-weight
/// factors are skipped. Throws on non-finite state propagation.
void step(const Integrator& integ, const SplitSystem& sys, Vec& q, Vec& p,
          double eps);

struct ConvergenceReport {
  std::vector<double> step_sizes;     // as run (rounded to divide t_final)
  std::vector<double> global_errors;  // phase-space norm at t_final
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  std::size_t points_in_fit = 0;  // errors below the 1e-13 floor are excluded
};

/// Global error at t_final per step size, against exact_flow when available,
/// otherwise against a self-convergence run at (min eps)/8.
ConvergenceReport convergence_study(const Integrator& integ, const SplitSystem& sys,
                                    const Vec& q0, const Vec& p0, double t_final,
                                    std::span<const double> eps_list);

/// CSV trajectory: header "step,q...,p...,energy_error", one row per step.
void write_trajectory_csv(std::ostream& os, const Integrator& integ,
                          const SplitSystem& sys, Vec q, Vec p, double eps,
                          long steps);

}  // namespace splitgen
