// Closed-form constructors for extended-linear splittings: the kick
// weights depend linearly on the drift weights except through a single
// factor C2 that is a nonlinear function of the whole drift set.
//
// Three kinds are covered:
//   velocity  - t_1 = 0, C2 = -1/(2 phi),  phi  = 1 - sum t_i^3     (e_TTV = 0)
//   position  - v_1 = 0, C2 = -1/(2 phi'), phi' = sqrt(1 - sum v_i^3)
//   linear    - C2 = -1/2 exactly, v_i = (t_i + t_{i+1})/2

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splitgen/split_coefficients.hpp"

namespace splitgen {

enum class FamilyKind { velocity, position, linear };

struct ExtendedLinearParams {
  FamilyKind kind = FamilyKind::velocity;
  double c2 = 0.0;       // uniform nonlinear proportionality factor
  double c1 = 0.0;       // 1/2 - c2
  double phi = 0.0;      // phi (velocity/linear) or phi' (position)
  double delta_g = 0.0;  // cube sum of t (velocity/linear) or v (position)
};

struct ConstructedSet {
  SplitCoefficients coefficients;
  ErrorCoefficients errors;
  std::optional<ExtendedLinearParams> params;
};

/// Kick weights of the general extended-linear map at a given C2:
/// v_1 = 1/2 + C2 (1 - t_2), v_N = 1/2 + C2 (1 - t_N),
/// v_i = -C2 (t_i + t_{i+1}) otherwise. Requires t_1 = 0.
std::vector<double> extended_linear_kicks(std::span<const double> t, double c2);

/// Velocity-type set from the interior drift weights (full list is
/// (0, t_interior) and must sum to 1). e_TV = e_TTV = 0 by construction;
/// e_VTV = -(1/24)(1/phi - 1). Rejects sum != 1 and phi <= 0.
ConstructedSet velocity_from_t(std::span<const double> t_interior);

/// Position-type set from the interior kick weights (full list is
/// (0, v_interior) and must sum to 1). Arrangement is v_first;
/// e_VTV = -(1/12)(1 - phi'). Rejects sum != 1 and 1 - delta_g' <= 0.
ConstructedSet position_from_v(std::span<const double> v_interior);

/// Linear (C2 = -1/2) set: v_i = (t_i + t_{i+1})/2 with t_{N+1} = 0.
/// Requires t_1 = 0; sum t_i = 1 is not required. When the sum is 1,
/// e_TTV = 2 e_VTV = delta_g / 12.
ConstructedSet linear_from_t(std::span<const double> t);

enum class Family {
  minimal_velocity,      // (N)
  minimal_position,      // (N)
  alg_4bda,              // (t2)
  alg_4acb,              // (v2)
  nine_stage_velocity,   // (t2)
  nine_stage_position,   // (v2)
  eleven_stage_velocity, // (t2, t3)
  eleven_stage_position, // (v2, v3)
  forest_ruth,           // ()
  generalized_fr_even,   // (alpha_2 .. alpha_k), alpha_2 = 1
  generalized_fr_odd,    // (alpha_2 .. alpha_k), alpha_2 = 1, k > 2
};

struct FamilySpec {
  Family family = Family::forest_ruth;
  std::vector<double> parameters;
};

/// Builds the named family; throws std::domain_error on parameters outside
/// the family domain (singular or complex coefficients) and
/// std::invalid_argument on arity violations.
ConstructedSet make_family(const FamilySpec& spec);

/// Name-based access used by the CLI and file formats. Canonical names:
/// minimal-velocity, minimal-position, 4bda, 4acb, nine-stage-velocity,
/// nine-stage-position, eleven-stage-velocity, eleven-stage-position,
/// forest-ruth, generalized-fr-even, generalized-fr-odd. Aliases 4a, 4b,
/// 4c, 4d bind the defining parameters; leapfrog is the two-stage linear
/// set. Unknown names throw std::invalid_argument.
ConstructedSet make_named_family(const std::string& name,
                                 std::span<const double> parameters);

std::vector<std::string> builtin_family_names();

struct PositivityReport {
  std::vector<std::size_t> negative_t;  // 0-based indices
  std::vector<std::size_t> negative_v;
  bool forward = false;
  // Goldman-Kaper corollary, evaluated for linear-kind sets with
  // delta_g = 0: some t_k < 0 has an adjacent negative kick weight.
  std::optional<bool> goldman_kaper;
};

PositivityReport positivity_report(const SplitCoefficients& c);

}  // namespace splitgen
