// Split (factorization) coefficient sets for products of exponentials
// approximating exp(eps (T+V)), and the leading coefficients of their
// BCH error expansion.

#pragma once

#include <span>
#include <string>
#include <vector>

namespace splitgen {

// Whether the product reads prod_i e^{t_i eps T} e^{v_i eps V} (t_first)
// or prod_i e^{v_i eps V} e^{t_i eps T} (v_first).
enum class Arrangement { t_first, v_first };

struct SplitCoefficients {
  std::string name;
  Arrangement arrangement = Arrangement::t_first;
  std::vector<double> t;
  std::vector<double> v;

  std::size_t size() const { return t.size(); }
};

// s_i = t_1 + ... + t_i (s_0 = 0), u_i = v_i + ... + v_N (u_{N+1} = 0).
struct PrefixSums {
  std::vector<double> s;  // s[i] = s_i for i = 0..N
  std::vector<double> u;  // u[i] = u_{i+1} for i = 0..N

  double s_at(std::size_t i) const { return s[i]; }      // s_i, 0 <= i <= N
  double u_at(std::size_t i) const { return u[i - 1]; }  // u_i, 1 <= i <= N+1
};

// Coefficients of T, V, [T,V], [T,[T,V]], [V,[T,V]] in the exponent of
// the product form.
struct ErrorCoefficients {
  double e_t = 0.0;
  double e_v = 0.0;
  double e_tv = 0.0;
  double e_ttv = 0.0;
  double e_vtv = 0.0;
};

enum class OpKind { drift, kick };

struct Factor {
  OpKind kind;
  double weight;
};

/// Validates the paired-list shape (equal lengths, N >= 1); throws
/// std::invalid_argument otherwise.
void validate_shape(const SplitCoefficients& c);

PrefixSums prefix_suffix_sums(const SplitCoefficients& c);

/// Rewrites a v_first set as the equivalent t_first set: the index shift
/// v' = (v_2,...,v_N, 0) when v_1 = 0, otherwise the padded form
/// t' = (0, t...), v' = (v..., 0). t_first input is returned unchanged.
SplitCoefficients to_t_first(const SplitCoefficients& c);

ErrorCoefficients error_coefficients(const SplitCoefficients& c);

/// delta g = sum_i t_i^3.
double delta_g(std::span<const double> t);

/// g = sum_i s_i s_{i-1} t_i, the singularity-free explicit form; equals
/// (1 - delta_g)/3 when sum t_i = 1. Throws std::domain_error when the
/// precondition sum t_i = 1 is violated (tolerance 1e-9).
double g_sum(std::span<const double> t);

/// Operator sequence with zero-weight factors dropped and adjacent
/// same-operator factors merged. Weights below drop_tol in magnitude count
/// as zero (closed-form constructions leave roundoff-size residues where a
/// weight vanishes analytically).
std::vector<Factor> effective_factors(const SplitCoefficients& c,
                                      double drop_tol = 1e-14);

/// True when the effective operator sequence is left-right symmetric
/// (time-reversible composition).
bool is_palindromic(const SplitCoefficients& c, double tol = 1e-12);

/// Largest order in {0,...,4} whose conditions hold within tol.
/// Left-right symmetric sets with e_TV = e_TTV = 0 but e_VTV != 0 report 3:
/// they reach order 4 only with the force-gradient kick attached (stepper),
/// and e_VTV stays exposed to the caller for that purpose.
int classify_order(const SplitCoefficients& c, double tol = 1e-12);

}  // namespace splitgen
