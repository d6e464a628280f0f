// Numerical extraction of the leading BCH error coefficients of a
// splitting, by applying it to random non-commuting matrix pairs. Serves
// as an independent check on the closed-form error coefficients and pins
// the sign and scale of the commutator realization used by the stepper.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "splitgen/dense_matrix.hpp"
#include "splitgen/split_coefficients.hpp"

namespace splitgen {

struct MatrixPair {
  Mat t;
  Mat v;
  std::uint64_t seed = 0;
};

/// Random pair with entries uniform in [-1,1]; redraws until [T,V] != 0 and
/// the commutator basis {[T,V], [T,[T,V]], [V,[T,V]]} has Gram condition
/// number below 1e6. Dimension must be >= 3.
MatrixPair random_matrix_pair(std::uint64_t seed, std::size_t dim = 4);

/// Default geometric grid {2^-4, ..., 2^-10}.
std::vector<double> default_epsilon_grid();

/// L(eps) = log(prod_i e^{t_i eps T} e^{v_i eps V}) - eps (T + V), in the
/// arrangement stored in c. Throws on logarithm failure at excessive eps.
Mat product_defect(const SplitCoefficients& c, const MatrixPair& m, double eps);

struct CommutatorProjection {
  double tv = 0.0;   // coefficient of [T,V]
  double ttv = 0.0;  // coefficient of [T,[T,V]]
  double vtv = 0.0;  // coefficient of [V,[T,V]]
  double residual = 0.0;  // Frobenius norm of the out-of-span remainder
};

/// Frobenius least-squares projection onto the commutator basis of `basis`.
/// Throws std::runtime_error when the Gram matrix condition exceeds 1e6.
CommutatorProjection project_onto_commutator_basis(const Mat& l,
                                                   const MatrixPair& basis);

struct ExtractionResult {
  double e_tv = 0.0;
  double e_ttv = 0.0;
  double e_vtv = 0.0;
  double unc_tv = 0.0;  // extrapolation self-consistency estimates
  double unc_ttv = 0.0;
  double unc_vtv = 0.0;
  double residual_order = 0.0;  // fitted exponent of the unexplained remainder
  std::vector<double> epsilons_used;
  bool primary_ok = true;  // e_T = 1 and e_V = 1 held analytically
  bool converged = false;  // all uncertainties below 1e-6
};

/// Richardson-extrapolated estimates of (e_TV, e_TTV, e_VTV) over the grid.
/// Palindromic compositions use even-power elimination (their defect has
/// only odd powers of eps). Requires >= 3 decreasing grid values.
ExtractionResult extract_error_coefficients(const SplitCoefficients& c,
                                            const MatrixPair& m,
                                            std::span<const double> eps_grid);

/// Same, but the product uses `product_pair` while the projection basis
/// comes from `basis_pair` (scale-covariance checks).
ExtractionResult extract_with_basis(const SplitCoefficients& c,
                                    const MatrixPair& product_pair,
                                    const MatrixPair& basis_pair,
                                    std::span<const double> eps_grid);

struct GradientCheck {
  bool ok = false;
  double measured_order = 0.0;
};

/// Rebuilds the product with each kick factor e^{eps v_i V + eps^3 c_i K},
/// K = [V,[T,V]], and fits the order of the remaining defect. With
/// sum c_i = -e_VTV the eps^3 term cancels: the defect is O(eps^4), and
/// O(eps^5) when the composition and the weights are palindromic. ok means
/// the measured order reached 3.8 (4.8 for the palindromic case).
GradientCheck verify_gradient_realization(const SplitCoefficients& c,
                                          const MatrixPair& m,
                                          std::span<const double> gradient_weights,
                                          std::span<const double> eps_grid);

}  // namespace splitgen
