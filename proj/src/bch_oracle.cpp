#include "splitgen/bch_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace splitgen {

namespace {

struct Basis {
  Mat k1, k2, k3;      // [T,V], [T,[T,V]], [V,[T,V]]
  double gram[3][3];   // Frobenius Gram matrix
  double inv[3][3];
  double cond = 0.0;
};

bool build_basis(const MatrixPair& m, Basis& b) {
  b.k1 = commutator(m.t, m.v);
  b.k2 = commutator(m.t, b.k1);
  b.k3 = commutator(m.v, b.k1);
  const Mat* ks[3] = {&b.k1, &b.k2, &b.k3};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b.gram[i][j] = frobenius_dot(*ks[i], *ks[j]);

  // 3x3 inverse via adjugate; condition in the 1-norm.
  const auto& g = b.gram;
  const double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                     g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                     g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
  if (det == 0.0 || !std::isfinite(det)) return false;
  const double adj[3][3] = {
      {g[1][1] * g[2][2] - g[1][2] * g[2][1], g[0][2] * g[2][1] - g[0][1] * g[2][2],
       g[0][1] * g[1][2] - g[0][2] * g[1][1]},
      {g[1][2] * g[2][0] - g[1][0] * g[2][2], g[0][0] * g[2][2] - g[0][2] * g[2][0],
       g[0][2] * g[1][0] - g[0][0] * g[1][2]},
      {g[1][0] * g[2][1] - g[1][1] * g[2][0], g[0][1] * g[2][0] - g[0][0] * g[2][1],
       g[0][0] * g[1][1] - g[0][1] * g[1][0]}};
  double n1g = 0.0, n1i = 0.0;
  for (int j = 0; j < 3; ++j) {
    double cg = 0.0, ci = 0.0;
    for (int i = 0; i < 3; ++i) {
      b.inv[i][j] = adj[i][j] / det;
      cg += std::abs(g[i][j]);
      ci += std::abs(b.inv[i][j]);
    }
    n1g = std::max(n1g, cg);
    n1i = std::max(n1i, ci);
  }
  b.cond = n1g * n1i;
  return b.cond < 1e6;
}

constexpr double kGramConditionLimit = 1e6;

}  // namespace

MatrixPair random_matrix_pair(std::uint64_t seed, std::size_t dim) {
  if (dim < 3)
    throw std::invalid_argument("random_matrix_pair: dimension must be >= 3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    MatrixPair m;
    m.seed = seed;
    m.t = Mat(dim);
    m.v = Mat(dim);
    for (double& x : m.t.data()) x = uni(rng);
    for (double& x : m.v.data()) x = uni(rng);
    if (frobenius_norm(commutator(m.t, m.v)) < 1e-6) continue;
    Basis b;
    if (build_basis(m, b)) return m;
  }
  throw std::runtime_error("random_matrix_pair: no well-conditioned draw found");
}

std::vector<double> default_epsilon_grid() {
  std::vector<double> g;
  for (int k = 4; k <= 10; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

namespace {

Mat splitting_product(const SplitCoefficients& c, const MatrixPair& m, double eps,
                      std::span<const double> grad_weights) {
  const std::size_t n = c.size();
  Mat p = Mat::identity(m.t.dim());
  Mat k3;
  const bool with_gradient = !grad_weights.empty();
  if (with_gradient) {
    if (grad_weights.size() != n)
      throw std::invalid_argument("gradient weights must align with the kick list");
    k3 = commutator(m.v, commutator(m.t, m.v));
  }
  const double e3 = eps * eps * eps;
  auto kick = [&](std::size_t i) {
    const double ci = with_gradient ? grad_weights[i] : 0.0;
    if (c.v[i] == 0.0 && ci == 0.0) return;
    Mat e = c.v[i] * eps * m.v;
    if (ci != 0.0) e += (e3 * ci) * k3;
    p = p * expm(e);
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (c.arrangement == Arrangement::t_first) {
      if (c.t[i] != 0.0) p = p * expm(c.t[i] * eps * m.t);
      kick(i);
    } else {
      kick(i);
      if (c.t[i] != 0.0) p = p * expm(c.t[i] * eps * m.t);
    }
  }
  return p;
}

Mat defect_general(const SplitCoefficients& c, const MatrixPair& m, double eps,
                   std::span<const double> grad_weights, double e_t, double e_v) {
  const Mat p = splitting_product(c, m, eps, grad_weights);
  if (one_norm(p - Mat::identity(p.dim())) > 1.5)
    throw std::runtime_error(
        "product_defect: eps too large for the principal logarithm branch");
  return logm(p) - eps * e_t * m.t - eps * e_v * m.v;
}

// Neville tableau with the given elimination powers; returns the entry with
// the smallest spread against its parents, plus that spread.
std::pair<double, double> best_richardson(std::span<const double> y, double ratio,
                                          std::span<const int> powers) {
  std::vector<std::vector<double>> cols;
  cols.emplace_back(y.begin(), y.end());
  for (int p : powers) {
    const auto& prev = cols.back();
    if (prev.size() < 2) break;
    std::vector<double> next(prev.size() - 1);
    const double rp = std::pow(ratio, p);
    for (std::size_t k = 0; k + 1 < prev.size(); ++k)
      next[k] = (prev[k + 1] - rp * prev[k]) / (1.0 - rp);
    cols.push_back(std::move(next));
  }
  double best = cols.front().back();
  double best_unc = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < cols.size(); ++j) {
    for (std::size_t k = 0; k < cols[j].size(); ++k) {
      const double u = std::max(std::abs(cols[j][k] - cols[j - 1][k]),
                                std::abs(cols[j][k] - cols[j - 1][k + 1]));
      if (u < best_unc) {
        best_unc = u;
        best = cols[j][k];
      }
    }
  }
  return {best, best_unc};
}

// Least-squares slope of log(err) vs log(eps) with an absolute floor.
std::pair<double, int> fit_log_slope(std::span<const double> eps,
                                     std::span<const double> err, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(err[i] > floor)) continue;
    const double x = std::log(eps[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return {0.0, n};
  return {(n * sxy - sx * sy) / (n * sxx - sx * sx), n};
}

}  // namespace

Mat product_defect(const SplitCoefficients& c, const MatrixPair& m, double eps) {
  validate_shape(c);
  return defect_general(c, m, eps, {}, 1.0, 1.0);
}

CommutatorProjection project_onto_commutator_basis(const Mat& l,
                                                   const MatrixPair& basis) {
  Basis b;
  if (!build_basis(basis, b))
    throw std::runtime_error("commutator basis ill-conditioned (Gram condition >= " +
                             std::to_string(kGramConditionLimit) + ")");
  const double rhs[3] = {frobenius_dot(b.k1, l), frobenius_dot(b.k2, l),
                         frobenius_dot(b.k3, l)};
  double x[3];
  for (int i = 0; i < 3; ++i)
    x[i] = b.inv[i][0] * rhs[0] + b.inv[i][1] * rhs[1] + b.inv[i][2] * rhs[2];
  CommutatorProjection out;
  out.tv = x[0];
  out.ttv = x[1];
  out.vtv = x[2];
  out.residual = frobenius_norm(l - x[0] * b.k1 - x[1] * b.k2 - x[2] * b.k3);
  return out;
}

ExtractionResult extract_with_basis(const SplitCoefficients& c,
                                    const MatrixPair& product_pair,
                                    const MatrixPair& basis_pair,
                                    std::span<const double> eps_grid) {
  validate_shape(c);
  if (eps_grid.size() < 3)
    throw std::invalid_argument("extraction needs >= 3 grid values");
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] < eps_grid[i - 1]))
      throw std::invalid_argument("epsilon grid must be strictly decreasing");

  const ErrorCoefficients analytic = error_coefficients(c);
  const bool primary_ok = std::abs(analytic.e_t - 1.0) <= 1e-12 &&
                          std::abs(analytic.e_v - 1.0) <= 1e-12;

  const std::size_t ng = eps_grid.size();
  std::vector<double> est_tv(ng), est_ttv(ng), est_vtv(ng), resid(ng);
  for (std::size_t i = 0; i < ng; ++i) {
    const double eps = eps_grid[i];
    // Measured against the actual first-order content e_T T + e_V V so that
    // primary-constraint violations do not contaminate the projection.
    const Mat l = defect_general(c, product_pair, eps, {}, analytic.e_t, analytic.e_v);
    const CommutatorProjection pr = project_onto_commutator_basis(l, basis_pair);
    const double e2 = eps * eps;
    est_tv[i] = pr.tv / e2;
    est_ttv[i] = pr.ttv / (e2 * eps);
    est_vtv[i] = pr.vtv / (e2 * eps);
    resid[i] = pr.residual;
  }

  const double ratio = eps_grid[1] / eps_grid[0];
  // Palindromic compositions have only odd powers of eps in the defect, so
  // the per-eps estimates carry only even-power corrections.
  std::vector<int> powers;
  const int step = is_palindromic(c) ? 2 : 1;
  for (int p = step; powers.size() + 1 < ng; p += step) powers.push_back(p);

  ExtractionResult r;
  r.epsilons_used.assign(eps_grid.begin(), eps_grid.end());
  r.primary_ok = primary_ok;
  std::tie(r.e_tv, r.unc_tv) = best_richardson(est_tv, ratio, powers);
  std::tie(r.e_ttv, r.unc_ttv) = best_richardson(est_ttv, ratio, powers);
  std::tie(r.e_vtv, r.unc_vtv) = best_richardson(est_vtv, ratio, powers);
  r.converged = r.unc_tv < 1e-6 && r.unc_ttv < 1e-6 && r.unc_vtv < 1e-6;
  r.residual_order = fit_log_slope(eps_grid, resid, 1e-13).first;
  return r;
}

ExtractionResult extract_error_coefficients(const SplitCoefficients& c,
                                            const MatrixPair& m,
                                            std::span<const double> eps_grid) {
  return extract_with_basis(c, m, m, eps_grid);
}

GradientCheck verify_gradient_realization(const SplitCoefficients& c,
                                          const MatrixPair& m,
                                          std::span<const double> gradient_weights,
                                          std::span<const double> eps_grid) {
  validate_shape(c);
  const ErrorCoefficients analytic = error_coefficients(c);
  std::vector<double> norms(eps_grid.size());
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    const Mat l = defect_general(c, m, eps_grid[i], gradient_weights, analytic.e_t,
                                 analytic.e_v);
    norms[i] = frobenius_norm(l);
  }
  GradientCheck out;
  const auto [slope, used] = fit_log_slope(eps_grid, norms, 1e-13);
  out.measured_order = slope;
  bool pal = is_palindromic(c);
  if (pal) {
    // palindromic weights keep the composition time-symmetric
    for (std::size_t i = 0; i < gradient_weights.size(); ++i)
      if (std::abs(gradient_weights[i] -
                   gradient_weights[gradient_weights.size() - 1 - i]) > 1e-14)
        pal = false;
  }
  const double want = pal ? 4.8 : 3.8;
  out.ok = used >= 3 && slope >= want;
  return out;
}

}  // namespace splitgen
