#include "splitgen/split_coefficients.hpp"

#include <cmath>
#include <stdexcept>

namespace splitgen {

void validate_shape(const SplitCoefficients& c) {
  if (c.t.empty() || c.t.size() != c.v.size())
    throw std::invalid_argument(
        "split coefficients: t and v must have equal length N >= 1");
}

PrefixSums prefix_suffix_sums(const SplitCoefficients& c) {
  validate_shape(c);
  const std::size_t n = c.size();
  PrefixSums ps;
  ps.s.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) ps.s[i + 1] = ps.s[i] + c.t[i];
  ps.u.assign(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) ps.u[i] = ps.u[i + 1] + c.v[i];
  return ps;
}

SplitCoefficients to_t_first(const SplitCoefficients& c) {
  validate_shape(c);
  if (c.arrangement == Arrangement::t_first) return c;
  SplitCoefficients out;
  out.name = c.name;
  out.arrangement = Arrangement::t_first;
  if (c.v.front() == 0.0) {
    out.t = c.t;
    out.v.assign(c.v.begin() + 1, c.v.end());
    out.v.push_back(0.0);
  } else {
    out.t.reserve(c.size() + 1);
    out.t.push_back(0.0);
    out.t.insert(out.t.end(), c.t.begin(), c.t.end());
    out.v = c.v;
    out.v.push_back(0.0);
  }
  return out;
}

ErrorCoefficients error_coefficients(const SplitCoefficients& c) {
  const SplitCoefficients tf = to_t_first(c);
  const PrefixSums ps = prefix_suffix_sums(tf);
  const std::size_t n = tf.size();

  ErrorCoefficients e;
  e.e_t = ps.s_at(n);
  e.e_v = ps.u_at(1);

  double sum_su = 0.0, sum_s2u = 0.0, sum_su2 = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double si = ps.s_at(i), sp = ps.s_at(i - 1), ui = ps.u_at(i);
    sum_su += (si - sp) * ui;
    sum_s2u += (si * si - sp * sp) * ui;
    sum_su2 += (si - sp) * ui * ui;
  }
  e.e_tv = sum_su - 0.5;
  e.e_ttv = 0.5 * sum_s2u - 1.0 / 6.0 - 0.5 * e.e_tv;
  e.e_vtv = 1.0 / 6.0 + 0.5 * e.e_tv - 0.5 * sum_su2;
  return e;
}

double delta_g(std::span<const double> t) {
  double s = 0.0;
  for (double x : t) s += x * x * x;
  return s;
}

double g_sum(std::span<const double> t) {
  double total = 0.0;
  for (double x : t) total += x;
  if (std::abs(total - 1.0) > 1e-9)
    throw std::domain_error("g_sum: requires sum t_i = 1, got sum = " +
                            std::to_string(total));
  double g = 0.0, s = 0.0;
  for (double x : t) {
    const double sp = s;
    s += x;
    g += s * sp * x;  // s_i s_{i-1} (s_i - s_{i-1})
  }
  return g;
}

std::vector<Factor> effective_factors(const SplitCoefficients& c, double drop_tol) {
  validate_shape(c);
  std::vector<Factor> seq;
  auto push = [&seq, drop_tol](OpKind k, double w) {
    if (std::abs(w) <= drop_tol) return;
    if (!seq.empty() && seq.back().kind == k)
      seq.back().weight += w;
    else
      seq.push_back({k, w});
  };
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.arrangement == Arrangement::t_first) {
      push(OpKind::drift, c.t[i]);
      push(OpKind::kick, c.v[i]);
    } else {
      push(OpKind::kick, c.v[i]);
      push(OpKind::drift, c.t[i]);
    }
  }
  return seq;
}

bool is_palindromic(const SplitCoefficients& c, double tol) {
  const auto seq = effective_factors(c);
  const std::size_t m = seq.size();
  if (m == 0) return true;
  for (std::size_t i = 0; i <= (m - 1) / 2; ++i) {
    const Factor& a = seq[i];
    const Factor& b = seq[m - 1 - i];
    if (a.kind != b.kind) return false;
    if (std::abs(a.weight - b.weight) >
        tol * std::max(1.0, std::abs(a.weight)))
      return false;
  }
  return true;
}

int classify_order(const SplitCoefficients& c, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classify_order: tol must be > 0");
  const ErrorCoefficients e = error_coefficients(c);
  if (std::abs(e.e_t - 1.0) > tol || std::abs(e.e_v - 1.0) > tol) return 0;
  if (std::abs(e.e_tv) > tol) return 1;
  if (std::abs(e.e_ttv) > tol) return 2;
  const bool symmetric = is_palindromic(c);
  if (std::abs(e.e_vtv) <= tol) return symmetric ? 4 : 3;
  return symmetric ? 3 : 2;
}

}  // namespace splitgen
