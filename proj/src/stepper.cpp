#include "splitgen/stepper.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace splitgen {

SplitSystem builtin_system(const std::string& name, int dimension) {
  SplitSystem s;
  s.drift = [](Vec& q, const Vec& p, double tau) {
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += tau * p[k];
  };
  if (name == "harmonic") {
    const int dim = dimension > 0 ? dimension : 1;
    s.name = "harmonic";
    s.dimension = dim;
    s.kick_force = [](const Vec& q) {
      Vec f(q.size());
      for (std::size_t k = 0; k < q.size(); ++k) f[k] = -q[k];
      return f;
    };
    // |grad V|^2 = |q|^2, so -grad|grad V|^2 = -2q
    s.gradient_force = [](const Vec& q) {
      Vec f(q.size());
      for (std::size_t k = 0; k < q.size(); ++k) f[k] = -2.0 * q[k];
      return f;
    };
    s.exact_flow = [](const Vec& q0, const Vec& p0, double time, Vec& q, Vec& p) {
      const double c = std::cos(time), sn = std::sin(time);
      q.resize(q0.size());
      p.resize(p0.size());
      for (std::size_t k = 0; k < q0.size(); ++k) {
        q[k] = c * q0[k] + sn * p0[k];
        p[k] = -sn * q0[k] + c * p0[k];
      }
    };
    s.energy = [](const Vec& q, const Vec& p) {
      double e = 0.0;
      for (std::size_t k = 0; k < q.size(); ++k)
        e += 0.5 * (p[k] * p[k] + q[k] * q[k]);
      return e;
    };
    return s;
  }
  if (name == "kepler2d") {
    if (dimension != 0 && dimension != 2)
      throw std::invalid_argument("kepler2d is two-dimensional");
    s.name = "kepler2d";
    s.dimension = 2;
    auto radius = [](const Vec& q) {
      const double r = std::hypot(q[0], q[1]);
      if (r == 0.0) throw std::domain_error("kepler2d: |q| = 0");
      return r;
    };
    s.kick_force = [radius](const Vec& q) {
      const double r = radius(q);
      const double inv_r3 = 1.0 / (r * r * r);
      return Vec{-q[0] * inv_r3, -q[1] * inv_r3};
    };
    // |grad V|^2 = 1/r^4, so -grad|grad V|^2 = 4 q / r^6
    s.gradient_force = [radius](const Vec& q) {
      const double r = radius(q);
      const double inv_r6 = 1.0 / (r * r * r * r * r * r);
      return Vec{4.0 * q[0] * inv_r6, 4.0 * q[1] * inv_r6};
    };
    s.energy = [radius](const Vec& q, const Vec& p) {
      return 0.5 * (p[0] * p[0] + p[1] * p[1]) - 1.0 / radius(q);
    };
    return s;
  }
  throw std::invalid_argument("unknown system '" + name + "'");
}

std::vector<double> gradient_kick_weights(const SplitCoefficients& c, double e_vtv,
                                          Distribution distribution) {
  validate_shape(c);
  std::vector<double> w(c.size(), 0.0);
  if (distribution == Distribution::none || std::abs(e_vtv) <= 1e-14) return w;

  std::vector<std::size_t> nonzero;
  double kick_sum = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.v[i] != 0.0) {
      nonzero.push_back(i);
      kick_sum += c.v[i];
    }
  }
  if (nonzero.empty())
    throw std::domain_error("gradient weights: no nonzero kicks to carry them");

  if (distribution == Distribution::central) {
    if (nonzero.size() % 2 == 0)
      throw std::domain_error(
          "central gradient distribution needs an odd number of nonzero kicks (" +
          std::to_string(nonzero.size()) +
          " present); use the proportional distribution");
    w[nonzero[nonzero.size() / 2]] = -e_vtv;
  } else {
    for (std::size_t i : nonzero) w[i] = -e_vtv * c.v[i] / kick_sum;
  }
  return w;
}

Integrator make_integrator(const SplitCoefficients& c, Distribution distribution) {
  validate_shape(c);
  const ErrorCoefficients e = error_coefficients(c);
  if (distribution != Distribution::none && classify_order(c) < 3)
    throw std::domain_error(
        "gradient kicks require a set with e_TV = e_TTV = 0 (order >= 3)");
  Integrator integ;
  integ.coefficients = c;
  integ.distribution = distribution;
  integ.gradient_weights = gradient_kick_weights(c, e.e_vtv, distribution);
  integ.forward = true;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.t[i] < 0.0 || c.v[i] < 0.0) integ.forward = false;
  return integ;
}

namespace {

void check_finite(const Vec& q, const Vec& p) {
  for (double x : q)
    if (!std::isfinite(x)) throw std::runtime_error("step: non-finite position");
  for (double x : p)
    if (!std::isfinite(x)) throw std::runtime_error("step: non-finite momentum");
}

}  // namespace

void step(const Integrator& integ, const SplitSystem& sys, Vec& q, Vec& p,
          double eps) {
  if (eps == 0.0) throw std::invalid_argument("step: eps must be nonzero");
  const SplitCoefficients& c = integ.coefficients;
  const double e3 = eps * eps * eps;

  auto drift = [&](double ti) {
    if (ti == 0.0) return;
    if (integ.forward && ti < 0.0)
      throw std::logic_error("forward integrator produced a backward drift");
    sys.drift(q, p, ti * eps);
  };
  auto kick = [&](std::size_t i) {
    const double vi = c.v[i];
    const double ci = integ.gradient_weights.empty() ? 0.0 : integ.gradient_weights[i];
    if (vi == 0.0 && ci == 0.0) return;
    if (vi != 0.0) {
      const Vec f = sys.kick_force(q);
      for (std::size_t k = 0; k < p.size(); ++k) p[k] += eps * vi * f[k];
    }
    if (ci != 0.0) {
      // Classical realization of the inserted [V,[T,V]] factor: the Lie
      // bracket maps to the potential -|grad V|^2, so the kick carries
      // -eps^3 c_i times the stored gradient_force = -grad|grad V|^2.
      // Sign fixed against bch_oracle::verify_gradient_realization.
      const Vec g = sys.gradient_force(q);
      for (std::size_t k = 0; k < p.size(); ++k) p[k] -= e3 * ci * g[k];
    }
  };

  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.arrangement == Arrangement::t_first) {
      drift(c.t[i]);
      kick(i);
    } else {
      kick(i);
      drift(c.t[i]);
    }
  }
  check_finite(q, p);
}

ConvergenceReport convergence_study(const Integrator& integ, const SplitSystem& sys,
                                    const Vec& q0, const Vec& p0, double t_final,
                                    std::span<const double> eps_list) {
  if (eps_list.empty())
    throw std::invalid_argument("convergence_study: empty eps list");
  for (std::size_t i = 0; i < eps_list.size(); ++i)
    if (!(eps_list[i] > 0.0) || (i > 0 && !(eps_list[i] < eps_list[i - 1])))
      throw std::invalid_argument(
          "convergence_study: eps list must be positive and strictly decreasing");

  auto run = [&](double eps, Vec& q, Vec& p) {
    const long n = std::max(1L, std::lround(t_final / eps));
    const double h = t_final / static_cast<double>(n);
    q = q0;
    p = p0;
    for (long k = 0; k < n; ++k) step(integ, sys, q, p, h);
    return h;
  };

  Vec q_ref, p_ref;
  if (sys.has_exact_flow()) {
    sys.exact_flow(q0, p0, t_final, q_ref, p_ref);
  } else {
    double finest = eps_list[0];
    for (double e : eps_list) finest = std::min(finest, e);
    run(finest / 8.0, q_ref, p_ref);
  }

  ConvergenceReport rep;
  for (double eps : eps_list) {
    Vec q, p;
    const double h = run(eps, q, p);
    double err2 = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      err2 += (q[k] - q_ref[k]) * (q[k] - q_ref[k]);
      err2 += (p[k] - p_ref[k]) * (p[k] - p_ref[k]);
    }
    rep.step_sizes.push_back(h);
    rep.global_errors.push_back(std::sqrt(err2));
  }

  // log-log least squares, excluding the roundoff plateau below 1e-13
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < rep.step_sizes.size(); ++i) {
    if (!(rep.global_errors[i] > 1e-13)) continue;
    const double x = std::log(rep.step_sizes[i]);
    const double y = std::log(rep.global_errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  rep.points_in_fit = n;
  if (n >= 2) {
    const double denom = n * sxx - sx * sx;
    rep.fitted_slope = (n * sxy - sx * sy) / denom;
    if (n > 2) {
      const double b = (sy - rep.fitted_slope * sx) / n;
      double ss = 0.0;
      for (std::size_t i = 0; i < rep.step_sizes.size(); ++i) {
        if (!(rep.global_errors[i] > 1e-13)) continue;
        const double x = std::log(rep.step_sizes[i]);
        const double r = std::log(rep.global_errors[i]) - (rep.fitted_slope * x + b);
        ss += r * r;
      }
      rep.slope_stderr = std::sqrt(ss / (n - 2) / (sxx - sx * sx / n));
    }
  }
  return rep;
}

namespace {

void put_double(std::ostream& os, double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  os.write(buf, p - buf);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Integrator& integ,
                          const SplitSystem& sys, Vec q, Vec p, double eps,
                          long steps) {
  os << "step";
  for (std::size_t k = 0; k < q.size(); ++k) os << ",q" << k + 1;
  for (std::size_t k = 0; k < p.size(); ++k) os << ",p" << k + 1;
  os << ",energy_error\n";
  const double e0 = sys.energy(q, p);
  for (long n = 1; n <= steps; ++n) {
    step(integ, sys, q, p, eps);
    os << n;
    for (double x : q) {
      os << ",";
      put_double(os, x);
    }
    for (double x : p) {
      os << ",";
      put_double(os, x);
    }
    os << ",";
    put_double(os, sys.energy(q, p) - e0);
    os << "\n";
  }
}

}  // namespace splitgen
