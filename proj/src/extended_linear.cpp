#include "splitgen/extended_linear.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace splitgen {

namespace {

double checked_sum(std::span<const double> w, const char* what) {
  double s = 0.0;
  for (double x : w) s += x;
  if (std::abs(s - 1.0) > 1e-9)
    throw std::domain_error(std::string(what) +
                            ": weights must sum to 1, got " + std::to_string(s));
  return s;
}

std::string fmt(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

ConstructedSet finish(SplitCoefficients c, std::optional<ExtendedLinearParams> p) {
  ConstructedSet out;
  out.errors = error_coefficients(c);
  out.coefficients = std::move(c);
  out.params = p;
  return out;
}

}  // namespace

std::vector<double> extended_linear_kicks(std::span<const double> t, double c2) {
  if (t.size() < 2 || t.front() != 0.0)
    throw std::invalid_argument("extended_linear_kicks: need t_1 = 0 and N >= 2");
  const std::size_t n = t.size();
  std::vector<double> v(n);
  v.front() = 0.5 + c2 * (1.0 - t[1]);
  v.back() = 0.5 + c2 * (1.0 - t[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) v[i] = -c2 * (t[i] + t[i + 1]);
  return v;
}

ConstructedSet velocity_from_t(std::span<const double> t_interior) {
  std::vector<double> t;
  t.reserve(t_interior.size() + 1);
  t.push_back(0.0);
  t.insert(t.end(), t_interior.begin(), t_interior.end());
  checked_sum(t, "velocity_from_t");

  const double dg = delta_g(t);
  const double phi = 1.0 - dg;
  if (!(phi > 0.0))
    throw std::domain_error("velocity_from_t: phi = 1 - delta_g = " + fmt(phi) +
                            " <= 0, C2 singular");
  ExtendedLinearParams p;
  p.kind = FamilyKind::velocity;
  p.delta_g = dg;
  p.phi = phi;
  p.c2 = -1.0 / (2.0 * phi);
  p.c1 = 0.5 - p.c2;

  SplitCoefficients c;
  c.arrangement = Arrangement::t_first;
  c.v = extended_linear_kicks(t, p.c2);
  c.t = std::move(t);
  return finish(std::move(c), p);
}

ConstructedSet position_from_v(std::span<const double> v_interior) {
  std::vector<double> v;
  v.reserve(v_interior.size() + 1);
  v.push_back(0.0);
  v.insert(v.end(), v_interior.begin(), v_interior.end());
  checked_sum(v, "position_from_v");

  const double dgp = delta_g(v);
  if (!(1.0 - dgp > 0.0))
    throw std::domain_error("position_from_v: 1 - delta_g' = " + fmt(1.0 - dgp) +
                            " <= 0, phi' complex");
  ExtendedLinearParams p;
  p.kind = FamilyKind::position;
  p.delta_g = dgp;
  p.phi = std::sqrt(1.0 - dgp);
  p.c2 = -1.0 / (2.0 * p.phi);
  p.c1 = 0.5 - p.c2;

  const std::size_t n = v.size();
  SplitCoefficients c;
  c.arrangement = Arrangement::v_first;
  c.t.resize(n);
  c.t.front() = 0.5 + p.c2 * (1.0 - v[1]);
  c.t.back() = 0.5 + p.c2 * (1.0 - v[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) c.t[i] = -p.c2 * (v[i] + v[i + 1]);
  c.v = std::move(v);
  return finish(std::move(c), p);
}

ConstructedSet linear_from_t(std::span<const double> t) {
  if (t.empty() || std::abs(t.front()) > 1e-15)
    throw std::invalid_argument("linear_from_t: requires t_1 = 0");
  const std::size_t n = t.size();
  SplitCoefficients c;
  c.arrangement = Arrangement::t_first;
  c.t.assign(t.begin(), t.end());
  c.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double next = (i + 1 < n) ? t[i + 1] : 0.0;
    c.v[i] = 0.5 * (t[i] + next);
  }
  ExtendedLinearParams p;
  p.kind = FamilyKind::linear;
  p.c2 = -0.5;
  p.c1 = 1.0;
  p.delta_g = delta_g(t);
  p.phi = 1.0 - p.delta_g;
  return finish(std::move(c), p);
}

namespace {

void require_arity(const FamilySpec& spec, std::size_t want, const char* name) {
  if (spec.parameters.size() != want)
    throw std::invalid_argument(std::string(name) + ": expected " +
                                std::to_string(want) + " parameter(s), got " +
                                std::to_string(spec.parameters.size()));
}

int integer_param(double x, const char* name) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9)
    throw std::invalid_argument(std::string(name) + ": N must be an integer");
  return static_cast<int>(r);
}

ConstructedSet minimal_velocity(int n) {
  if (n < 3) throw std::domain_error("minimal-velocity: requires N >= 3");
  const std::vector<double> interior(n - 1, 1.0 / (n - 1));
  return velocity_from_t(interior);
}

ConstructedSet minimal_position(int n) {
  if (n < 3) throw std::domain_error("minimal-position: requires N >= 3");
  const std::vector<double> interior(n - 1, 1.0 / (n - 1));
  return position_from_v(interior);
}

ConstructedSet make_4bda(double t2) {
  if (!(t2 > 0.0 && t2 < 1.0))
    throw std::domain_error("4bda: t2 = " + fmt(t2) + " outside (0,1)");
  return velocity_from_t(std::vector<double>{t2, 1.0 - 2.0 * t2, t2});
}

ConstructedSet make_4acb(double v2) {
  if (!(v2 > 0.0))
    throw std::domain_error("4acb: v2 = " + fmt(v2) + " must be positive");
  return position_from_v(std::vector<double>{v2, 1.0 - 2.0 * v2, v2});
}

ConstructedSet nine_stage_velocity(double t2) {
  return velocity_from_t(std::vector<double>{t2, 0.5 - t2, 0.5 - t2, t2});
}

ConstructedSet nine_stage_position(double v2) {
  return position_from_v(std::vector<double>{v2, 0.5 - v2, 0.5 - v2, v2});
}

ConstructedSet eleven_stage_velocity(double t2, double t3) {
  return velocity_from_t(
      std::vector<double>{t2, t3, 1.0 - 2.0 * t2 - 2.0 * t3, t3, t2});
}

ConstructedSet eleven_stage_position(double v2, double v3) {
  return position_from_v(
      std::vector<double>{v2, v3, 1.0 - 2.0 * v2 - 2.0 * v3, v3, v2});
}

ConstructedSet make_forest_ruth() {
  const double a = 1.0 / (2.0 - std::cbrt(2.0));
  return linear_from_t(std::vector<double>{0.0, a, 1.0 - 2.0 * a, a});
}

void check_alphas(std::span<const double> alphas, const char* name) {
  if (alphas.empty())
    throw std::invalid_argument(std::string(name) + ": needs alpha_2..alpha_k");
  if (std::abs(alphas.front() - 1.0) > 1e-12)
    throw std::invalid_argument(std::string(name) + ": alpha_2 must be 1");
}

ConstructedSet generalized_fr(std::span<const double> alphas, bool even) {
  const char* name = even ? "generalized-fr-even" : "generalized-fr-odd";
  check_alphas(alphas, name);
  if (!even && alphas.size() < 2)
    throw std::invalid_argument(
        "generalized-fr-odd: exists only for N = 2k+1 with k > 2");
  double s1 = 0.0, s3 = 0.0;
  for (double a : alphas) {
    s1 += a;
    s3 += a * a * a;
  }
  const double root = std::cbrt(s3);  // real cube root, s3 may be negative
  const double denom = even ? 2.0 * s1 - std::cbrt(2.0) * root : 2.0 * (s1 - root);
  if (std::abs(denom) < 1e-12)
    throw std::domain_error(std::string(name) + ": singular solution, 2 sum(alpha) - " +
                            (even ? "2^(1/3) " : "2 ") + "cbrt(sum alpha^3) = " +
                            fmt(denom));
  const double t2 = 1.0 / denom;
  const double t_mid = (even ? -std::cbrt(2.0) : -1.0) * root * t2;

  std::vector<double> t;
  t.push_back(0.0);
  for (double a : alphas) t.push_back(a * t2);
  t.push_back(t_mid);
  if (!even) t.push_back(t_mid);
  for (std::size_t i = alphas.size(); i-- > 0;) t.push_back(alphas[i] * t2);
  return linear_from_t(t);
}

}  // namespace

ConstructedSet make_family(const FamilySpec& spec) {
  ConstructedSet out;
  std::string name;
  switch (spec.family) {
    case Family::minimal_velocity: {
      require_arity(spec, 1, "minimal-velocity");
      const int n = integer_param(spec.parameters[0], "minimal-velocity");
      out = minimal_velocity(n);
      name = "minimal-velocity(" + std::to_string(n) + ")";
      break;
    }
    case Family::minimal_position: {
      require_arity(spec, 1, "minimal-position");
      const int n = integer_param(spec.parameters[0], "minimal-position");
      out = minimal_position(n);
      name = "minimal-position(" + std::to_string(n) + ")";
      break;
    }
    case Family::alg_4bda:
      require_arity(spec, 1, "4bda");
      out = make_4bda(spec.parameters[0]);
      name = "4bda(" + fmt(spec.parameters[0]) + ")";
      break;
    case Family::alg_4acb:
      require_arity(spec, 1, "4acb");
      out = make_4acb(spec.parameters[0]);
      name = "4acb(" + fmt(spec.parameters[0]) + ")";
      break;
    case Family::nine_stage_velocity:
      require_arity(spec, 1, "nine-stage-velocity");
      out = nine_stage_velocity(spec.parameters[0]);
      name = "nine-stage-velocity(" + fmt(spec.parameters[0]) + ")";
      break;
    case Family::nine_stage_position:
      require_arity(spec, 1, "nine-stage-position");
      out = nine_stage_position(spec.parameters[0]);
      name = "nine-stage-position(" + fmt(spec.parameters[0]) + ")";
      break;
    case Family::eleven_stage_velocity:
      require_arity(spec, 2, "eleven-stage-velocity");
      out = eleven_stage_velocity(spec.parameters[0], spec.parameters[1]);
      name = "eleven-stage-velocity(" + fmt(spec.parameters[0]) + "," +
             fmt(spec.parameters[1]) + ")";
      break;
    case Family::eleven_stage_position:
      require_arity(spec, 2, "eleven-stage-position");
      out = eleven_stage_position(spec.parameters[0], spec.parameters[1]);
      name = "eleven-stage-position(" + fmt(spec.parameters[0]) + "," +
             fmt(spec.parameters[1]) + ")";
      break;
    case Family::forest_ruth:
      require_arity(spec, 0, "forest-ruth");
      out = make_forest_ruth();
      name = "forest-ruth";
      break;
    case Family::generalized_fr_even:
      out = generalized_fr(spec.parameters, true);
      name = "generalized-fr-even";
      break;
    case Family::generalized_fr_odd:
      out = generalized_fr(spec.parameters, false);
      name = "generalized-fr-odd";
      break;
  }
  out.coefficients.name = name;
  return out;
}

ConstructedSet make_named_family(const std::string& name,
                                 std::span<const double> parameters) {
  const std::vector<double> params(parameters.begin(), parameters.end());
  auto with = [&](Family f, std::vector<double> p) {
    return make_family(FamilySpec{f, std::move(p)});
  };
  auto no_params = [&](const char* what) {
    if (!params.empty())
      throw std::invalid_argument(std::string(what) +
                                  ": takes no parameters (fixed alias)");
  };

  if (name == "4a") {
    no_params("4a");
    auto out = with(Family::minimal_velocity, {3});
    out.coefficients.name = "4a";
    return out;
  }
  if (name == "4b") {
    no_params("4b");
    auto out = with(Family::minimal_position, {3});
    out.coefficients.name = "4b";
    return out;
  }
  if (name == "4c") {
    no_params("4c");
    auto out = with(Family::alg_4acb, {0.375});
    out.coefficients.name = "4c";
    return out;
  }
  if (name == "4d") {
    no_params("4d");
    auto out = with(Family::minimal_velocity, {4});
    out.coefficients.name = "4d";
    return out;
  }
  if (name == "leapfrog" || name == "verlet") {
    no_params("leapfrog");
    auto out = linear_from_t(std::vector<double>{0.0, 1.0});
    out.coefficients.name = "leapfrog";
    return out;
  }
  if (name == "minimal-velocity") return with(Family::minimal_velocity, params);
  if (name == "minimal-position") return with(Family::minimal_position, params);
  if (name == "4bda") return with(Family::alg_4bda, params);
  if (name == "4acb") return with(Family::alg_4acb, params);
  if (name == "nine-stage-velocity") return with(Family::nine_stage_velocity, params);
  if (name == "nine-stage-position") return with(Family::nine_stage_position, params);
  if (name == "eleven-stage-velocity")
    return with(Family::eleven_stage_velocity, params);
  if (name == "eleven-stage-position")
    return with(Family::eleven_stage_position, params);
  if (name == "forest-ruth") return with(Family::forest_ruth, params);
  if (name == "generalized-fr-even") return with(Family::generalized_fr_even, params);
  if (name == "generalized-fr-odd") return with(Family::generalized_fr_odd, params);
  throw std::invalid_argument("unknown family '" + name + "'");
}

std::vector<std::string> builtin_family_names() {
  return {"4a",
          "4b",
          "4c",
          "4d",
          "leapfrog",
          "minimal-velocity",
          "minimal-position",
          "4bda",
          "4acb",
          "nine-stage-velocity",
          "nine-stage-position",
          "eleven-stage-velocity",
          "eleven-stage-position",
          "forest-ruth",
          "generalized-fr-even",
          "generalized-fr-odd"};
}

PositivityReport positivity_report(const SplitCoefficients& c) {
  validate_shape(c);
  PositivityReport r;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.t[i] < 0.0) r.negative_t.push_back(i);
    if (c.v[i] < 0.0) r.negative_v.push_back(i);
  }
  r.forward = r.negative_t.empty() && r.negative_v.empty();

  // Goldman-Kaper corollary for linear-kind sets with delta_g = 0: at least
  // one negative t_k has v_k or v_{k-1} negative as well.
  if (c.arrangement == Arrangement::t_first && !c.t.empty() &&
      std::abs(c.t.front()) <= 1e-12 && std::abs(delta_g(c.t)) <= 1e-12) {
    bool linear_kind = true;
    for (std::size_t i = 0; i < c.size() && linear_kind; ++i) {
      const double next = (i + 1 < c.size()) ? c.t[i + 1] : 0.0;
      if (std::abs(c.v[i] - 0.5 * (c.t[i] + next)) > 1e-12) linear_kind = false;
    }
    if (linear_kind && !r.negative_t.empty()) {
      bool found = false;
      for (std::size_t k : r.negative_t) {
        if (c.v[k] < 0.0 || (k > 0 && c.v[k - 1] < 0.0)) {
          found = true;
          break;
        }
      }
      r.goldman_kaper = found;
    }
  }
  return r;
}

}  // namespace splitgen
