#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "splitgen/coefficients_io.hpp"
#include "splitgen/split_coefficients.hpp"

using namespace splitgen;

namespace {

SplitCoefficients t_first(std::vector<double> t, std::vector<double> v) {
  SplitCoefficients c;
  c.arrangement = Arrangement::t_first;
  c.t = std::move(t);
  c.v = std::move(v);
  return c;
}

const SplitCoefficients alg4a = t_first({0.0, 0.5, 0.5},
                                        {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0});
const SplitCoefficients verlet = t_first({0.0, 1.0}, {0.5, 0.5});
const SplitCoefficients single = t_first({1.0}, {1.0});

SplitCoefficients forest_ruth() {
  const double a = 1.0 / (2.0 - std::cbrt(2.0));
  const double vm = -0.5 * (std::cbrt(2.0) - 1.0) / (2.0 - std::cbrt(2.0));
  return t_first({0.0, a, 1.0 - 2.0 * a, a}, {0.5 * a, vm, vm, 0.5 * a});
}

}  // namespace

TEST_CASE("prefix and suffix sums match the worked examples") {
  // t=(0,1/2,1/2), v=(1/6,2/3,1/6) -> s=(0,0,1/2,1), u=(1,5/6,1/6)
  const PrefixSums ps = prefix_suffix_sums(alg4a);
  REQUIRE(ps.s.size() == 4);
  CHECK(ps.s_at(0) == 0.0);
  CHECK(ps.s_at(1) == 0.0);
  CHECK(ps.s_at(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ps.s_at(3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ps.u_at(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ps.u_at(2) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(ps.u_at(3) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(ps.u_at(4) == 0.0);

  const PrefixSums one = prefix_suffix_sums(single);
  CHECK(one.s_at(0) == 0.0);
  CHECK(one.s_at(1) == 1.0);
  CHECK(one.u_at(1) == 1.0);
  CHECK(one.u_at(2) == 0.0);

  const PrefixSums vv = prefix_suffix_sums(verlet);
  CHECK(vv.s_at(1) == 0.0);
  CHECK(vv.s_at(2) == 1.0);
  CHECK(vv.u_at(1) == 1.0);
  CHECK(vv.u_at(2) == 0.5);
}

TEST_CASE("error coefficients of the named sets") {
  SUBCASE("algorithm 4A") {
    const ErrorCoefficients e = error_coefficients(alg4a);
    CHECK(e.e_t == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.e_v == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(e.e_tv) < 1e-15);
    CHECK(std::abs(e.e_ttv) < 1e-15);
    CHECK(e.e_vtv == doctest::Approx(-1.0 / 72.0).epsilon(1e-13));
  }
  SUBCASE("single split e^T e^V has e_TV = 1/2") {
    const ErrorCoefficients e = error_coefficients(single);
    CHECK(e.e_tv == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("velocity Verlet, hand-evaluated oracle values") {
    // s=(0,0,1), u=(1,1/2): e_TV = 0, e_TTV = 1/4 - 1/6 = 1/12,
    // e_VTV = 1/6 - 1/8 = 1/24.
    const ErrorCoefficients e = error_coefficients(verlet);
    CHECK(std::abs(e.e_tv) < 1e-15);
    CHECK(e.e_ttv == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(e.e_vtv == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  }
}

TEST_CASE("delta_g cube sums") {
  CHECK(delta_g(std::vector<double>{0.0, 0.5, 0.5}) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(delta_g(std::vector<double>{0.0, 1.0}) == 1.0);
  CHECK(std::abs(delta_g(forest_ruth().t)) < 1e-12);
}

TEST_CASE("g_sum explicit form") {
  CHECK(g_sum(std::vector<double>{0.0, 0.5, 0.5}) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g_sum(std::vector<double>{0.0, 1.0}) == 0.0);
  const double third = 1.0 / 3.0;
  CHECK(g_sum(std::vector<double>{0.0, third, third, third}) ==
        doctest::Approx(8.0 / 27.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)g_sum(std::vector<double>{0.0, 0.5}), std::domain_error);
}

TEST_CASE("order classification") {
  CHECK(classify_order(forest_ruth()) == 4);
  CHECK(classify_order(single) == 1);
  CHECK(classify_order(verlet) == 2);
  CHECK(classify_order(alg4a) == 3);  // effective 4 only with the gradient kick
  SplitCoefficients bad = single;
  bad.v = {0.5};
  CHECK(classify_order(bad) == 0);
  CHECK_THROWS_AS(classify_order(alg4a, 0.0), std::invalid_argument);
}

TEST_CASE("telescoping identity for powers 1..3") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 1 + static_cast<int>(rng() % 8);
    std::vector<double> t(n);
    for (double& x : t) x = uni(rng);
    std::vector<double> s(n + 1, 0.0);
    for (int i = 0; i < n; ++i) s[i + 1] = s[i] + t[i];
    for (int pw = 1; pw <= 3; ++pw) {
      double lhs = 0.0;
      for (int i = 1; i <= n; ++i)
        lhs += std::pow(s[i], pw) - std::pow(s[i - 1], pw);
      CHECK(lhs == doctest::Approx(std::pow(s[n], pw)).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("g equals (1 - delta_g)/3 whenever the weights sum to one") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 7);
    std::vector<double> t(n);
    double sum = 0.0;
    do {
      sum = 0.0;
      for (double& x : t) sum += (x = uni(rng));
    } while (std::abs(sum) < 0.3);
    for (double& x : t) x /= sum;
    CHECK(g_sum(t) ==
          doctest::Approx((1.0 - delta_g(t)) / 3.0).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("v_first and its t_first representations agree") {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 6);
    SplitCoefficients c;
    c.arrangement = Arrangement::v_first;
    c.t.resize(n);
    c.v.resize(n);
    for (double& x : c.t) x = uni(rng);
    for (double& x : c.v) x = uni(rng);
    if (rep % 2 == 0) c.v.front() = 0.0;  // exercise the index-shift path

    // Padded representation is always valid; the shift applies when v_1 = 0.
    SplitCoefficients padded;
    padded.arrangement = Arrangement::t_first;
    padded.t.push_back(0.0);
    padded.t.insert(padded.t.end(), c.t.begin(), c.t.end());
    padded.v = c.v;
    padded.v.push_back(0.0);

    const ErrorCoefficients a = error_coefficients(c);
    const ErrorCoefficients b = error_coefficients(padded);
    CHECK(a.e_t == doctest::Approx(b.e_t).epsilon(1e-15).scale(1.0));
    CHECK(a.e_v == doctest::Approx(b.e_v).epsilon(1e-15).scale(1.0));
    CHECK(a.e_tv == doctest::Approx(b.e_tv).epsilon(1e-15).scale(1.0));
    CHECK(a.e_ttv == doctest::Approx(b.e_ttv).epsilon(1e-15).scale(1.0));
    CHECK(a.e_vtv == doctest::Approx(b.e_vtv).epsilon(1e-15).scale(1.0));
  }
}

TEST_CASE("positive-interior sets always have a negative C2 discriminant") {
  // e_TTV = e_VTV would need C2^2 + C2 + 1/(12g) = 0, whose discriminant is
  // -delta_g/(1 - delta_g) < 0 for positive t_{i>1} summing to one.
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 6);  // the quadratic needs g > 0
    std::vector<double> t(n, 0.0);
    double sum = 0.0;
    for (int i = 1; i < n; ++i) sum += (t[i] = uni(rng));
    for (int i = 1; i < n; ++i) t[i] /= sum;
    const double dg = delta_g(t);
    REQUIRE(dg > 0.0);
    REQUIRE(dg < 1.0);
    const double disc = -dg / (1.0 - dg);
    CHECK(disc < 0.0);
    // direct evaluation: the quadratic's minimum stays strictly positive
    const double g = g_sum(t);
    CHECK(0.25 - 0.5 + 1.0 / (12.0 * g) > 0.0);
  }
}

TEST_CASE("palindromic sets with unit sums have e_TV = 0") {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = 1 + static_cast<int>(rng() % 4);  // half-length
    std::vector<double> half(m);
    for (double& x : half) x = uni(rng);
    const bool odd = rng() % 2;

    std::vector<double> interior(half.begin(), half.end());
    if (odd) interior.push_back(uni(rng));
    interior.insert(interior.end(), half.rbegin(), half.rend());
    double ts = 0.0;
    for (double x : interior) ts += x;
    if (std::abs(ts) < 0.3) continue;
    for (double& x : interior) x /= ts;

    const int n = static_cast<int>(interior.size()) + 1;
    std::vector<double> v(n);
    for (int i = 0; i < n / 2; ++i) v[i] = uni(rng);
    for (int i = 0; i < n / 2; ++i) v[n - 1 - i] = v[i];
    if (n % 2) v[n / 2] = uni(rng);
    double vs = 0.0;
    for (double x : v) vs += x;
    if (std::abs(vs) < 0.3) continue;
    for (double& x : v) x /= vs;

    std::vector<double> t(1, 0.0);
    t.insert(t.end(), interior.begin(), interior.end());
    const SplitCoefficients c = t_first(std::move(t), std::move(v));
    REQUIRE(is_palindromic(c));
    CHECK(std::abs(error_coefficients(c).e_tv) < 1e-13);
  }
}

TEST_CASE("effective factor compression") {
  // 4bda at t2 = 1/2 collapses onto 4A once the zero drift is dropped and
  // the adjacent kicks merge
  const SplitCoefficients degenerate =
      t_first({0.0, 0.5, 0.0, 0.5}, {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0});
  const auto seq = effective_factors(degenerate);
  const auto ref = effective_factors(alg4a);
  REQUIRE(seq.size() == ref.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].kind == ref[i].kind);
    CHECK(seq[i].weight == doctest::Approx(ref[i].weight).epsilon(1e-15));
  }
}

TEST_CASE("JSON round trip preserves full precision") {
  CoefficientDocument doc;
  doc.coefficients = alg4a;
  doc.coefficients.name = "4a";
  doc.e_vtv = -1.0 / 72.0;
  const std::string text = to_json_string(doc);
  const CoefficientDocument back = parse_coefficient_json(text);
  CHECK(back.coefficients.name == "4a");
  CHECK(back.coefficients.arrangement == Arrangement::t_first);
  REQUIRE(back.coefficients.t.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.coefficients.t[i] == doc.coefficients.t[i]);  // bit-exact
    CHECK(back.coefficients.v[i] == doc.coefficients.v[i]);
  }
  REQUIRE(back.e_vtv.has_value());
  CHECK(*back.e_vtv == -1.0 / 72.0);

  CHECK_THROWS_AS(parse_coefficient_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_coefficient_json("{\"name\":\"x\"}"), std::invalid_argument);
}

TEST_CASE("null e_vtv survives the round trip") {
  CoefficientDocument doc;
  doc.coefficients = verlet;
  doc.coefficients.name = "leapfrog";
  const CoefficientDocument back = parse_coefficient_json(to_json_string(doc));
  CHECK(!back.e_vtv.has_value());
}
