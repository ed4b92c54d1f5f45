#include <doctest.h>

#include <cmath>
#include <random>

#include "pslet/pslet.hpp"

using namespace pslet;

TEST_CASE("effective l") {
  CHECK(effective_l<double>({0, 0, 3}) == 0.0);
  CHECK(effective_l<double>({0, 0, 2}) == -0.5);
  CHECK(effective_l<double>({2, 2, 2}) == 1.5);
  CHECK(effective_l<double>({2, 2, 2}) == effective_l<double>({2, 1, 4}));
}

TEST_CASE("degeneracy partners") {
  const auto p = degeneracy_partners({1, 1, 2});
  REQUIRE(p.size() == 1);
  CHECK(p[0] == StateSpec{1, 0, 4});

  CHECK(degeneracy_partners({0, 0, 3}).empty());

  const auto q = degeneracy_partners({2, 2, 2});
  CHECK(std::find(q.begin(), q.end(), StateSpec{2, 1, 4}) != q.end());

  for (const StateSpec s : {StateSpec{0, 3, 3}, StateSpec{1, 0, 9}, StateSpec{2, 4, 2}}) {
    for (const StateSpec& t : degeneracy_partners(s)) {
      CHECK(effective_l<double>(t) == effective_l<double>(s));
      CHECK(t.D >= 2);
      CHECK(t.D % 2 == s.D % 2);
      const auto back = degeneracy_partners(t);
      CHECK(std::find(back.begin(), back.end(), s) != back.end());
    }
  }
}

TEST_CASE("pure oscillator frames") {
  const PotentialModel<> osc(0.5, 0.0, 2.0);
  const auto f0 = solve_qo(osc, 0, 0.0);
  CHECK(f0.w == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(f0.beta == doctest::Approx(-1.5).epsilon(1e-13));
  CHECK(f0.lbar == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(f0.q_o == doctest::Approx(std::sqrt(1.5)).epsilon(1e-13));
  CHECK(f0.B(2) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(f0.B(3) == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(f0.B(4) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(f0.B(2) * 2 == doctest::Approx(f0.w * f0.w));

  const auto f1 = solve_qo(osc, 1, 0.0);
  CHECK(f1.beta == doctest::Approx(-3.5).epsilon(1e-13));
  CHECK(f1.lbar == doctest::Approx(3.5).epsilon(1e-13));
  CHECK(f1.q_o == doctest::Approx(std::sqrt(3.5)).epsilon(1e-13));
}

TEST_CASE("perturbation polynomials of the oscillator frame") {
  const auto f = solve_qo(PotentialModel<>(0.5, 0.0, 2.0), 0, 0.0);
  const auto v = build_v(f, 4);
  REQUIRE(v.v.size() == 5);
  CHECK(v.v[0](0) == doctest::Approx(-1.0));
  CHECK(v.v[0](2) == doctest::Approx(2.0));
  CHECK(v.v[1](1) == doctest::Approx(2.0));
  CHECK(v.v[1](3) == doctest::Approx(-2.0));
  CHECK(v.v[2](4) == doctest::Approx(2.5));
  for (int n = 0; n <= 4; ++n) CHECK(poly_degree(v.v[n], 1e-14) == n + 2);
}

TEST_CASE("Table 1 leading term") {
  const auto f = solve_qo(PotentialModel<>(0.5, 500.0, 2.5), 0, 0.0);
  CHECK(std::abs(2 * f.lbar * f.lbar * f.leading_term() - 44.003142) < 5e-6);
}

TEST_CASE("random frames satisfy the minimum conditions") {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> logc2(-2.0, 3.0), bdist(0.5, 3.0), ldist(-0.5, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double c2 = std::pow(10.0, logc2(rng));
    const double b = bdist(rng);
    const double l_D = ldist(rng);
    const int k = trial % 3;
    const PotentialModel<> p(0.5, c2, b);
    const auto f = solve_qo(p, k, l_D);
    INFO("c2=" << c2 << " b=" << b << " l_D=" << l_D << " k=" << k);
    CHECK(f.q_o > 0);
    CHECK(f.lbar > 0);
    CHECK(f.beta == -(0.5 + (k + 0.5) * f.w));
    CHECK(std::abs(l_D - f.beta - std::sqrt(std::pow(f.q_o, 3) * p.derivative(f.q_o, 1))) < 1e-10 * f.lbar);
    CHECK(2 * f.B(2) == doctest::Approx(f.w * f.w).epsilon(1e-12));

    auto E = [&](double q) { return 1 / (2 * q * q) + p.value(q) / f.Q; };
    const double h = 1e-4 * f.q_o;
    CHECK(E(f.q_o + h) + E(f.q_o - h) - 2 * E(f.q_o) > 0);
    CHECK(std::abs(E(f.q_o + h) - E(f.q_o - h)) < 1e-6 * std::abs(E(f.q_o)));
  }
}

TEST_CASE("frames of degenerate partners are identical") {
  const PotentialModel<> p(0.5, 5.0, 1.9);
  for (int l = 1; l <= 3; ++l) {
    const auto a = solve_qo(p, StateSpec{1, l, 3});
    const auto b = solve_qo(p, StateSpec{1, l - 1, 5});
    CHECK(a.q_o == b.q_o);
    CHECK(a.w == b.w);
    CHECK(a.beta == b.beta);
    CHECK(a.lbar == b.lbar);
    CHECK(a.Q == b.Q);
    CHECK(a.B == b.B);
  }
}

TEST_CASE("no classical minimum") {
  CHECK_THROWS_AS(solve_qo(PotentialModel<>(0.5, 0.0, 2.0), 0, -3.0), NoClassicalMinimum);
}
