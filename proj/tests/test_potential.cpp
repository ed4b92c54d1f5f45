#include <doctest.h>

#include <cmath>

#include "pslet/pslet.hpp"

using namespace pslet;

TEST_CASE("derivatives at hand-evaluated points") {
  const PotentialModel<> osc(0.5, 0.0, 2.0);
  CHECK(osc.derivative(2.0, 0) == doctest::Approx(2.0));
  CHECK(osc.derivative(1.7, 3) == 0.0);
  CHECK(osc.derivative(1.7, 7) == 0.0);

  const PotentialModel<> spiked(0.5, 500.0, 2.5);
  CHECK(spiked.derivative(1.0, 1) == doctest::Approx(-1249.0).epsilon(1e-15));
  CHECK(spiked.value(1.0) == doctest::Approx(500.5));
}

TEST_CASE("derivatives agree with central differences of the order below") {
  const PotentialModel<> models[] = {{0.5, 500.0, 2.5}, {0.5, 5.0, 1.9}, {0.3, 0.7, 0.5}, {1.0, 2.0, 3.0, -0.8}};
  for (const auto& p : models) {
    for (double q = 0.5; q <= 5.0; q += 0.25) {
      for (int n = 1; n <= 12; ++n) {
        const double h = 1e-5 * q;
        const double fd = (p.derivative(q + h, n - 1) - p.derivative(q - h, n - 1)) / (2 * h);
        const double exact = p.derivative(q, n);
        // Scale by the term magnitudes so that cancellation between them is not penalized.
        const double scale = std::abs(p.c1() * falling_factorial(2.0, n) * std::pow(q, 2.0 - n)) +
                             std::abs(p.c2() * falling_factorial(-p.b(), n) * std::pow(q, -p.b() - n)) +
                             std::abs(p.inverse_square() * falling_factorial(-2.0, n) * std::pow(q, -2.0 - n));
        INFO("q=" << q << " n=" << n);
        CHECK(std::abs(fd - exact) <= 1e-6 * std::max(std::abs(exact), scale));
      }
    }
  }
}

TEST_CASE("domain checks") {
  const PotentialModel<> p(0.5, 1.0, 2.5);
  CHECK_THROWS_AS(p.derivative(0.0, 1), DomainError);
  CHECK_THROWS_AS(p.value(-1.0), DomainError);
  CHECK_THROWS_AS(p.derivative(1.0, -1), DomainError);
  CHECK_THROWS_AS(PotentialModel<>(0.0, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(PotentialModel<>(0.5, -1.0, 2.0), DomainError);
  CHECK_THROWS_AS(PotentialModel<>(0.5, 1.0, 0.0), DomainError);
}

TEST_CASE("A refinement") {
  const PotentialModel<> p(0.5, 5.0, 2.1);

  const auto same = apply_a_refinement(p, 1.0, 0.0);
  CHECK(same.l_H == 1.0);
  CHECK(same.potential.inverse_square() == 0.0);

  const auto r = apply_a_refinement(p, 0.0, 1000.0);
  CHECK(r.l_H == doctest::Approx(-0.5 + std::sqrt(1000.25)).epsilon(1e-15));
  CHECK(std::abs(r.l_H - 31.126729) < 5e-7);
  CHECK(r.potential.inverse_square() == -500.0);
  CHECK(r.l_H >= r.l_in);
  // l_H (l_H + 1) - A = l (l + 1): the centrifugal + counter-term sum is unchanged.
  CHECK(r.l_H * (r.l_H + 1) - r.A == doctest::Approx(0.0));

  CHECK_THROWS_AS(apply_a_refinement(p, -0.5, -1.0), DomainError);

  SUBCASE("b = 2 with A = 2 c2 leaves a pure oscillator") {
    const PotentialModel<> b2(0.5, 500.0, 2.0);
    const auto rb = apply_a_refinement(b2, 0.0, 1000.0);
    for (double q : {0.3, 1.0, 4.2})
      for (int n = 0; n <= 10; ++n) CHECK(rb.potential.derivative(q, n) == PotentialModel<>(0.5, 0, 2).derivative(q, n));
  }
}
