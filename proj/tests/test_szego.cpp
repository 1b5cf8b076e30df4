#include <cmath>
#include <random>

#include <doctest.h>

#include "jacobi_scatter/errors.hpp"
#include "jacobi_scatter/szego.hpp"

using namespace jacobi_scatter;

TEST_CASE("Szego function closed forms") {
  SUBCASE("free: D0 = (2 pi)^{-1/2} (1-zeta^2)") {
    for (Complex zeta : {Complex(0.3, -0.2), Complex(0.0, 0.0), Complex(-0.7, 0.4)}) {
      const Complex d = szego_function(free_model(), zeta);
      const Complex d0 = (1.0 - zeta * zeta) / std::sqrt(2.0 * kPi);
      CHECK(std::abs(d - d0) < 5e-10);
    }
  }
  SUBCASE("weight family: sqrt(kappa) 2^{-(a+b+1)/2} (1-z)^{a+1/2} (1+z)^{b+1/2}") {
    const double a = 0.3, b = -0.2;
    const auto m = jacobi_family(a, b);
    const double kappa = std::exp(std::lgamma(a + b + 2.0) -
                                  (a + b + 1.0) * std::log(2.0) -
                                  std::lgamma(a + 1.0) - std::lgamma(b + 1.0));
    const SzegoEvaluator ev(m);
    for (Complex zeta : {Complex(0.5, 0.0), Complex(-0.3, 0.55)}) {
      const Complex closed = std::sqrt(kappa) * std::pow(2.0, -(a + b + 1.0) / 2.0) *
                             std::pow(1.0 - zeta, a + 0.5) *
                             std::pow(1.0 + zeta, b + 0.5);
      CHECK(std::abs(ev.D(zeta) - closed) < 1e-8 * (1.0 + std::abs(closed)));
    }
    // sqrt(2 pi) D(0) recovers the normalization product
    CHECK(std::abs(std::sqrt(2.0 * kPi) * ev.D(Complex(0.0, 0.0)) -
                   normalization_A(m)) < 1e-8);
  }
  SUBCASE("node doubling stability") {
    const auto m = jacobi_family(0.3, -0.2);
    const SzegoEvaluator coarse(m, 48), fine(m, 96);
    for (Complex zeta : {Complex(0.6, 0.3), Complex(-0.85, 0.1)})
      CHECK(std::abs(coarse.D(zeta) - fine.D(zeta)) < 1e-8);
  }
  SUBCASE("evaluation radius is capped") {
    const SzegoEvaluator ev(free_model());
    CHECK_THROWS_AS(ev.D(Complex(0.9995, 0.0)), EdgeProximity);
  }
}

TEST_CASE("Blaschke products") {
  CHECK(blaschke({}, Complex(0.3, 0.2)) == Complex(1.0, 0.0));
  CHECK(std::abs(blaschke({0.5}, Complex(0.0, 0.0)) - 0.5) < 1e-15);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int i = 0; i < 12; ++i) {
    const Complex bnd = blaschke({0.5, -0.8, 0.3}, std::polar(1.0, u(rng)));
    CHECK(std::abs(std::abs(bnd) - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(blaschke({0.0}, Complex(0.1, 0.0)), InvalidParameter);
}

TEST_CASE("determinant-Szego factorization") {
  std::vector<Complex> grid;
  for (double r : {0.2, 0.5, 0.8, 0.9})
    for (double t : {0.3, 1.2, 2.2, 3.6, 5.1}) grid.push_back(std::polar(r, t));
  SUBCASE("free: exact identity") {
    CHECK(factorization_residual(free_model(), grid) < 1e-8);
  }
  SUBCASE("weight family") {
    CHECK(factorization_residual(jacobi_family(0.3, -0.2), grid) < 1e-6);
  }
  SUBCASE("rank-one model exercises the Blaschke factor") {
    const auto m = finite_support_model({}, {1.0}, "rank1");
    CHECK(factorization_residual(m, grid) < 1e-6);
    const auto ev = evaluate_szego(m, Complex(0.4, 0.3));
    CHECK(std::abs(ev.B) < 1.0);  // strict inside the disc
    CHECK(ev.factorization_residual < 1e-6);
  }
}

TEST_CASE("harmonic conjugacy of log|Delta| and the weight") {
  const auto m = finite_support_model({0.6}, {0.3, -0.2}, "demo");
  const double A = normalization_A(m);
  for (double th : {0.4, 1.1, 2.0, 2.9}) {
    const double lam = std::cos(th);
    const Complex delta =
        perturbation_determinant(m, zeta_of(lam, Side::boundary_plus), 1e-12);
    const double w = weight(m, lam, 1e-12);
    const double residual =
        2.0 * std::log(std::abs(delta)) + std::log(w * std::sin(th)) -
        std::log(2.0 / kPi * A * A * std::sin(th) * std::sin(th));
    CHECK(std::abs(residual) < 1e-10);
  }
}

TEST_CASE("Case sum rules") {
  SUBCASE("free vanishes at every order") {
    for (int n : {0, 1, 2, 3}) {
      const auto r = case_sum_rule(free_model(), n);
      CHECK(std::abs(r.lhs) < 1e-12);
      CHECK(std::abs(r.rhs) < 1e-9);
    }
  }
  SUBCASE("order zero for jacobi(-1/2,-1/2) gives ln sqrt 2") {
    const auto r = case_sum_rule(jacobi_family(-0.5, -0.5), 0);
    CHECK(r.lhs == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(r.residual < 1e-6);
  }
  SUBCASE("orders 1..3 for a finite-support model with a bound state") {
    const auto m = finite_support_model({}, {1.0}, "rank1");
    const auto r1 = case_sum_rule(m, 1);
    CHECK(r1.lhs == doctest::Approx(1.0).epsilon(1e-10));  // Tr(H - H0)
    CHECK(r1.eigenvalue_term == doctest::Approx(0.75).epsilon(1e-8));
    CHECK(r1.residual < 1e-6);
    for (int n : {2, 3}) CHECK(case_sum_rule(m, n).residual < 1e-6);
  }
  SUBCASE("orders 1..3 for the demo model") {
    const auto m = finite_support_model({0.6}, {0.3, -0.2}, "demo");
    for (int n : {1, 2, 3}) CHECK(case_sum_rule(m, n).residual < 1e-6);
  }
}

TEST_CASE("Szego condition probe") {
  SUBCASE("weight family satisfies the condition") {
    const auto p = szego_condition_probe(jacobi_family(0.3, -0.2));
    CHECK(p.converges);
    CHECK(p.weak_converges);
  }
  SUBCASE("Pollaczek weights fail it at the stated rate") {
    const double a = 1.0, b = 0.0;
    const auto p = szego_condition_probe(pollaczek_family(a, b));
    CHECK_FALSE(p.converges);
    // upper-end partial integrals diverge like pi (a+b) ln(1/eps)
    CHECK(std::abs(p.growth_plus - kPi * (a + b)) < 0.05 * kPi * (a + b));
    CHECK(p.weak_converges);
  }
  SUBCASE("asymmetric parameters separate the two endpoints") {
    const auto p = szego_condition_probe(pollaczek_family(1.0, 0.5));
    CHECK(std::abs(p.growth_plus - kPi * 1.5) < 0.05 * kPi * 1.5);
    CHECK(std::abs(p.growth_minus - kPi * 0.5) < 0.1 * kPi * 0.5);
  }
}

TEST_CASE("szego evaluator rejects divergent log-weights") {
  CHECK_THROWS_AS(SzegoEvaluator(pollaczek_family(1.0, 0.0)), ConvergenceError);
}
