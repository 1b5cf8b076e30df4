#include <cmath>
#include <random>

#include <doctest.h>

#include "jacobi_scatter/errors.hpp"
#include "jacobi_scatter/spectral.hpp"

using namespace jacobi_scatter;

namespace {
const CoefficientModel kDemo = finite_support_model({0.6}, {0.3, -0.2}, "demo");
}

TEST_CASE("weight function") {
  CHECK(weight(free_model(), 0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-13));
  const auto m = jacobi_family(0.3, -0.2);
  for (double lam : {-0.9, -0.3, 0.0, 0.5, 0.9}) {
    const double wc = std::exp(m.log_weight(lam));
    CHECK(std::abs(weight(m, lam, 1e-10) / wc - 1.0) < 1e-8);
  }
  CHECK_THROWS_AS(weight(m, 1.0 - 1e-8), EdgeProximity);
  CHECK_THROWS_AS(weight(pollaczek_family(1.0, 0.0), 0.0), DecayClassError);
}

TEST_CASE("free resolvent closed forms") {
  const auto sp = zeta_of(Complex(0.7, 0.6));
  const Complex zeta = sp.zeta();
  CHECK(std::abs(free_resolvent_element(sp, 0, 0) - (-2.0 * zeta)) < 1e-13);
  CHECK(std::abs(resolvent_element(free_model(), sp, 0, 0) - (-2.0 * zeta)) < 1e-12);
  // symmetry in (n,m)
  CHECK(std::abs(resolvent_element(free_model(), sp, 2, 5) -
                 resolvent_element(free_model(), sp, 5, 2)) < 1e-14);
}

TEST_CASE("resolvent element equals the tridiagonal-solve oracle") {
  const auto m = jacobi_family(0.3, -0.2);
  const Complex z(0.5, 0.5);
  CHECK(std::abs(resolvent_element(m, zeta_of(z), 2, 5) -
                 resolvent_oracle(m, z, 2, 5, 2000)) < 1e-8);
  std::mt19937 rng(99);
  std::uniform_int_distribution<long> idx(0, 12);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.2, 1.5);
  for (int i = 0; i < 12; ++i) {
    const Complex zz(re(rng), im(rng));
    const long n = idx(rng), mm = idx(rng);
    CHECK(std::abs(resolvent_element(m, zeta_of(zz), n, mm) -
                   resolvent_oracle(m, zz, n, mm, 2000)) < 1e-8);
  }
}

TEST_CASE("spectral density and the Stone formula") {
  const auto m = jacobi_family(0.3, -0.2);
  // n = m = 0 reduces to the weight
  CHECK(spectral_density_element(m, 0.3, 0, 0) ==
        doctest::Approx(weight(m, 0.3)).epsilon(1e-12));
  CHECK(spectral_density_element(m, 0.3, 2, 5) ==
        doctest::Approx(spectral_density_element(m, 0.3, 5, 2)));
  // (2 pi i)^-1 resolvent jump with a small offset into the plane
  const double eps = 1e-6, lam = 0.3;
  const Complex rp = resolvent_element(m, zeta_of(Complex(lam, eps)), 1, 3, 1e-10);
  const Complex rm = resolvent_element(m, zeta_of(Complex(lam, -eps)), 1, 3, 1e-10);
  const double jump = ((rp - rm) / Complex(0.0, 2.0 * kPi)).real();
  CHECK(std::abs(jump - spectral_density_element(m, lam, 1, 3)) < 1e-4);
}

TEST_CASE("discrete spectrum") {
  SUBCASE("free and jacobi families have none") {
    CHECK(eigenvalues(free_model(), 1e-10).lambdas.empty());
    CHECK(eigenvalues(jacobi_family(0.3, -0.2), 1e-8).lambdas.empty());
  }
  SUBCASE("rank-one model: the root of 1 - 2 zeta") {
    const auto m = finite_support_model({}, {1.0}, "rank1");
    const auto ds = eigenvalues(m, 1e-11);
    REQUIRE(ds.lambdas.size() == 1);
    CHECK(ds.lambdas[0] == doctest::Approx(1.25).epsilon(1e-9));
    CHECK(ds.mus[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(ds.oracle_deviation < 1e-6);
    REQUIRE(ds.resonance_plus.has_value());
    CHECK_FALSE(*ds.resonance_plus);
  }
  SUBCASE("symmetric two-sided example") {
    const auto m = finite_support_model({}, {0.0, 1.2, -1.2}, "pm");
    const auto ds = eigenvalues(m, 1e-10);
    CHECK(ds.lambdas.size() >= 2);
    CHECK(ds.oracle_deviation < 1e-6);
  }
}

TEST_CASE("truncated-matrix oracle") {
  // 3x3 free block: eigenvalues -1/sqrt(2), 0, 1/sqrt(2)
  const auto ev = truncated_eigenvalues_oracle(free_model(), 3);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(0.0));
  CHECK(ev[2] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // no part of the free spectrum lies above z = 2
  CHECK(sturm_count_below(leading_block(free_model(), 200), 2.0) == 200);
}

TEST_CASE("mass of the spectral measure is at most one") {
  for (const auto& m :
       {free_model(), jacobi_family(0.3, -0.2), kDemo, jacobi_family(-0.5, -0.5)}) {
    const double mass = weight_mass(m, 1e-10);
    CHECK(mass <= 1.0 + 1e-6);
    CHECK(mass > 0.1);
  }
  // pure AC models integrate to exactly one
  CHECK(weight_mass(jacobi_family(0.3, -0.2)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("orthonormality under the computed weight") {
  const auto m = jacobi_family(0.3, -0.2);
  const long nmax = 8;
  double worst = 0.0;
  for (long i = 0; i <= nmax; ++i)
    for (long j = i; j <= nmax; ++j) {
      const double g = integrate_against_weight(
          m,
          [&](double lam) {
            const auto P = regular_poly_values(m, lam, nmax);
            return P[std::size_t(i)] * P[std::size_t(j)];
          },
          48, 16, 1e-10);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("stieltjes reconstruction round-trips coefficient families") {
  SUBCASE("free weight") {
    const auto rec = stieltjes_reconstruction(free_model(), 21);
    for (long n = 0; n <= 20; ++n) {
      CHECK(std::abs(rec.a[std::size_t(n)] - 0.5) < 1e-8);
      CHECK(std::abs(rec.b[std::size_t(n)]) < 1e-8);
    }
  }
  SUBCASE("jacobi closed-form weight up to degree 30") {
    const auto m = jacobi_family(0.3, -0.2);
    const auto rec = stieltjes_reconstruction(m, 31);
    for (long n = 0; n <= 30; ++n) {
      CHECK(std::abs(rec.a[std::size_t(n)] - m.a(n)) < 1e-8);
      CHECK(std::abs(rec.b[std::size_t(n)] - m.b(n)) < 1e-8);
    }
  }
  SUBCASE("full pipeline: weight of a finite-support model with empty spectrum") {
    const auto m = finite_support_model({0.55}, {0.1, -0.05}, "small");
    REQUIRE(eigenvalues(m, 1e-10).lambdas.empty());
    const auto rec = stieltjes_reconstruction(m, 12);
    for (long n = 0; n <= 11; ++n) {
      CHECK(std::abs(rec.a[std::size_t(n)] - m.a(n)) < 1e-6);
      CHECK(std::abs(rec.b[std::size_t(n)] - m.b(n)) < 1e-6);
    }
  }
}
