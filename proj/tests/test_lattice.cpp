#include <cmath>
#include <random>

#include <doctest.h>

#include "jacobi_scatter/errors.hpp"
#include "jacobi_scatter/jost.hpp"
#include "jacobi_scatter/lattice.hpp"

using namespace jacobi_scatter;

TEST_CASE("zeta map branch selection") {
  CHECK(zeta_of(Complex(2.0, 0.0)).zeta().real() ==
        doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-15));
  CHECK(zeta_of(Complex(-2.0, 0.0)).zeta().real() ==
        doctest::Approx(-2.0 + std::sqrt(3.0)).epsilon(1e-15));
  // sqrt(z^2-1) > 0 for z > 1, < 0 for z < -1
  CHECK(zeta_of(Complex(2.0, 0.0)).sqrt_z2m1().real() > 0.0);
  CHECK(zeta_of(Complex(-2.0, 0.0)).sqrt_z2m1().real() < 0.0);
  // boundary values: zeta(lambda +- i0) = exp(-+ i theta)
  const auto sp = zeta_of(0.0, Side::boundary_plus);
  CHECK(std::abs(sp.zeta() - Complex(0.0, -1.0)) < 1e-15);
  CHECK(sp.theta() == doctest::Approx(kPi / 2.0));
  const auto sm = zeta_of(0.0, Side::boundary_minus);
  CHECK(std::abs(sm.zeta() - Complex(0.0, 1.0)) < 1e-15);
  // lambda +- i0: sqrt(z^2-1) = +- i sqrt(1 - lambda^2)
  const auto sp3 = zeta_of(0.3, Side::boundary_plus);
  CHECK(std::abs(sp3.sqrt_z2m1() - Complex(0.0, std::sqrt(1.0 - 0.09))) < 1e-14);
  CHECK_THROWS_AS(zeta_of(Complex(0.5, 0.0)), InvalidParameter);
}

TEST_CASE("zeta map round trip on 200 random exterior points") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    Complex z(u(rng), u(rng));
    if (std::abs(z.imag()) < 1e-3 && std::abs(z.real()) <= 1.1)
      z += Complex(0.0, 0.5);
    const auto sp = zeta_of(z);
    CHECK(std::abs(sp.zeta()) < 1.0);
    CHECK(std::abs(sp.z() - z) < 1e-13 * (1.0 + std::abs(z)));
  }
  // boundary round trip away from the edges
  for (double lam : {-0.9, -0.2, 0.4, 0.95}) {
    const auto sp = zeta_of(lam, Side::boundary_plus);
    CHECK(std::abs(sp.z() - Complex(lam, 0.0)) < 1e-14);
  }
}

TEST_CASE("regular polynomials of the free operator") {
  const auto freeM = free_model();
  for (Complex z : {Complex(2.0, 0.0), Complex(0.3, 0.7), Complex(-1.4, 0.1)}) {
    const auto P = regular_polynomials(freeM, zeta_of(z), 4);
    CHECK(std::abs(P[0] - 1.0) == 0.0);
    CHECK(std::abs(P[1] - 2.0 * z) < 1e-14 * std::abs(2.0 * z));
    CHECK(std::abs(P[2] - (4.0 * z * z - 1.0)) < 1e-13 * (1.0 + std::abs(P[2])));
  }
  // P_n(cos th) = sin((n+1) th)/sin th on the cut
  const double lam = 0.3, th = std::acos(lam);
  const auto P = regular_polynomials(freeM, zeta_of(lam, Side::boundary_plus), 9);
  CHECK(P[7].real() == doctest::Approx(std::sin(8.0 * th) / std::sin(th)).epsilon(1e-13));
  CHECK(std::abs(P[7].imag()) < 1e-14);
}

TEST_CASE("chebyshev closed forms") {
  CHECK(std::abs(chebyshev_U(1, zeta_of(Complex(2.0, 0.0))) - 4.0) < 1e-13);
  CHECK(chebyshev_T(2, 0.3) == doctest::Approx(-0.82).epsilon(1e-15));
  // closed form vs forward recurrence at zeta = 0.5 (z = 1.25)
  const auto sp = SpectralParameter::from_zeta(Complex(0.5, 0.0));
  const auto P = regular_polynomials(free_model(), sp, 8);
  for (long n = 0; n <= 8; ++n)
    CHECK(std::abs(chebyshev_U(n, sp) - P[n]) < 1e-12 * (1.0 + std::abs(P[n])));
  CHECK_THROWS_AS(chebyshev_U(3, SpectralParameter::from_zeta(Complex(1.0 - 1e-8, 0.0))),
                  EdgeProximity);
}

TEST_CASE("wronskian is antisymmetric and constant") {
  const auto m = jacobi_family(0.3, -0.2);
  const auto sp = SpectralParameter::from_zeta(Complex(0.4, 0.25));
  const auto P = regular_polynomials(m, sp, 40);
  for (long n : {-1L, 0L, 7L, 20L}) CHECK(std::abs(wronskian(P, P, m, n)) == 0.0);
  CHECK_THROWS_AS(wronskian(P, P, m, 40), InvalidParameter);
}

TEST_CASE("operator application") {
  const auto freeM = free_model();
  const auto sp = SpectralParameter::from_zeta(Complex(0.3, 0.4));
  const auto P = regular_polynomials(freeM, sp, 30);
  const Complex z = sp.z();
  for (long n = 0; n < 29; ++n) {
    CHECK(std::abs(apply_V(freeM, P, n)) == 0.0);
    CHECK(std::abs(apply_H(freeM, P, n) - z * P[n]) <
          1e-12 * (1.0 + std::abs(z * P[n])));
  }
  // edge example eigenvector via the real overload
  const auto em = edge_example(1.0, +1);
  std::vector<double> psi;
  for (long n = 0; n <= 52; ++n) psi.push_back(edge_example_eigenvector(1.0, +1, n));
  for (long n = 0; n <= 50; ++n)
    CHECK(std::abs(apply_H(em, psi, n) - psi[std::size_t(n)]) < 1e-14);
}

TEST_CASE("growing companion solution") {
  const auto m = jacobi_family(0.3, -0.2);
  const auto sp = SpectralParameter::from_zeta(Complex(0.5, 0.2));
  const auto js = jost_backward(m, sp, 1e-12);
  const auto f = js.sequence();
  const auto g = growing_solution(m, f, 0, 200);
  // Theta at the start is the single-term sum
  CHECK(std::abs(g[0] - f[0] / (0.5 * f[-1] * f[0])) < 1e-12 * (1.0 + std::abs(g[0])));
  // {f, g} = 1 at several indices
  for (long n : {2L, 50L, 150L})
    CHECK(std::abs(wronskian(f, g, m, n) - 1.0) < 1e-10);
  // it solves the recurrence
  CHECK(recurrence_residual(m, g) < 1e-10);
  // zeta^n g_n -> 1/sqrt(z^2 - 1)
  const Complex target = 1.0 / sp.sqrt_z2m1();
  const Complex zeta = sp.zeta();
  Complex zp = std::pow(zeta, 200.0);
  CHECK(std::abs(zp * g[200] - target) < 2e-2 * std::abs(target));
  // free model: exact geometric sum
  const auto jf = jost_backward(free_model(), sp, 1e-12);
  const auto gf = growing_solution(free_model(), jf.sequence(), 0, 60);
  CHECK(std::abs(std::pow(zeta, 60.0) * gf[60] - target) <
        1e-10 + std::abs(std::pow(zeta, 120.0) * target * 2.0));
}

TEST_CASE("recurrence residual of emitted sequences stays below 1e-12") {
  for (const auto& m : {free_model(), jacobi_family(0.3, -0.2), edge_example(1.5, -1)}) {
    for (Complex zeta : {Complex(0.5, 0.0), Complex(0.1, -0.8)}) {
      const auto P = regular_polynomials(m, SpectralParameter::from_zeta(zeta), 300);
      CHECK(recurrence_residual(m, P) < 1e-12);
    }
    const auto Pb = regular_polynomials(m, zeta_of(0.37, Side::boundary_plus), 2000);
    CHECK(recurrence_residual(m, Pb) < 1e-12);
  }
}
