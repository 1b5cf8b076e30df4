#include <cmath>

#include <doctest.h>

#include "jacobi_scatter/errors.hpp"
#include "jacobi_scatter/jost.hpp"
#include "jacobi_scatter/scattering.hpp"

using namespace jacobi_scatter;

namespace {
const CoefficientModel kDemo = finite_support_model({0.6}, {0.3, -0.2}, "demo");
}

TEST_CASE("free Jost solution is exactly zeta^n") {
  const auto sp = SpectralParameter::from_zeta(Complex(0.45, -0.3));
  const auto js = jost_backward(free_model(), sp, 1e-12);
  CHECK(js.tail_error == 0.0);
  for (long n = -1; n <= 20; ++n)
    CHECK(std::abs(js.f_at(n) - std::pow(sp.zeta(), double(n))) < 1e-14);
  CHECK(std::abs(js.Omega() - 1.0) < 1e-14);
}

TEST_CASE("jacobi(-1/2,-1/2) Jost function matches Delta = 1 - zeta^2") {
  const auto m = jacobi_family(-0.5, -0.5);
  const auto sp = SpectralParameter::from_zeta(Complex(0.4, 0.0));
  CHECK(std::abs(jost_function(m, sp) - (1.0 - 0.16) / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("finite-support Omega equals the dense determinant oracle") {
  for (Complex zeta : {Complex(0.5, 0.0), Complex(-0.3, 0.4), Complex(0.1, -0.8)}) {
    const auto sp = SpectralParameter::from_zeta(zeta);
    const Complex om = jost_function(kDemo, sp, 1e-12);
    const Complex det = determinant_finite_rank(kDemo, sp);
    CHECK(std::abs(normalization_A(kDemo) * om - det) < 1e-12 * (1.0 + std::abs(det)));
  }
}

TEST_CASE("backward and Volterra routes agree") {
  for (const auto& m : {jacobi_family(0.3, -0.2), kDemo, edge_example(1.0, +1)}) {
    for (Complex zeta : {Complex(0.5, 0.0), Complex(0.3, -0.6), Complex(-0.45, 0.2)}) {
      const auto sp = SpectralParameter::from_zeta(zeta);
      const auto fb = jost_backward(m, sp, 1e-10);
      const auto fv = jost_volterra(m, sp, 1e-10);
      double worst = 0.0;
      for (long n = -1; n <= std::min(fb.m_keep, fv.m_keep); ++n)
        worst = std::max(worst, std::abs(fb.f_at(n) - fv.f_at(n)));
      CHECK(worst < 1e-10);
    }
  }
  // boundary parameter
  const auto m = jacobi_family(0.3, -0.2);
  const auto sp = zeta_of(0.3, Side::boundary_plus);
  CHECK(std::abs(jost_backward(m, sp, 1e-8).Omega() -
                 jost_volterra(m, sp, 1e-8).Omega()) < 1e-10);
}

TEST_CASE("two-route agreement on a 10x10 interior grid") {
  const auto m = jacobi_family(0.3, -0.2);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const Complex zeta(-0.81 + 0.18 * i, -0.81 + 0.18 * j);
      if (std::abs(zeta) < 1e-3 || std::abs(zeta) > 0.95) continue;
      const auto sp = SpectralParameter::from_zeta(zeta);
      const auto fb = jost_backward(m, sp, 1e-8);
      const auto fv = jost_volterra(m, sp, 1e-8);
      for (long n = -1; n <= std::min(fb.m_keep, fv.m_keep); ++n)
        worst = std::max(worst, std::abs(fb.f_at(n) - fv.f_at(n)));
    }
  CHECK(worst < 1e-7);  // 10 x tol
}

TEST_CASE("free model Volterra converges in one iteration") {
  const auto js = jost_volterra(free_model(),
                                SpectralParameter::from_zeta(Complex(0.5, 0.1)), 1e-12);
  REQUIRE(js.volterra_iterate_sup.size() >= 1);
  CHECK(js.volterra_iterate_sup[0] == 0.0);
}

TEST_CASE("Volterra kernel bound |G| <= C alpha_m, constant independent of n,m") {
  const auto m = jacobi_family(0.3, -0.2);
  const auto sp = SpectralParameter::from_zeta(Complex(0.5, 0.2));
  const TailBound tb(m);
  double cmax = 0.0, cmin = 1e300;
  for (long n : {0L, 3L, 17L, 80L}) {
    for (long off : {1L, 2L, 5L, 20L, 100L}) {
      const long mm = n + off;
      const double g = std::abs(volterra_kernel(m, sp, n, mm));
      const double ratio = g / tb.alpha(mm);
      cmax = std::max(cmax, ratio);
      if (g > 0.0) cmin = std::min(cmin, ratio);
    }
  }
  CHECK(cmax < 10.0);  // a single moderate constant covers all samples
}

TEST_CASE("Volterra iterates obey the factorial bound") {
  // |g^(k)| <= C^k/k! rho^k means successive sups contract by C rho/(k+1);
  // fit C on the first step and monitor the contraction afterwards
  const auto m = jacobi_family(0.3, -0.2);
  const auto js = jost_volterra(m, SpectralParameter::from_zeta(Complex(0.5, 0.0)),
                                1e-12);
  REQUIRE(js.volterra_iterate_sup.size() >= 4);
  const TailBound tb(m);
  const double rho = tb.rho(1);
  const double c_fit =
      2.0 * js.volterra_iterate_sup[1] / (js.volterra_iterate_sup[0] * rho);
  for (std::size_t k = 1; k + 1 < js.volterra_iterate_sup.size(); ++k) {
    const double next = js.volterra_iterate_sup[k + 1];
    const double allowed =
        1.5 * c_fit * rho / double(k + 2) * js.volterra_iterate_sup[k] + 1e-300;
    CHECK(next <= allowed);
  }
}

TEST_CASE("Omega via the polynomial representation") {
  CHECK(std::abs(jost_via_polynomials(free_model(),
                                      SpectralParameter::from_zeta(Complex(0.4, 0.1)),
                                      64) -
                 1.0) < 1e-14);
  const auto m = jacobi_family(0.3, -0.2);
  const auto sp = SpectralParameter::from_zeta(Complex(0.6, 0.0));
  CHECK(std::abs(jost_via_polynomials(m, sp, 10000) - jost_function(m, sp, 1e-10)) <
        1e-8);
  // finite support: both routes are exact
  const auto spd = SpectralParameter::from_zeta(Complex(0.35, 0.35));
  CHECK(std::abs(jost_via_polynomials(kDemo, spd, 32) - jost_function(kDemo, spd)) <
        1e-12);
}

TEST_CASE("decay law |f_n zeta^-n - 1| <= C rho_n with a stable constant") {
  const auto m = jacobi_family(0.3, -0.2);
  const auto js = jost_backward(m, SpectralParameter::from_zeta(Complex(0.5, 0.3)),
                                1e-10);
  const TailBound tb(m, js.m_keep + 2);
  double early = 0.0, late = 0.0;
  for (long n = 2; n <= js.m_keep; ++n) {
    const double rho = tb.rho(n);
    if (rho <= 0.0) continue;
    const double ratio = std::abs(js.h_at(n) - 1.0) / rho;
    if (n <= js.m_keep / 2)
      early = std::max(early, ratio);
    else
      late = std::max(late, ratio);
  }
  CHECK(late < 3.0 * std::max(early, 1e-6));
  CHECK(js.decay_constant < 50.0);
}

TEST_CASE("conjugation symmetry on the cut") {
  const auto m = jacobi_family(0.3, -0.2);
  for (double lam : {-0.6, 0.1, 0.8}) {
    const auto fp = jost_backward(m, zeta_of(lam, Side::boundary_plus), 1e-10);
    const auto fm = jost_backward(m, zeta_of(lam, Side::boundary_minus), 1e-10);
    double worst = 0.0;
    for (long n = -1; n <= 40; ++n)
      worst = std::max(worst, std::abs(fm.f_at(n) - std::conj(fp.f_at(n))));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("coefficient cutoff convergence of the Jost solution") {
  // power tail with summable first moments
  TailRule rule;
  rule.kind = TailRule::Kind::power;
  rule.a_coef = 0.1;
  rule.b_coef = 0.05;
  rule.exponent = 3.0;
  const auto m = explicit_model({}, {}, rule, DecayClass::first_moment, "p3");
  const auto sp = SpectralParameter::from_zeta(Complex(0.5, 0.2));
  const Complex f0 = jost_backward(m, sp, 1e-13).f_at(0);
  double prev = 1e300;
  for (long N : {64L, 128L, 256L, 512L, 1024L}) {
    std::vector<double> a, b;
    fill_coefficients(m, N, a, b);
    const auto mN = finite_support_model(a, b, "p3cut");
    const double err = std::abs(jost_backward(mN, sp, 1e-13).f_at(0) - f0);
    CHECK(err < prev * 1.05);
    prev = err;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("edge Jost solutions at z = +-1") {
  SUBCASE("free") {
    const auto es = edge_jost(free_model(), +1, 1e-10);
    for (long n = 0; n <= 10; ++n) CHECK(es.f_at(n) == doctest::Approx(1.0));
    CHECK(es.Omega() == doctest::Approx(1.0));
    const auto em = edge_jost(free_model(), -1, 1e-10);
    for (long n = 0; n <= 10; ++n)
      CHECK(em.f_at(n) == doctest::Approx(n % 2 == 0 ? 1.0 : -1.0));
    CHECK(em.Omega() == doctest::Approx(1.0));
  }
  SUBCASE("finite support matches the radial limit") {
    const double om1 = edge_jost(kDemo, +1, 1e-12).Omega();
    // radial approach with doubling extrapolation
    std::vector<Complex> ladder;
    for (int k = 3; k <= 8; ++k) {
      const double r = 1.0 - std::pow(2.0, -k);
      ladder.push_back(
          jost_function(kDemo, SpectralParameter::from_zeta(Complex(r, 0.0)), 1e-13));
    }
    CHECK(std::abs(extrapolate_doubling(ladder) - om1) < 1e-8);
  }
  SUBCASE("jacobi(1/2,-1/2): resonance at -1 only, Omega(1) = 2/A") {
    const auto m = jacobi_family(0.5, -0.5);
    const double A = normalization_A(m);
    CHECK(std::abs(edge_jost(m, +1, 1e-12).Omega() - 2.0 / A) < 1e-12);
    CHECK(std::abs(edge_jost(m, -1, 1e-12).Omega()) < 1e-12);
  }
  SUBCASE("decay class guard") {
    CHECK_THROWS_AS(edge_jost(jacobi_family(0.3, -0.2), +1, 1e-8), DecayClassError);
  }
}

TEST_CASE("resonance analysis") {
  SUBCASE("free has no resonances") {
    CHECK_FALSE(resonance_analysis(free_model(), +1).is_resonance);
    CHECK_FALSE(resonance_analysis(free_model(), -1).is_resonance);
  }
  SUBCASE("jacobi(-1/2,-1/2) has resonances at both edges") {
    const auto m = jacobi_family(-0.5, -0.5);
    for (int sign : {+1, -1}) {
      const auto rr = resonance_analysis(m, sign);
      CHECK(rr.is_resonance);
      // P_n = sqrt(2) T_n here, so gamma = sqrt(2)
      CHECK(rr.gamma_limit == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
      CHECK(rr.gamma_consistent);
      CHECK(rr.edge_law_residual < 1e-6);
    }
  }
  SUBCASE("jacobi(1/2,-1/2): resonance only at z = -1, gamma = 1") {
    const auto m = jacobi_family(0.5, -0.5);
    CHECK_FALSE(resonance_analysis(m, +1).is_resonance);
    const auto rr = resonance_analysis(m, -1);
    CHECK(rr.is_resonance);
    CHECK(rr.gamma_limit == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(rr.gamma_series - rr.gamma_limit) < 1e-6);
  }
}
