#include <cmath>
#include <cstdio>
#include <filesystem>

#include <doctest.h>

#include "jacobi_scatter/coefficients.hpp"
#include "jacobi_scatter/errors.hpp"

using namespace jacobi_scatter;

TEST_CASE("jacobi family recovers the free operator at (1/2,1/2)") {
  const auto m = jacobi_family(0.5, 0.5);
  for (long n = 0; n < 40; ++n) {
    CHECK(m.a(n) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m.b(n) == doctest::Approx(0.0).epsilon(1e-15));
  }
  CHECK(m.decay_class() == DecayClass::finite_support);
}

TEST_CASE("jacobi family degenerate cases at |alpha|=|beta|=1/2") {
  const auto m2 = jacobi_family(-0.5, -0.5);
  CHECK(m2.a(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  for (long n = 1; n < 20; ++n) CHECK(m2.a(n) == doctest::Approx(0.5));
  for (long n = 0; n < 20; ++n) CHECK(m2.b(n) == doctest::Approx(0.0));

  // rank-one case: the n=0 override of b gives (beta-alpha)/2, the value
  // consistent with Delta = 1 - 2 b_0 zeta = 1 + zeta
  const auto m3 = jacobi_family(0.5, -0.5);
  CHECK(m3.b(0) == doctest::Approx(-0.5).epsilon(1e-15));
  for (long n = 1; n < 20; ++n) CHECK(m3.b(n) == doctest::Approx(0.0));
  for (long n = 0; n < 20; ++n) CHECK(m3.a(n) == doctest::Approx(0.5));
}

TEST_CASE("jacobi tail law a_n - 1/2 = O(n^-2)") {
  const auto m = jacobi_family(0.3, -0.2);
  const double c = (1.0 - 2.0 * 0.09 - 2.0 * 0.04) / 16.0;
  for (long n : {100L, 1000L, 10000L}) {
    const double da = m.a(n) - 0.5;
    CHECK(std::abs(da * n * n - c) < 10.0 / n);
  }
  CHECK_THROWS_AS(jacobi_family(-1.0, 0.0), InvalidParameter);
}

TEST_CASE("pollaczek coefficients") {
  const auto m = pollaczek_family(1.0, 0.0);
  CHECK(m.a(0) == doctest::Approx(1.0 / std::sqrt(15.0)).epsilon(1e-15));
  CHECK(m.b(0) == doctest::Approx(0.0));
  const auto m2 = pollaczek_family(1.0, 0.5);
  CHECK(m2.b(0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  // a_n = 1/2 - alpha/(2n) + O(n^-2)
  for (long n : {500L, 5000L}) {
    CHECK(std::abs(m.a(n) - 0.5 + 1.0 / (2.0 * n)) < 2.0 / double(n * n));
  }
  CHECK(m.decay_class() == DecayClass::unclassified);
  CHECK_THROWS_AS(pollaczek_family(0.5, 0.5), InvalidParameter);
}

TEST_CASE("edge example solves (H - 1) psi = 0 by construction") {
  const auto m = edge_example(1.0, +1);
  CHECK(m.b(0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.b(1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  // residual of the eigenvector equation
  for (long n = 0; n <= 50; ++n) {
    const double psim1 = edge_example_eigenvector(1.0, +1, n - 1);
    const double psi = edge_example_eigenvector(1.0, +1, n);
    const double psip1 = edge_example_eigenvector(1.0, +1, n + 1);
    const double H_psi = 0.5 * psim1 + m.b(n) * psi + 0.5 * psip1;
    CHECK(std::abs(H_psi - psi) < 1e-14);
  }
  // b_n ~ -l(l+1)/2 n^-2 with O(n^-3) remainder (series expansion of the
  // defining ratio; the eigenvector residual above pins the construction)
  for (long n : {100L, 1000L}) {
    CHECK(std::abs(m.b(n) + 0.5 * 1.0 * 2.0 / double(n * n)) < 30.0 / double(n * n * n));
  }
  CHECK_THROWS_AS(edge_example(0.5, +1), InvalidParameter);
}

TEST_CASE("model files round-trip and validate") {
  namespace fs = std::filesystem;
  const std::string dir = fs::temp_directory_path() / "jscat_test";
  fs::create_directories(dir);

  SUBCASE("free-tail file implies finite support") {
    const std::string path = dir + "/m1.json";
    {
      std::FILE* f = std::fopen(path.c_str(), "w");
      std::fputs(R"({"a":[0.6],"b":[0.3,-0.2],"tail":"free"})", f);
      std::fclose(f);
    }
    const auto m = load_model(path);
    CHECK(m.decay_class() == DecayClass::finite_support);
    REQUIRE(m.support().has_value());
    CHECK(*m.support() == 1);
    CHECK(m.a(0) == 0.6);
    CHECK(m.a(1) == 0.5);
    CHECK(m.b(1) == -0.2);
    CHECK(m.b(2) == 0.0);
  }

  SUBCASE("nonpositive a is rejected with its index") {
    const std::string path = dir + "/m2.json";
    {
      std::FILE* f = std::fopen(path.c_str(), "w");
      std::fputs(R"({"a":[0.5,0.5,0.5,0.0],"b":[],"tail":"free"})", f);
      std::fclose(f);
    }
    CHECK_THROWS_WITH_AS(load_model(path), doctest::Contains("a(3)"), IoError);
  }

  SUBCASE("missing tail rule is rejected") {
    const std::string path = dir + "/m3.json";
    {
      std::FILE* f = std::fopen(path.c_str(), "w");
      std::fputs(R"({"a":[0.6],"b":[0.1]})", f);
      std::fclose(f);
    }
    CHECK_THROWS_AS(load_model(path), IoError);
  }

  SUBCASE("malformed json is rejected") {
    const std::string path = dir + "/m4.json";
    {
      std::FILE* f = std::fopen(path.c_str(), "w");
      std::fputs("{oops", f);
      std::fclose(f);
    }
    CHECK_THROWS_AS(load_model(path), IoError);
  }

  SUBCASE("save/load reproduces a jacobi prefix bit-exactly") {
    const auto m = jacobi_family(0.3, -0.2);
    const std::string path = dir + "/m5.json";
    save_model(m, path, 101);
    const auto back = load_model(path);
    for (long n = 0; n <= 100; ++n) {
      CHECK(back.a(n) == m.a(n));  // bit-exact
      CHECK(back.b(n) == m.b(n));
    }
  }
}

TEST_CASE("tail sums") {
  SUBCASE("free and finite support") {
    CHECK(tail_rho(free_model(), 0) == 0.0);
    const auto m = finite_support_model({0.6}, {0.3, -0.2});
    const TailBound tb(m);
    CHECK(tb.rho(0) == doctest::Approx(0.1 + 0.3 + 0.2).epsilon(1e-15));
    CHECK(tb.rho(2) == 0.0);
    CHECK(tb.truncation_index(1e-14) == 2);
  }
  SUBCASE("jacobi tail is nonincreasing with n rho_n -> const") {
    const auto m = jacobi_family(0.3, -0.2);
    const TailBound tb(m, 1 << 15);
    double prev = tb.rho(0);
    for (long n = 1; n < 200; ++n) {
      CHECK(tb.rho(n) <= prev + 1e-18);
      CHECK(tb.rho(n) >= std::abs(m.a(n) - 0.5) + std::abs(m.b(n)));
      prev = tb.rho(n);
    }
    const double r1 = 100.0 * tb.rho(100);
    const double r2 = 1000.0 * tb.rho(1000);
    const double r3 = 10000.0 * tb.rho(10000);
    CHECK(std::abs(r2 - r3) < 0.05 * r3);
    CHECK(std::abs(r1 - r3) < 0.2 * r3);
  }
  SUBCASE("unclassified models refuse") {
    CHECK_THROWS_AS(TailBound(pollaczek_family(1.0, 0.0)), DecayClassError);
  }
}

TEST_CASE("normalization product A") {
  CHECK(normalization_A(free_model()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(normalization_A(jacobi_family(-0.5, -0.5)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // A = sqrt(pi kappa) 2^{-(alpha+beta)/2}
  const double alpha = 0.3, beta = -0.2;
  const double kappa = std::exp(std::lgamma(alpha + beta + 2.0) -
                                (alpha + beta + 1.0) * std::log(2.0) -
                                std::lgamma(alpha + 1.0) - std::lgamma(beta + 1.0));
  const double target = std::sqrt(kPi * kappa) * std::pow(2.0, -(alpha + beta) / 2.0);
  const double A = normalization_A(jacobi_family(alpha, beta));
  CHECK(std::abs(A / target - 1.0) < 1e-8);
  // stability when the requested tolerance (and with it the cutoff) tightens
  const double A2 = normalization_A(jacobi_family(alpha, beta), 1e-10);
  CHECK(std::abs(A - A2) < 1e-9);
  CHECK_THROWS_AS(normalization_A(pollaczek_family(1.0, 0.0)), DecayClassError);
}
