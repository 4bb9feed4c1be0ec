#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "wigosc/quadrature.hpp"

using namespace wigosc;

TEST_CASE("integrate_finite pinned examples") {
  auto one = [](double) { return 1.0; };
  const QuadResult r1 = integrate_finite(one, 0.0, 1.0, 1e-12);
  CHECK(r1.value == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(r1.abs_error_estimate >= 0.0);
  CHECK(std::isfinite(r1.value));

  // Beta(3/2, 3/2) = pi/8, endpoint square-root behaviour on both sides
  auto beta_kernel = [](double x) { return std::sqrt(x * (1.0 - x)); };
  CHECK(integrate_finite(beta_kernel, 0.0, 1.0, 1e-11).value ==
        Catch::Approx(M_PI / 8.0).epsilon(5e-9));

  auto gauss = [](double x) { return std::exp(-x * x); };
  CHECK(integrate_finite(gauss, 0.0, 6.0, 1e-13).value ==
        Catch::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-12));

  CHECK_THROWS_AS(integrate_finite(one, 1.0, 0.0, 1e-10), std::domain_error);
}

TEST_CASE("integrate_finite additivity over random splits") {
  auto f = [](double x) { return std::cos(3.0 * x) * std::exp(0.5 * x); };
  oracle::Rng rng(201);
  for (int i = 0; i < 20; ++i) {
    double a = rng.uniform(-2.0, 2.0), c = rng.uniform(-2.0, 2.0);
    if (a > c) std::swap(a, c);
    const double b = a + (c - a) * rng.uniform(0.1, 0.9);
    const double whole = integrate_finite(f, a, c, 1e-11).value;
    const double parts =
        integrate_finite(f, a, b, 1e-11).value + integrate_finite(f, b, c, 1e-11).value;
    CHECK(whole == Catch::Approx(parts).margin(2e-9));
  }
}

TEST_CASE("integrate_semi_infinite pinned examples") {
  auto gauss = [](double x) { return std::exp(-x * x); };
  CHECK(integrate_semi_infinite(gauss, 0.0, 1e-13).value ==
        Catch::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-12));

  auto cubic = [](double x) { return x * x * x * std::exp(-2.0 * x * x); };
  CHECK(integrate_semi_infinite(cubic, 0.0, 1e-13).value == Catch::Approx(0.125).epsilon(1e-12));

  auto zero = [](double) { return 0.0; };
  CHECK(integrate_semi_infinite(zero, 0.0, 1e-12).value == 0.0);

  // shifted lower limit against the complementary error function
  CHECK(integrate_semi_infinite(gauss, 1.0, 1e-13).value ==
        Catch::Approx(0.5 * std::sqrt(M_PI) * std::erfc(1.0)).epsilon(1e-11));
}

TEST_CASE("wigner_kernel_integral matches elementary transforms") {
  auto one = [](double) { return 1.0; };
  CHECK(wigner_kernel_integral(one, 1.7, 0.0, 1e-12) == Catch::Approx(3.4).epsilon(1e-13));
  const double k0 = 2.3, x0 = 1.1;
  CHECK(wigner_kernel_integral(one, x0, k0, 1e-12) ==
        Catch::Approx(std::sin(2.0 * k0 * x0) / k0).epsilon(1e-11));

  auto gauss = [](double y) { return std::exp(-y * y); };
  CHECK(wigner_kernel_integral(gauss, 5.0, 1.0, 1e-12) ==
        Catch::Approx(std::sqrt(M_PI) * std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("wigner_kernel_integral stays accurate as the oscillation grows") {
  auto gauss = [](double y) { return std::exp(-y * y); };
  for (double k : {0.0, 1.0, 5.0, 20.0}) {
    const double ref = std::sqrt(M_PI) * std::exp(-k * k);  // full-line transform
    const double val = wigner_kernel_integral(gauss, 6.0, k, 1e-12);
    CHECK(std::abs(val - ref) <= 1e-9);
  }
}

TEST_CASE("error estimate bounds the true error on random polynomials") {
  oracle::Rng rng(202);
  int covered = 0;
  const int cases = 300;
  for (int i = 0; i < cases; ++i) {
    const int deg = rng.uniform_int(14, 25);
    std::vector<double> coef(deg + 1);
    for (double& c : coef) c = rng.uniform(-1.0, 1.0);
    double a = rng.uniform(-2.0, 1.0);
    double b = a + rng.uniform(0.5, 2.0);
    auto poly = [&](double x) {
      double v = 0.0;
      for (int d = deg; d >= 0; --d) v = v * x + coef[d];
      return v;
    };
    // exact antiderivative evaluated at the endpoints
    auto anti = [&](double x) {
      double v = 0.0;
      for (int d = deg; d >= 0; --d) v = v * x + coef[d] / (d + 1.0);
      return v * x;
    };
    const QuadResult r = integrate_finite(poly, a, b, 1e-10);
    const double truth = anti(b) - anti(a);
    if (std::abs(r.value - truth) <= r.abs_error_estimate + 1e-13 * (1.0 + std::abs(truth)))
      ++covered;
  }
  CHECK(covered >= (99 * cases) / 100);
}

TEST_CASE("non-finite integrands and divergent integrals are reported") {
  auto inv = [](double x) { return 1.0 / x; };
  CHECK_THROWS_AS(integrate_finite(inv, 0.0, 1.0, 1e-12), integration_error);

  auto kernel_nan = [](double) { return std::nan(""); };
  CHECK_THROWS_AS(integrate_finite(kernel_nan, 0.0, 1.0, 1e-10), integration_error);

  try {
    integrate_finite(inv, 0.0, 1.0, 1e-12);
  } catch (const integration_error& e) {
    CHECK(std::isfinite(e.best().value));  // best estimate still reported
    CHECK(e.best().subdivisions > 0);
  }
}

TEST_CASE("subdivision counts grow with the oscillation frequency") {
  auto gauss = [](double y) { return std::exp(-y * y); };
  // the pre-split guarantees nodes in every half-period, so higher k must
  // produce more subdivisions
  const QuadResult slow = integrate_finite([&](double y) { return gauss(y) * std::cos(2.0 * y); },
                                           0.0, 6.0, 1e-10);
  QuadResult fast = integrate_finite([&](double y) { return gauss(y) * std::cos(40.0 * y); },
                                     0.0, 6.0, 1e-10);
  CHECK(fast.subdivisions >= slow.subdivisions);
}
