#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "wigosc/thermal.hpp"

using namespace wigosc;

TEST_CASE("partition function: closed form, spectral sum, limits") {
  CHECK(partition_function(1.0) == Catch::Approx(0.4254590).margin(5e-8));

  // truncated spectral sum with the geometric tail below 1e-14
  for (double beta : {0.25, 1.0, 3.0}) {
    const double lam = std::exp(-2.0 * beta);
    double sum = 0.0, w = std::exp(-beta);
    for (int n = 0; w / (1.0 - lam) > 1e-14 * sum || n == 0; ++n) {
      sum += w;
      w *= lam;
      REQUIRE(n < 20000);
    }
    CHECK(partition_function(beta) == Catch::Approx(sum).epsilon(1e-13));
  }

  // ground-state domination
  CHECK(partition_function(20.0) == Catch::Approx(std::exp(-20.0)).epsilon(1e-15));

  CHECK_THROWS_AS(partition_function(0.0), std::domain_error);
  CHECK_THROWS_AS(partition_function(-1.0), std::domain_error);
  CHECK_THROWS_AS(ThermalParams(0.0), std::domain_error);
  CHECK(ThermalParams(0.5).lambda() == Catch::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("thermal Wigner function is normalized; bare kernel integrates to Z") {
  for (double alpha : {-0.5, 0.75, 1.5}) {
    const OscillatorParams p(alpha);
    for (double beta : {0.5, 1.0, 2.0}) {
      const ThermalParams tp(beta);
      CHECK(normalization(ThermalKernel(p, tp), 1e-9) == Catch::Approx(1.0).margin(1e-7));
      // the bare spectral-sum kernel integrates to Z for every alpha: the
      // partition function does not see the anharmonic distortion
      CHECK(normalization(ThermalKernel(p, tp, false), 1e-9) ==
            Catch::Approx(partition_function(beta)).epsilon(1e-7));
    }
  }
}

TEST_CASE("thermal Wigner: spectral series agrees with the Bessel closed form") {
  const OscillatorParams p(1.5);
  const ThermalParams tp(1.0);
  const double a = thermal_wigner(p, tp, 1.2, 0.6, 1e-10, ThermalMethod::bessel);
  const double b = thermal_wigner(p, tp, 1.2, 0.6, 1e-10, ThermalMethod::series);
  CHECK(a == Catch::Approx(b).margin(1e-8));

  // a fixed grid, both methods, no shared integrand code
  double worst = 0.0;
  for (double x = 0.4; x <= 3.1; x += 0.3)
    for (double k = -2.4; k <= 2.4; k += 0.6) {
      const double wb = thermal_wigner(p, tp, x, k, 1e-10, ThermalMethod::bessel);
      const double ws = thermal_wigner(p, tp, x, k, 1e-10, ThermalMethod::series);
      worst = std::max(worst, std::abs(wb - ws));
    }
  CHECK(worst < 1e-8);

  CHECK(thermal_wigner(p, tp, 0.0, 0.3, 1e-9) == 0.0);
  CHECK(thermal_wigner(p, tp, -1.0, 0.3, 1e-9) == 0.0);

  // the series route walks ~1/beta levels and refuses pathological demands
  CHECK_THROWS_AS(thermal_wigner(p, ThermalParams(0.005), 1.0, 0.0, 1e-9, ThermalMethod::series),
                  truncation_error);
}

TEST_CASE("zero-temperature limit reproduces the ground state") {
  const OscillatorParams p(0.75);
  const ThermalParams cold(30.0);
  const EigenstateKernel ground(p, 0);
  for (double x : {0.8, 1.5})
    for (double k : {0.3, -1.0})
      CHECK(thermal_wigner(p, cold, x, k, 1e-11) ==
            Catch::Approx(ground.value(x, k, 1e-11)).margin(1e-10));
}

TEST_CASE("thermal log-amplitude curvature matches finite differences") {
  for (double alpha : {-0.5, 1.5}) {
    for (double beta : {0.5, 2.0}) {
      const ThermalKernel kern{OscillatorParams(alpha), ThermalParams(beta)};
      for (double x : {0.7, 1.6}) {
        auto stencil = [&](double h) {
          return 2.0 * (std::log(kern.amplitude(h, x)) - std::log(kern.amplitude(0.0, x))) /
                 (h * h);
        };
        const double fd = (4.0 * stencil(1e-3) - stencil(2e-3)) / 3.0;
        CHECK(kern.amplitude_ln_theta2(x) == Catch::Approx(fd).epsilon(1e-6).margin(1e-6));
      }
    }
  }
}

TEST_CASE("thermal purity equals tanh beta, with the documented limits") {
  // the central result: the reduced route lands on tanh(beta) for every
  // coupling, attractive or repulsive
  for (double alpha : {-0.5, 0.5, 1.5, 0.75}) {
    const OscillatorParams p(alpha);
    CHECK(thermal_purity(p, ThermalParams(1.0), 1e-8) ==
          Catch::Approx(std::tanh(1.0)).margin(1e-7));
  }

  const OscillatorParams p(0.75);
  CHECK(thermal_purity(p, ThermalParams(0.01), 1e-8) < 0.011);  // maximal mixing
  CHECK(thermal_purity(p, ThermalParams(10.0), 1e-8) ==
        Catch::Approx(1.0).margin(1e-6));  // pure ground state

  // strictly increasing along a beta ladder
  double prev = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double cur = thermal_purity(p, ThermalParams(0.2 * i), 1e-9);
    CHECK(cur > prev);
    prev = cur;
  }

  // coupling-independence of the decoherence pattern
  for (double beta : {0.25, 0.5, 1.0, 2.0}) {
    std::vector<double> vals;
    for (double alpha : {-0.5, 0.75, 1.5})
      vals.push_back(thermal_purity(OscillatorParams(alpha), ThermalParams(beta), 1e-8));
    for (double v : vals) CHECK(std::abs(v - vals.front()) < 2e-5);
  }
}

TEST_CASE("hypergeometric purity: agreement and domain") {
  for (double alpha : {0.5, 1.5}) {
    const OscillatorParams p(alpha);
    for (double beta : {0.5, 1.0, 2.0}) {
      const ThermalParams tp(beta);
      const double hyp = thermal_purity(p, tp, 1e-8, PurityMethod::hypergeometric);
      const double red = thermal_purity(p, tp, 1e-8, PurityMethod::reduced);
      CHECK(hyp == Catch::Approx(red).margin(1e-6));
    }
  }
  // the closed form exists only for alpha in {1/2, 3/2, 5/2, ...}
  for (double alpha : {0.75, 1.0, -0.5})
    CHECK_THROWS_AS(
        thermal_purity(OscillatorParams(alpha), ThermalParams(1.0), 1e-8,
                       PurityMethod::hypergeometric),
        std::domain_error);
}

TEST_CASE("three purity methods agree where all apply") {
  for (double alpha : {0.5, 1.5}) {
    const OscillatorParams p(alpha);
    const ThermalParams tp(1.0);
    const double red = thermal_purity(p, tp, 1e-8, PurityMethod::reduced);
    const double hyp = thermal_purity(p, tp, 1e-8, PurityMethod::hypergeometric);
    const double grd = thermal_purity(p, tp, 3e-6, PurityMethod::grid);
    CHECK(std::abs(red - hyp) < 1e-5);
    CHECK(std::abs(red - grd) < 1e-5);
    CHECK(std::abs(hyp - grd) < 1e-5);
  }
}

TEST_CASE("thermal phase-space averages") {
  auto zero = [](double) { return 0.0; };
  auto one = [](double) { return 1.0; };
  auto half = [](double) { return 0.5; };

  // <1> = 1 through the moment route
  CHECK(phase_space_average(OscillatorParams(0.75), ThermalParams(0.7), one, zero, zero, 1e-9) ==
        Catch::Approx(1.0).margin(1e-8));

  // <H> = coth(beta) for every coupling: the Weyl symbol of the Hamiltonian
  // is k^2/2 + U(x), and the ladder spectrum makes the average the
  // logarithmic derivative -d(ln Z)/d(beta)
  for (double alpha : {-0.5, 1.5}) {
    const OscillatorParams p(alpha);
    auto u_of_x = [&](double x) { return potential(p, x); };
    for (double beta : {0.5, 1.0, 2.0}) {
      const double e = phase_space_average(p, ThermalParams(beta), u_of_x, zero, half, 1e-9);
      CHECK(e == Catch::Approx(1.0 / std::tanh(beta)).margin(1e-7));
    }
  }

  // <x^2> against the spectral sum: <x^2>_n = 2n + alpha + 1 summed with
  // Boltzmann weights collapses to alpha + coth(beta)
  {
    const OscillatorParams p(-0.5);
    const double beta = 2.0;
    auto x2 = [](double x) { return x * x; };
    const double avg = phase_space_average(p, ThermalParams(beta), x2, zero, zero, 1e-9);
    const double lam = std::exp(-2.0 * beta);
    double sum = 0.0, w = std::exp(-beta) / partition_function(beta);
    for (int n = 0; n < 200; ++n) {
      sum += w * (2.0 * n + p.alpha + 1.0);
      w *= lam;
    }
    CHECK(sum == Catch::Approx(p.alpha + 1.0 / std::tanh(beta)).epsilon(1e-12));
    CHECK(avg == Catch::Approx(sum).margin(1e-8));
  }

  // the brute quadrature route exists for generic symbols; its truncated
  // momentum box leaves the algebraic tail behind, so it is only loosely
  // consistent (and is checked away from the slowest-decaying couplings)
  {
    const OscillatorParams p(1.5);
    auto unit_symbol = [](double, double) { return 1.0; };
    const double n = phase_space_average(p, ThermalParams(1.0), unit_symbol, 1e-6, true);
    CHECK(n == Catch::Approx(1.0).margin(1e-3));
  }
}
