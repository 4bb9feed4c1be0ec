#pragma once

/// End-to-end validation suite.
///
/// Twelve self-contained checks pin every closed-form claim the library rests
/// on: partition function, thermal and pure-state purities, normalization,
/// orthogonality, dual evaluation routes, continuity of the phase-space flow,
/// classical orbits, purity flux, thermal averages, and the special-function
/// identity layer.  Each check reports the worst measured deviation against a
/// fixed threshold; thresholds are part of the contract and never scale with
/// the requested quadrature tolerance, so running at a loose tolerance is a
/// deliberate fault-injection mode that must make criteria fail loudly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "wigosc/eigensystem.hpp"
#include "wigosc/flow.hpp"
#include "wigosc/specfun.hpp"
#include "wigosc/thermal.hpp"
#include "wigosc/wigner_states.hpp"

namespace wigosc {

struct CriterionResult {
  int id;
  std::string name;
  bool passed;
  double measured;   ///< worst observed deviation (criterion-specific metric)
  double threshold;  ///< fixed acceptance bound on `measured`
  double seconds;    ///< wall-clock spent on this criterion
  std::string detail;
};

namespace detail {

inline std::string strf(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

/// Deterministic xorshift64* generator so the "randomized" identity sets are
/// reproducible across runs and platforms.
class ValidationRng {
 public:
  explicit ValidationRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  double uniform(double lo, double hi) {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    const double u = static_cast<double>((state_ * 0x2545f4914f6cdd1dULL) >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int uniform_int(int lo, int hi) { return lo + static_cast<int>(uniform(0.0, hi - lo + 1.0)); }

 private:
  std::uint64_t state_;
};

}  // namespace detail

/// Runs the full validation suite at quadrature tolerance `tol` (default is
/// production accuracy; pass a loose value to verify that failures are
/// detected and reported).  Never throws: a criterion whose computation
/// throws is reported as failed with the exception text in `detail`.
inline std::vector<CriterionResult> run_acceptance(double tol = 1e-9) {
  std::vector<CriterionResult> results;

  const std::vector<double> alphas{-0.5, 0.5, 0.75, 1.5};
  const std::vector<double> betas{0.25, 0.5, 1.0, 2.0};

  auto run = [&](int id, const char* name, double threshold,
                 const std::function<double(std::string&)>& body) {
    CriterionResult r{id, name, false, std::nan(""), threshold, 0.0, ""};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.measured = body(r.detail);
      r.passed = r.measured <= threshold;
    } catch (const std::exception& e) {
      r.detail = detail::strf("exception: %s", e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    results.push_back(std::move(r));
  };

  // 1. The thermal phase-space integral carries the full partition function
  //    1/(2 sinh beta), independent of the anharmonic distortion alpha.
  run(1, "partition function, alpha-independent", 1e-6, [&](std::string& detail) {
    double worst = 0.0, wa = 0.0, wb = 0.0;
    for (double a : alphas)
      for (double b : betas) {
        const ThermalKernel bare(OscillatorParams(a), ThermalParams(b), /*normalized=*/false);
        const double dev =
            std::abs(normalization(bare, tol) / partition_function(b) - 1.0);
        if (dev > worst) worst = dev, wa = a, wb = b;
      }
    detail = detail::strf("worst rel. dev. at alpha=%g beta=%g", wa, wb);
    return worst;
  });

  // 2. Reduced thermal purity equals tanh(beta) for every alpha; the ensemble
  //    is maximally mixed as beta -> 0 and pure as beta -> infinity.
  run(2, "thermal purity equals tanh(beta)", 1e-5, [&](std::string& detail) {
    double worst = 0.0, wa = 0.0, wb = 0.0;
    for (double a : alphas)
      for (double b : betas) {
        const double dev =
            std::abs(thermal_purity(OscillatorParams(a), ThermalParams(b), tol) - std::tanh(b));
        if (dev > worst) worst = dev, wa = a, wb = b;
      }
    const double mixed = thermal_purity(OscillatorParams(1.5), ThermalParams(0.01), tol);
    const double pure = thermal_purity(OscillatorParams(1.5), ThermalParams(10.0), tol);
    detail = detail::strf("worst at alpha=%g beta=%g; P(0.01)=%.4g, |P(10)-1|=%.2e", wa, wb,
                          mixed, std::abs(pure - 1.0));
    if (!(mixed <= 0.011) || !(std::abs(pure - 1.0) <= 1e-6)) return 1.0;
    return worst;
  });

  // 3. For semi-integer alpha the purity collapses to a terminating
  //    hypergeometric form; both routes must agree.
  run(3, "semi-integer purity closed form", 1e-6, [&](std::string& detail) {
    double worst = 0.0, wa = 0.0, wb = 0.0;
    for (double a : {0.5, 1.5})
      for (double b : {0.5, 1.0, 2.0}) {
        const OscillatorParams p(a);
        const ThermalParams tp(b);
        const double dev = std::abs(thermal_purity(p, tp, tol, PurityMethod::hypergeometric) -
                                    thermal_purity(p, tp, tol, PurityMethod::reduced));
        if (dev > worst) worst = dev, wa = a, wb = b;
      }
    detail = detail::strf("worst |2F1 - reduced| at alpha=%g beta=%g", wa, wb);
    return worst;
  });

  // 4. Quasi-Gaussian and eigenstate Wigner functions have unit purity.
  run(4, "pure states have unit purity", 1e-6, [&](std::string& detail) {
    double worst = 0.0;
    std::string where = "-";
    for (double a : {0.5, 1.5})
      for (double g : {0.5, 1.0})
        for (double t : {0.0, M_PI / 2.0, M_PI}) {
          const QuasiGaussianKernel kern(OscillatorParams(a), QuasiGaussianParams(g, t));
          const double dev = std::abs(purity(kern, tol) - 1.0);
          if (dev > worst) worst = dev, where = detail::strf("qG(%g,%g,%g)", a, g, t);
        }
    for (double a : {-0.5, 1.5})
      for (int n = 0; n <= 3; ++n) {
        const EigenstateKernel kern(OscillatorParams(a), n);
        const double dev = std::abs(purity(kern, tol) - 1.0);
        if (dev > worst) worst = dev, where = detail::strf("eigen(%g, n=%d)", a, n);
      }
    detail = "worst |2pi Int W^2 - 1| at " + where;
    return worst;
  });

  // 5. Every state above integrates to one.
  run(5, "states are normalized", 1e-6, [&](std::string& detail) {
    double worst = 0.0;
    std::string where = "-";
    for (double a : alphas)
      for (double b : betas) {
        const ThermalKernel kern{OscillatorParams(a), ThermalParams(b)};
        const double dev = std::abs(normalization(kern, tol) - 1.0);
        if (dev > worst) worst = dev, where = detail::strf("thermal(%g,%g)", a, b);
      }
    for (double a : {0.5, 1.5})
      for (double g : {0.5, 1.0})
        for (double t : {0.0, M_PI / 2.0, M_PI}) {
          const QuasiGaussianKernel kern(OscillatorParams(a), QuasiGaussianParams(g, t));
          const double dev = std::abs(normalization(kern, tol) - 1.0);
          if (dev > worst) worst = dev, where = detail::strf("qG(%g,%g,%g)", a, g, t);
        }
    for (double a : {-0.5, 1.5})
      for (int n = 0; n <= 3; ++n) {
        const EigenstateKernel kern(OscillatorParams(a), n);
        const double dev = std::abs(normalization(kern, tol) - 1.0);
        if (dev > worst) worst = dev, where = detail::strf("eigen(%g, n=%d)", a, n);
      }
    detail = "worst |Int W - 1| at " + where;
    return worst;
  });

  // 6. Eigenstate overlaps reproduce delta_mn; a 50/50 mixture of the two
  //    lowest states has purity 1/2 by bilinearity.
  run(6, "eigenstate overlaps are orthonormal", 1e-6, [&](std::string& detail) {
    const OscillatorParams p(1.5);
    double worst = 0.0;
    int wm = 0, wn = 0;
    for (int m = 0; m <= 3; ++m)
      for (int n = m; n <= 3; ++n) {
        const double o = overlap(EigenstateKernel(p, m), EigenstateKernel(p, n), tol);
        const double dev = std::abs(o - (m == n ? 1.0 : 0.0));
        if (dev > worst) worst = dev, wm = m, wn = n;
      }
    const EigenstateKernel k0(p, 0), k1(p, 1);
    const double mix = 0.25 * (overlap(k0, k0, tol) + 2.0 * overlap(k0, k1, tol) +
                               overlap(k1, k1, tol));
    detail = detail::strf("worst pair (%d,%d); mixture purity dev %.2e", wm, wn,
                          std::abs(mix - 0.5));
    return std::max(worst, std::abs(mix - 0.5));
  });

  // 7. Independent evaluation routes agree pointwise: quasi-Gaussian series
  //    vs. defining quadrature, and thermal Laguerre series vs. Bessel form,
  //    on a fixed 10 x 10 grid x = 0.25..2.50, k = -2.25..2.25.
  run(7, "dual evaluation methods agree", 1e-7, [&](std::string& detail) {
    const OscillatorParams p(1.5);
    const QuasiGaussianParams qp(0.8, 1.0);
    const ThermalParams tp(1.0);
    double worst_qg = 0.0, worst_th = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double x = 0.25 * (i + 1);
      for (int j = 0; j < 10; ++j) {
        const double k = -2.25 + 0.5 * j;
        worst_qg = std::max(
            worst_qg, std::abs(wigner_quasi_gaussian(p, qp, x, k, tol, WignerMethod::series) -
                               wigner_quasi_gaussian(p, qp, x, k, tol, WignerMethod::quadrature)));
        worst_th =
            std::max(worst_th, std::abs(thermal_wigner(p, tp, x, k, tol, ThermalMethod::series) -
                                        thermal_wigner(p, tp, x, k, tol, ThermalMethod::bessel)));
      }
    }
    detail = detail::strf("quasi-Gaussian %.2e, thermal %.2e", worst_qg, worst_th);
    return std::max(worst_qg, worst_th);
  });

  // 8. Stationary continuity: for the ground state the truncated divergence
  //    k dW/dx + dJ_k/dk must stay below 1e-6 on x in [2,4], k in [-2,2] at
  //    eta_max = 6 (alpha = 3/2) and already at eta_max = 0 (alpha = -1/2),
  //    and adding Moyal orders must not hurt.  Note: the half-line boundary
  //    term ~ e^{-2x^2} sets a physical floor of order 1e-3 at x = 2 that no
  //    truncation order removes (see the flow tests for its closed form), so
  //    the bound is only attainable for x >~ 3.4.
  run(8, "stationary continuity residual", 1e-6, [&](std::string& detail) {
    const OscillatorParams p15(1.5), p05(-0.5);
    const EigenstateKernel e15(p15, 0), e05(p05, 0);
    double r6 = 0.0, r3 = 0.0, r0 = 0.0, rh = 0.0, wx = 0.0, wk = 0.0;
    for (int i = 0; i <= 8; ++i) {
      const double x = 2.0 + 0.25 * i;
      for (int j = 0; j <= 8; ++j) {
        const double k = -2.0 + 0.5 * j;
        if (k == 0.0) continue;  // residual vanishes identically there
        const double a = std::abs(continuity_residual(e15, p15, x, k, tol, 6));
        if (a > r6) r6 = a, wx = x, wk = k;
        r3 = std::max(r3, std::abs(continuity_residual(e15, p15, x, k, tol, 3)));
        r0 = std::max(r0, std::abs(continuity_residual(e15, p15, x, k, tol, 0)));
        rh = std::max(rh, std::abs(continuity_residual(e05, p05, x, k, tol, 0)));
      }
    }
    detail = detail::strf(
        "max at (%.2f,%.2f): eta6 %.2e, eta3 %.2e, eta0 %.2e, harmonic %.2e%s", wx, wk, r6, r3,
        r0, rh, r3 <= r0 ? "" : "; eta3 worse than eta0");
    if (r3 > r0) return 1.0;
    return std::max(r6, rh);
  });

  // 9. Closed-form classical orbit against a fixed-step RK4 integration of
  //    xdot = k, kdot = -x + g/x^3, plus period closure and energy drift.
  run(9, "classical orbit closed form", 1e-8, [&](std::string& detail) {
    const OscillatorParams p(1.5);
    const ClassicalOrbit orbit = classical_orbit(p, 2.0);
    double x = orbit.position(0.0), k = 0.0, worst = 0.0;
    const int segments = 32, steps = 1024;
    const double h = M_PI / (segments * steps);
    const auto force = [&](double xx) { return -xx + p.g / (xx * xx * xx); };
    for (int s = 1; s <= segments; ++s) {
      for (int i = 0; i < steps; ++i) {
        const double k1 = k, a1 = force(x);
        const double k2 = k + 0.5 * h * a1, a2 = force(x + 0.5 * h * k1);
        const double k3 = k + 0.5 * h * a2, a3 = force(x + 0.5 * h * k2);
        const double k4 = k + h * a3, a4 = force(x + h * k3);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        k += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
      }
      const double t = s * M_PI / segments;
      worst = std::max({worst, std::abs(x - orbit.position(t)),
                        std::abs(k - orbit.momentum(t))});
    }
    const double closure = std::abs(orbit.position(M_PI) - orbit.position(0.0));
    double drift = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = M_PI * i / 200.0;
      const double xt = orbit.position(t), kt = orbit.momentum(t);
      drift = std::max(drift,
                       std::abs(0.5 * (kt * kt + xt * xt + p.g / (xt * xt)) - orbit.energy));
    }
    detail = detail::strf("RK4 dev %.2e, closure %.2e, energy drift %.2e", worst, closure, drift);
    if (closure > 1e-10 || drift > 1e-10) return 1.0;
    return worst;
  });

  // 10. Purity flux through the E = 2 contour: exactly zero without Moyal
  //     corrections and for the harmonic alpha = -1/2; machine zero (and thus
  //     stable under eta_max 5 -> 7 and step doubling) for the stationary
  //     ground state at alpha = 3/2.
  run(10, "purity flux: zero and stable cases", 1e-7, [&](std::string& detail) {
    const OscillatorParams p(1.5);
    const ClassicalOrbit orbit = classical_orbit(p, 2.0);
    const EigenstateKernel ground(p, 0);
    const double f56 = purity_flux(ground, p, orbit, 5, tol, 64);
    const double f76 = purity_flux(ground, p, orbit, 7, tol, 64);
    const double f5128 = purity_flux(ground, p, orbit, 5, tol, 128);
    const QuasiGaussianKernel qg(p, QuasiGaussianParams(0.8, 1.0));
    const OscillatorParams ph(-0.5);
    const QuasiGaussianKernel qgh(ph, QuasiGaussianParams(0.8, 1.0));
    const double z_eta0 = purity_flux(qg, p, orbit, 0, tol, 64);
    const double z_harm = purity_flux(qgh, ph, classical_orbit(ph, 2.0), 5, tol, 64);
    detail = detail::strf("|F|=%.1e; d(eta)=%.1e, d(steps)=%.1e; zeros %g, %g", std::abs(f56),
                          std::abs(f56 - f76), std::abs(f56 - f5128), z_eta0, z_harm);
    if (z_eta0 != 0.0 || z_harm != 0.0) return 1.0;
    if (std::abs(f56) > 1e-15) return 1.0;  // regression pin: machine zero
    return std::max(std::abs(f56 - f76), std::abs(f56 - f5128));
  });

  // 11. The thermal energy <H> from the phase-space average equals coth(beta)
  //     = -d(ln Z)/d(beta) for every alpha.
  run(11, "thermal energy equals coth(beta)", 1e-6, [&](std::string& detail) {
    double worst = 0.0, wa = 0.0, wb = 0.0;
    for (double a : {-0.5, 1.5})
      for (double b : {0.5, 1.0, 2.0}) {
        const OscillatorParams p(a);
        const double avg = phase_space_average(
            p, ThermalParams(b), [&](double x) { return potential(p, x); },
            [](double) { return 0.0; }, [](double) { return 0.5; }, tol);
        const double dev = std::abs(avg * std::tanh(b) - 1.0);
        if (dev > worst) worst = dev, wa = a, wb = b;
      }
    detail = detail::strf("worst rel. dev. at alpha=%g beta=%g", wa, wb);
    return worst;
  });

  // 12. Special-function identity layer on deterministic pseudo-random sets:
  //     Laguerre three-term recurrence, the bilinear product expansion, and
  //     the Hille-Hardy generating sum against its Bessel closed form.
  run(12, "special-function identities", 1e-10, [&](std::string& detail) {
    detail::ValidationRng rng(20260814);
    double rec = 0.0;
    for (int i = 0; i < 100; ++i) {
      const int n = rng.uniform_int(1, 12);
      const double a = rng.uniform(-0.9, 3.0), x = rng.uniform(0.0, 12.0);
      const double lhs = (n + 1.0) * laguerre(n + 1, a, x);
      const double rhs = (2.0 * n + 1.0 + a - x) * laguerre(n, a, x) -
                         (n + a) * laguerre(n - 1, a, x);
      rec = std::max(rec, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    double bil = 0.0;
    for (int n = 0; n <= 6; ++n)
      for (int i = 0; i < 8; ++i) {
        const double a = rng.uniform(-0.9, 3.0);
        const double x = rng.uniform(0.0, 10.0), y = rng.uniform(0.0, 10.0);
        const double lhs = laguerre(n, a, x) * laguerre(n, a, y);
        double rhs = 0.0;
        for (int j = 0; j <= n; ++j)
          rhs += std::exp(ln_gamma(n + a + 1.0) - ln_gamma(n + 1.0) - ln_gamma(a + j + 1.0) -
                          ln_gamma(j + 1.0) + j * std::log(x * y)) *
                 laguerre(n - j, a + 2.0 * j, x + y);
        bil = std::max(bil, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
    double hh = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double a = rng.uniform(-0.5, 2.0), lam = rng.uniform(0.1, 0.6);
      const double z1 = rng.uniform(0.2, 4.0), z2 = rng.uniform(0.2, 4.0);
      const double arg = 2.0 * std::sqrt(lam * z1 * z2) / (1.0 - lam);
      const double rhs = std::exp(-lam * (z1 + z2) / (1.0 - lam) + arg -
                                  0.5 * a * std::log(lam * z1 * z2)) /
                         (1.0 - lam) * bessel_i_scaled(a, arg);
      double sum = 0.0;
      for (int n = 0; n <= 120; ++n)
        sum += std::exp(ln_gamma(n + 1.0) - ln_gamma(n + a + 1.0) + n * std::log(lam)) *
               laguerre(n, a, z1) * laguerre(n, a, z2);
      hh = std::max(hh, std::abs(sum - rhs) / std::abs(rhs));
    }
    detail = detail::strf("recurrence %.1e, bilinear %.1e, Hille-Hardy %.1e", rec, bil, hh);
    return std::max({rec, bil, hh});
  });

  return results;
}

/// Prints one line per criterion plus a summary; returns the failure count.
inline int print_acceptance_report(std::ostream& os, const std::vector<CriterionResult>& results) {
  int failures = 0;
  for (const auto& r : results) {
    os << detail::strf("%2d  %-42s %s  measured %-11.3e bound %-8.0e %6.2fs  %s\n", r.id,
                       r.name.c_str(), r.passed ? "PASS" : "FAIL", r.measured, r.threshold,
                       r.seconds, r.detail.c_str());
    failures += r.passed ? 0 : 1;
  }
  os << detail::strf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                     results.size());
  return failures;
}

}  // namespace wigosc
