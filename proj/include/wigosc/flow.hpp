#pragma once
// Phase-space flow of the singular oscillator: Wigner currents with their
// Moyal corrections, the continuity-equation residual, classical orbits,
// and the contour/flux functionals built on them.
//
// For a Hamiltonian k^2/2 + U(x) the momentum component of the Wigner
// current is the Moyal series
//
//   J_k(x,k) = -sum_{eta >= 0} U^{(2 eta + 1)}(x) / (2 eta + 1)!
//              (-1/4)^eta  d^{2 eta} W / dk^{2 eta},
//
// and in the theta-kernel representation d^{2eta}W/dk^{2eta} =
// (-4)^eta M_{2eta}^{cos}, so every (-1/4)^eta cancels:
//
//   J_k = -sum_eta [U^{(2eta+1)} / (2eta+1)!] M_{2eta}^{cos},
//   dJ_k/dk = +2 sum_eta [U^{(2eta+1)} / (2eta+1)!] M_{2eta+1}^{sin}.
//
// No finite differences in k or x appear anywhere: all derivatives are
// exact kernel moments.  The series terminates at eta = 0 for the harmonic
// couplings alpha = +-1/2 (g = 0); otherwise successive terms fall off like
// (width/x)^{2 eta}, so truncation at eta_max is controlled in the region
// x = O(1) and beyond.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wigosc/eigensystem.hpp"
#include "wigosc/quadrature.hpp"
#include "wigosc/wigner_states.hpp"

namespace wigosc {

/// One phase-space sample of the Wigner flow.
struct FlowField {
  double w;   ///< Wigner function W(x, k)
  double jx;  ///< position current J_x = k W
  double jk;  ///< momentum current J_k truncated at eta_max
};

namespace detail {

inline double odd_factorial(int eta) {  // (2 eta + 1)!
  double f = 1.0;
  for (int i = 2; i <= 2 * eta + 1; ++i) f *= i;
  return f;
}

}  // namespace detail

/// J_x = k W.  The position current is exactly classical -- the Moyal series
/// for it terminates at the leading term because the kinetic energy is
/// quadratic -- so it needs only the already-computed value of W.
inline double current_x(double w_value, double k) { return k * w_value; }

/// J_k truncated at the Moyal order eta_max (eta_max = 0 is the classical
/// force term -U'(x) W).
inline double current_k(const WignerKernel& kern, const OscillatorParams& p, double x, double k,
                        double tol, int eta_max) {
  if (eta_max < 0) throw std::domain_error("current_k: eta_max must be non-negative");
  double jk = 0.0;
  for (int eta = 0; eta <= eta_max; ++eta)
    jk -= potential_derivative(p, x, 2 * eta + 1) / detail::odd_factorial(eta) *
          kern.moment(2 * eta, true, x, k, tol);
  return jk;
}

/// Quantum part of the momentum current, Delta J_k = J_k + U'(x) W, i.e. the
/// eta >= 1 tail of the Moyal series.  Identically zero for g = 0 and for
/// eta_max = 0.
inline double moyal_correction(const WignerKernel& kern, const OscillatorParams& p, double x,
                               double k, double tol, int eta_max) {
  if (eta_max < 0) throw std::domain_error("moyal_correction: eta_max must be non-negative");
  double djk = 0.0;
  for (int eta = 1; eta <= eta_max; ++eta)
    djk -= potential_derivative(p, x, 2 * eta + 1) / detail::odd_factorial(eta) *
           kern.moment(2 * eta, true, x, k, tol);
  return djk;
}

inline FlowField flow_field(const WignerKernel& kern, const OscillatorParams& p, double x,
                            double k, double tol, int eta_max) {
  const double w = kern.value(x, k, tol);
  return {w, current_x(w, k), current_k(kern, p, x, k, tol, eta_max)};
}

/// Stationary continuity residual r = k dW/dx + dJ_k/dk, which converges to
/// zero as eta_max grows (and is zero at eta_max = 0 already when g = 0).
/// Meaningful in the region where the Moyal series converges, i.e. x bounded
/// away from the inverse-square core.
inline double continuity_residual(const WignerKernel& kern, const OscillatorParams& p, double x,
                                  double k, double tol, int eta_max) {
  if (eta_max < 0) throw std::domain_error("continuity_residual: eta_max must be non-negative");
  double djk_dk = 0.0;
  for (int eta = 0; eta <= eta_max; ++eta)
    djk_dk += 2.0 * potential_derivative(p, x, 2 * eta + 1) / detail::odd_factorial(eta) *
              kern.moment(2 * eta + 1, false, x, k, tol);
  return k * kern.ddx(x, k, tol) + djk_dk;
}

/// Divergence of the phase-space velocity field w = J / W.  The position
/// component is w_x = J_x / W = k, whose x-derivative vanishes identically,
/// so
///
///   div w = d(J_k / W)/dk = 2 sum_eta c_eta (M_0 M_{2eta+1} - M_{2eta} M_1)
///           / M_0^2,   c_eta = U^{(2eta+1)} / (2eta+1)!,
///
/// where the eta = 0 (classical) term cancels exactly -- Liouville flow is
/// incompressible -- leaving the pure Moyal contribution.  Points where
/// |W| falls below `floor` are masked (no reliable velocity there).
inline std::optional<double> pseudo_velocity_divergence(const WignerKernel& kern,
                                                        const OscillatorParams& p, double x,
                                                        double k, double tol, int eta_max,
                                                        double floor = 1e-10) {
  if (eta_max < 0)
    throw std::domain_error("pseudo_velocity_divergence: eta_max must be non-negative");
  const double m0 = kern.value(x, k, tol);
  if (std::abs(m0) < floor) return std::nullopt;
  const double m1 = kern.moment(1, false, x, k, tol);
  double numer = 0.0;
  for (int eta = 0; eta <= eta_max; ++eta) {
    const double c = potential_derivative(p, x, 2 * eta + 1) / detail::odd_factorial(eta);
    const double m_even = (eta == 0) ? m0 : kern.moment(2 * eta, true, x, k, tol);
    const double m_odd = (eta == 0) ? m1 : kern.moment(2 * eta + 1, false, x, k, tol);
    numer += 2.0 * c * (m0 * m_odd - m_even * m1);
  }
  return numer / (m0 * m0);
}

/// Closed classical trajectory of energy E (with respect to the bare
/// Hamiltonian (k^2 + x^2 + g/x^2)/2):
///
///   x_C(t) = sqrt(E + A cos 2t),  k_C(t) = -A sin(2t) / x_C(t),
///   A = sqrt(E^2 - g),
///
/// traversed clockwise in the (x, k) plane with period pi.  (The underlying
/// angle variable psi = 2t only closes after 2 pi; all phase-space
/// observables here are pi-periodic.)
struct ClassicalOrbit {
  double energy;
  double amplitude;  // A = sqrt(E^2 - g)
  double g;

  double period() const { return M_PI; }

  double position(double t) const {
    const double x2 = energy + amplitude * std::cos(2.0 * t);
    return std::sqrt(std::max(x2, 0.0));
  }

  double momentum(double t) const {
    const double x = position(t);
    if (x == 0.0) return 0.0;  // g = 0 bounce point: k jumps +-sqrt(2E), take the midpoint
    return -amplitude * std::sin(2.0 * t) / x;
  }
};

/// Construct the classical orbit, rejecting the attractive inverse-square
/// regime (g < 0, no closed orbits through the core) and energies below the
/// potential minimum sqrt(g).
inline ClassicalOrbit classical_orbit(const OscillatorParams& p, double energy) {
  if (p.g < 0.0)
    throw std::domain_error("classical_orbit: attractive coupling (g < 0) is unsupported");
  if (!(energy >= std::sqrt(p.g)))
    throw std::domain_error("classical_orbit: no closed orbit below E = sqrt(g)");
  return {energy, std::sqrt(energy * energy - p.g), p.g};
}

/// Probability enclosed by the classical energy-E contour,
/// IntInt_{H <= E} W dx dk.  The substitution x^2 = E + A cos(psi) turns
/// the momentum half-width into K(psi) = A sin(psi) / x, so the integrand
/// vanishes smoothly at both turning points:
///
///   P(E) = Int_0^pi dpsi [A sin(psi) / (2 x)] Int_{-K}^{K} W(x, k) dk,
///
/// with the momentum window evaluated through the exact theta-space
/// reduction (windowed_marginal), which sidesteps the algebraic k-tails.
inline double contour_probability(const WignerKernel& kern, const ClassicalOrbit& orbit,
                                  double tol) {
  const double a = orbit.amplitude;
  const double energy = orbit.energy;
  if (a == 0.0) return 0.0;

  auto outer = [&](double psi) {
    const double x = std::sqrt(energy + a * std::cos(psi));
    const double kw = a * std::sin(psi) / x;
    if (!(kw > 0.0)) return 0.0;
    return 0.5 * kw * windowed_marginal(kern, x, kw, 0.02 * tol);
  };
  return integrate_segments(outer, {0.0, 0.25 * M_PI, 0.5 * M_PI, 0.75 * M_PI, M_PI}, tol).value;
}

/// Flux of the state's weight carried across the classical energy contour by
/// the quantum part of the current,
///
///   F = -Oint_C W (Delta J . n) dl
///     = -Int_0^T W(x_C, k_C) Delta J_k(x_C, k_C) (dx_C/dtau) dtau,
///
/// with n dl = (-dk, dx) the outward normal of the clockwise contour and
/// dx_C/dtau = k_C.  Delta J has no x-component, so only Delta J_k enters;
/// the classical part of the current is tangent to C and drops out exactly.
/// For stationary eigenstates the integrand is odd under tau -> pi - tau
/// (W and Delta J_k are even in k while k_C flips sign), so F vanishes:
/// the eta >= 1 corrections redistribute purity along the contour without
/// net transport through it.  The integrand is smooth and pi-periodic, so
/// the uniform trapezoid rule converges spectrally in n_steps.  `t0` shifts
/// the sampling offset (the result is invariant), and `n_periods` widens
/// the window to n_periods * pi: the orbit closes after pi, while the angle
/// psi = 2 tau needs 2 pi, so the two-period flux is exactly twice the
/// one-period flux.
inline double purity_flux(const WignerKernel& kern, const OscillatorParams& p,
                          const ClassicalOrbit& orbit, int eta_max, double tol,
                          int n_steps = 64, double t0 = 0.0, int n_periods = 1) {
  if (n_steps < 4) throw std::domain_error("purity_flux: n_steps must be at least 4");
  if (n_periods < 1) throw std::domain_error("purity_flux: n_periods must be positive");
  const double h = n_periods * orbit.period() / n_steps;
  double sum = 0.0;
  for (int j = 0; j < n_steps; ++j) {
    const double t = t0 + j * h;
    const double x = orbit.position(t), k = orbit.momentum(t);
    if (x <= 0.0) continue;
    sum += kern.value(x, k, tol) * moyal_correction(kern, p, x, k, tol, eta_max) * k;
  }
  return -h * sum;
}

}  // namespace wigosc
