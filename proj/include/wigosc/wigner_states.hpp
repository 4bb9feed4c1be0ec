#pragma once
// Wigner transforms of the pure states of the singular oscillator: energy
// eigenstates and the time-dependent quasi-Gaussian superposition, plus the
// grid/functional layer (normalization, purity, overlaps, marginals).
//
// Every state handled here has a Wigner function of the form
//
//   W(x,k) = Int_{-pi/2}^{pi/2} a(theta; x) cos(2 y (k + c(x))) dtheta,
//   y = x sin(theta),
//
// obtained from the defining two-sided y-integral over (-x, x) by the
// substitution y = x sin(theta).  The substitution removes the
// (x^2 - y^2)^{alpha + 1/2} endpoint behaviour for every alpha > -1 (the
// Jacobian turns it into cos^{2 alpha + 2}), and the remaining integrand is
// smooth, so one code path serves attractive and repulsive couplings alike.
// The amplitude a(theta; x) is even in theta and real; realness of W is
// therefore structural (only the cosine part of e^{2iky} ever appears).
//
// Exact phase-space derivatives come from differentiating under the integral:
// k-derivatives insert powers of y into the kernel, x-derivatives combine the
// amplitude derivative with a first sine moment.  The flow module consumes
// these moments directly; no finite differences appear anywhere outside the
// test oracles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wigosc/eigensystem.hpp"
#include "wigosc/quadrature.hpp"
#include "wigosc/specfun.hpp"

namespace wigosc {

/// Parameters of the quasi-Gaussian superposition: weight gamma > 0 and
/// dimensionless time tau.  The expansion variable is u = e^{-gamma + i tau},
/// so gamma > 0 enforces |u| < 1.
struct QuasiGaussianParams {
  double gamma;
  double tau;
  QuasiGaussianParams(double gamma_, double tau_) : gamma(gamma_), tau(tau_) {
    if (!(gamma > 0.0)) throw std::domain_error("QuasiGaussianParams: gamma must be positive");
  }
  std::complex<double> u() const { return std::polar(std::exp(-gamma), tau); }
};

/// Width parameter chi = sinh(gamma) / (cosh(gamma) - cos(tau)) > 0.
inline double chi(const QuasiGaussianParams& qp) {
  return std::sinh(qp.gamma) / (std::cosh(qp.gamma) - std::cos(qp.tau));
}

/// Tilt parameter tilde-chi = -sin(tau) / (cosh(gamma) - cos(tau)).
inline double tilde_chi(const QuasiGaussianParams& qp) {
  return -std::sin(qp.tau) / (std::cosh(qp.gamma) - std::cos(qp.tau));
}

/// The quasi-Gaussian wave function
///
///   G(x) = N e^{-i tau/2} x^{alpha+1/2} (1-u)^{-(1+alpha)}
///          exp(-((1+u)/(1-u)) x^2 / 2),          x > 0 (0 otherwise),
///
/// with N = sqrt(2 (1 - e^{-2 gamma})^{1+alpha} / Gamma(1+alpha)) fixed by
/// ||G||^2 = 1 on the half line.  Since (1+u)/(1-u) = chi - i tilde-chi, the
/// position density is the chi-width profile
///   |G(x)|^2 = 2 chi^{1+alpha} x^{2 alpha + 1} e^{-chi x^2} / Gamma(1+alpha).
inline std::complex<double> quasi_gaussian_wavefunction(const OscillatorParams& p,
                                                        const QuasiGaussianParams& qp, double x) {
  if (x <= 0.0) return {0.0, 0.0};
  const std::complex<double> u = qp.u();
  const std::complex<double> omu = 1.0 - u;
  const double ln_norm = 0.5 * (std::log(2.0) + (1.0 + p.alpha) * std::log(-std::expm1(-2.0 * qp.gamma)) -
                                ln_gamma(1.0 + p.alpha));
  const std::complex<double> shape =
      std::pow(omu, -(1.0 + p.alpha)) * std::exp(-0.5 * ((1.0 + u) / omu) * (x * x));
  return std::exp(ln_norm + (p.alpha + 0.5) * std::log(x)) *
         std::polar(1.0, -0.5 * qp.tau) * shape;
}

namespace detail {

/// Integer power by repeated multiplication (exponents stay small here).
inline double ipow(double base, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= base;
  return r;
}

}  // namespace detail

/// Base class for Wigner transforms in the theta-space form above.
/// Implementations supply the amplitude a(theta; x), its exact x-derivative,
/// the momentum tilt c(x) (zero unless the state carries a phase gradient),
/// and conservative decay radii used to bound phase-space integrals.
class WignerKernel {
 public:
  virtual ~WignerKernel() = default;

  virtual double amplitude(double theta, double x) const = 0;
  virtual double amplitude_dx(double theta, double x) const = 0;
  virtual double tilt(double /*x*/) const { return 0.0; }
  virtual double tilt_dx(double /*x*/) const { return 0.0; }

  /// x beyond which |W| < ~1e-16 everywhere (Gaussian envelope bound).
  virtual double support_radius() const = 0;
  /// |k + tilt| beyond which |W| < ~1e-16.
  virtual double momentum_radius() const = 0;
  /// Upper bound on sin(theta) outside which the amplitude at this x is
  /// negligible; trims the oscillation pre-splitting (1 = no restriction).
  virtual double sin_theta_envelope(double /*x*/) const { return 1.0; }
  /// Whether W(x, -k) = W(x, k); true whenever the tilt vanishes, since the
  /// cosine kernel is even in k.  Integrators exploit this to halve the
  /// momentum domain.
  virtual bool k_symmetric() const { return true; }
  /// d^2 ln a / d theta^2 at theta = 0.  Feeds the exact second momentum
  /// moment; every amplitude here is log-smooth and even in theta, so this
  /// single curvature fixes the quadratic Taylor term.
  virtual double amplitude_ln_theta2(double x) const = 0;

  /// Trigonometric kernel moment
  ///   M_p^{cos/sin}(x,k) = Int_{-pi/2}^{pi/2} a(theta;x) y^p trig(2y(k+c)) dtheta.
  /// Only the parity-surviving combinations (even p with cos, odd p with sin)
  /// are meaningful; both reduce to twice the [0, pi/2] integral.
  double moment(int p, bool cosine, double x, double k, double tol) const {
    return kernel_integral([this](double t, double xx) { return amplitude(t, xx); }, p, cosine, x,
                           k, tol);
  }

  /// W(x, k); exactly 0 for x <= 0 (half-line support).
  double value(double x, double k, double tol) const {
    if (x <= 0.0) return 0.0;
    return moment(0, true, x, k, tol);
  }

  /// Exact dW/dk = -2 M_1^{sin}.
  double ddk(double x, double k, double tol) const {
    return -2.0 * moment(1, false, x, k, tol);
  }

  /// Exact dW/dx: the amplitude derivative plus the phase-variation term,
  ///   dW/dx = Int a_x cos dtheta - (2 (k + c + x c') / x) M_1^{sin}.
  double ddx(double x, double k, double tol) const {
    const double amp_part = kernel_integral(
        [this](double t, double xx) { return amplitude_dx(t, xx); }, 0, true, x, k, tol);
    const double phase_part =
        -2.0 * (k + tilt(x) + x * tilt_dx(x)) / x * moment(1, false, x, k, tol);
    return amp_part + phase_part;
  }

  /// Starting segments for a [0, pi/2] theta integral whose integrand
  /// oscillates with phase amplitude `w` (the phase reached at sin = 1):
  /// half-period boundaries asin(j pi / w), restricted to the amplitude
  /// envelope.  The tail beyond the envelope gets a single coarse segment
  /// that adaptive refinement may still subdivide.
  std::vector<double> theta_breakpoints(double x, double w) const {
    const double s_env = std::clamp(sin_theta_envelope(x), 0.0, 1.0);
    std::vector<double> bps{0.0, M_PI_2};
    if (w > M_PI) {
      if (w / M_PI > 1e5)
        throw std::domain_error("WignerKernel: oscillation count out of supported range");
      if (s_env < 1.0) bps.push_back(std::asin(s_env));
      for (int j = 1;; ++j) {
        const double sj = j * M_PI / w;
        if (sj >= s_env) break;
        bps.push_back(std::asin(sj));
      }
    }
    return bps;
  }

 private:
  template <class A>
  double kernel_integral(A&& amp, int p, bool cosine, double x, double k, double tol) const {
    if (x <= 0.0) return 0.0;
    const double keff = k + tilt(x);
    auto f = [&](double theta) {
      const double y = x * std::sin(theta);
      const double phase = 2.0 * y * keff;
      return amp(theta, x) * detail::ipow(y, p) * (cosine ? std::cos(phase) : std::sin(phase));
    };
    return 2.0 *
           integrate_segments(f, theta_breakpoints(x, 2.0 * std::abs(keff) * x), tol).value;
  }
};

/// Wigner transform of the energy eigenstate phi_n.  In theta space the
/// amplitude is
///   a(theta;x) = (2 N_n^2 / pi) (x cos)^{2 alpha + 2} e^{-x^2 (1 + sin^2)}
///                L_n^alpha(x^2 (1-sin)^2) L_n^alpha(x^2 (1+sin)^2),
/// assembled through an exponential split q^2 * L * L that keeps every
/// intermediate representable at large x and n.
class EigenstateKernel final : public WignerKernel {
 public:
  EigenstateKernel(const OscillatorParams& p, int n)
      : p_(p), n_(n), ln_pref_(std::log(2.0 / M_PI) + 2.0 * eigenfunction_ln_norm(p, n)) {
    if (n < 0) throw std::domain_error("EigenstateKernel: n must be non-negative");
  }

  double amplitude(double theta, double x) const override {
    const double s = std::sin(theta), c = std::cos(theta);
    if (!(c > 0.0) || !(x > 0.0)) return 0.0;
    const double q = half_factor(s, c, x);
    return (q * laguerre(n_, p_.alpha, sq(x * (1.0 - s)))) *
           (q * laguerre(n_, p_.alpha, sq(x * (1.0 + s))));
  }

  double amplitude_dx(double theta, double x) const override {
    const double s = std::sin(theta), c = std::cos(theta);
    if (!(c > 0.0) || !(x > 0.0)) return 0.0;
    const double q = half_factor(s, c, x);
    const double zm = sq(x * (1.0 - s)), zp = sq(x * (1.0 + s));
    const double lm = laguerre(n_, p_.alpha, zm), lp = laguerre(n_, p_.alpha, zp);
    double da = (q * lm) * (q * lp) * ((2.0 * p_.alpha + 2.0) / x - 2.0 * x * (1.0 + s * s));
    if (n_ >= 1) {
      // dL_n^a/dz = -L_{n-1}^{a+1}
      const double dlm = -laguerre(n_ - 1, p_.alpha + 1.0, zm);
      const double dlp = -laguerre(n_ - 1, p_.alpha + 1.0, zp);
      da += (q * q) * 2.0 * x * (dlm * sq(1.0 - s) * lp + lm * dlp * sq(1.0 + s));
    }
    return da;
  }

  double support_radius() const override {
    return std::max(6.0, std::sqrt(2.0 * (2.0 * n_ + 1.0)) + 3.0);
  }
  double momentum_radius() const override { return support_radius(); }
  double sin_theta_envelope(double x) const override {
    // phi_n(x(1+s)) is dead once x(1+s) passes the turning point plus a
    // Gaussian margin.
    const double reach = std::sqrt(2.0 * (2.0 * n_ + 1.0)) + 6.0;
    return std::clamp(reach / x - 1.0, 0.05, 1.0);
  }
  double amplitude_ln_theta2(double x) const override {
    // ln a = const + (2a+2) ln cos - x^2 sin^2 + ln L(z-) + ln L(z+) with
    // z-+ = x^2 (1 -+ sin)^2; at theta = 0 both arguments meet at x^2 with
    // z' = -+2x^2 and z'' = 2x^2.
    const double z = x * x;
    const double l = laguerre(n_, p_.alpha, z);
    const double r1 = (n_ >= 1) ? -laguerre(n_ - 1, p_.alpha + 1.0, z) / l : 0.0;
    const double r2 = (n_ >= 2) ? laguerre(n_ - 2, p_.alpha + 2.0, z) / l : 0.0;
    return -(2.0 * p_.alpha + 2.0) - 2.0 * z + 4.0 * z * r1 + 8.0 * z * z * (r2 - r1 * r1);
  }

  const OscillatorParams& params() const { return p_; }
  int n() const { return n_; }

 private:
  static double sq(double v) { return v * v; }
  double half_factor(double s, double c, double x) const {
    return std::exp(0.5 * ln_pref_ + (p_.alpha + 1.0) * std::log(x * c) -
                    0.5 * x * x * (1.0 + s * s));
  }

  OscillatorParams p_;
  int n_;
  double ln_pref_;
};

/// Wigner transform of the quasi-Gaussian state.  The theta-space amplitude
///   a(theta;x) = (2 chi^{1+alpha} / (pi Gamma(1+alpha)))
///                (x cos)^{2 alpha + 2} e^{-chi x^2 (1 + sin^2)}
/// carries the full width information.  The local phase of G is
/// S(x) = tilde-chi x^2 / 2, and S(x-y) - S(x+y) = -2 tilde-chi x y, so the
/// defining integral oscillates in k - tilde-chi x: the momentum tilt is
/// c(x) = -tilde-chi x and the distribution is centered on the classical
/// momentum field +tilde-chi x.
class QuasiGaussianKernel final : public WignerKernel {
 public:
  QuasiGaussianKernel(const OscillatorParams& p, const QuasiGaussianParams& qp)
      : p_(p),
        chi_(chi(qp)),
        tchi_(tilde_chi(qp)),
        ln_pref_(std::log(2.0 / M_PI) + (1.0 + p.alpha) * std::log(chi_) -
                 ln_gamma(1.0 + p.alpha)) {}

  /// Construct directly from the width/tilt pair (used by tests).
  QuasiGaussianKernel(const OscillatorParams& p, double chi_value, double tilde_chi_value)
      : p_(p),
        chi_(chi_value),
        tchi_(tilde_chi_value),
        ln_pref_(std::log(2.0 / M_PI) + (1.0 + p.alpha) * std::log(chi_value) -
                 ln_gamma(1.0 + p.alpha)) {}

  double amplitude(double theta, double x) const override {
    const double s = std::sin(theta), c = std::cos(theta);
    if (!(c > 0.0) || !(x > 0.0)) return 0.0;
    return std::exp(ln_pref_ + (2.0 * p_.alpha + 2.0) * std::log(x * c) -
                    chi_ * x * x * (1.0 + s * s));
  }

  double amplitude_dx(double theta, double x) const override {
    const double s = std::sin(theta);
    return amplitude(theta, x) * ((2.0 * p_.alpha + 2.0) / x - 2.0 * chi_ * x * (1.0 + s * s));
  }

  double tilt(double x) const override { return -tchi_ * x; }
  double tilt_dx(double /*x*/) const override { return -tchi_; }

  double support_radius() const override { return std::max(6.0, std::sqrt(40.0 / chi_)); }
  double momentum_radius() const override {
    // |W| ~ exp(-(k - tilde-chi x)^2 / chi) in k; allow for the tilt sweep
    // across the position support.
    return std::sqrt(40.0 * chi_) + std::abs(tchi_) * support_radius();
  }
  double sin_theta_envelope(double x) const override {
    return std::clamp(std::sqrt(40.0 / chi_) / x, 0.05, 1.0);
  }
  bool k_symmetric() const override { return tchi_ == 0.0; }
  double amplitude_ln_theta2(double x) const override {
    return -(2.0 * p_.alpha + 2.0) - 2.0 * chi_ * x * x;
  }

 private:
  OscillatorParams p_;
  double chi_, tchi_;
  double ln_pref_;
};

/// W_n(x, k) by adaptive quadrature; exactly 0 for x <= 0.
inline double wigner_eigenstate(const OscillatorParams& p, int n, double x, double k, double tol) {
  return EigenstateKernel(p, n).value(x, k, tol);
}

enum class WignerMethod { quadrature, series };

/// Wigner function of the quasi-Gaussian state, either by theta-space
/// quadrature or by the resummed j-series
///
///   W = (2/sqrt(pi)) (Gamma(alpha+3/2)/Gamma(alpha+1)) (chi x^2)^{1+alpha}
///       e^{-chi x^2} sum_j (-1)^j (k x - tilde-chi x^2)^{2j} /
///       (j! Gamma(j+alpha+2)) 1F1(j+1/2; j+alpha+2; -chi x^2).
///
/// Each 1F1 is evaluated through Kummer's transform
/// 1F1(j+1/2; j+alpha+2; -z) = e^{-z} 1F1(alpha+3/2; j+alpha+2; z) so the
/// inner series has positive terms only; the alternating j-sum uses
/// compensated summation.  Because (kx - tilde-chi x^2)^{2j} eventually
/// overwhelms double precision, the series path defers to quadrature once
/// |k x - tilde-chi x^2| > 25 (the documented accuracy cliff).
inline double wigner_quasi_gaussian(const OscillatorParams& p, const QuasiGaussianParams& qp,
                                    double x, double k, double tol,
                                    WignerMethod method = WignerMethod::quadrature) {
  if (x <= 0.0) return 0.0;
  if (method == WignerMethod::quadrature) return QuasiGaussianKernel(p, qp).value(x, k, tol);

  const double c = chi(qp), tc = tilde_chi(qp);
  const double amp = k * x - tc * x * x;
  if (std::abs(amp) > 25.0) return QuasiGaussianKernel(p, qp).value(x, k, tol);

  const double cx2 = c * x * x;
  const double ln_pref = std::log(2.0) - 0.5 * std::log(M_PI) + ln_gamma(p.alpha + 1.5) -
                         ln_gamma(p.alpha + 1.0) + (1.0 + p.alpha) * std::log(cx2) - cx2;
  const SeriesControl inner{std::min(tol * 1e-2, 1e-12), 10000};
  const double a2 = amp * amp;
  double pow_over_fact = 1.0;  // amp^{2j} / j!
  double sum = 0.0, comp = 0.0, max_term = 0.0;
  int quiet = 0;
  constexpr int cap = 500;
  for (int j = 0; j < cap; ++j) {
    if (j > 0) pow_over_fact *= a2 / j;
    const double f11 = std::exp(-cx2) * hyp1f1(p.alpha + 1.5, p.alpha + 2.0 + j, cx2, inner);
    const double term =
        (j % 2 ? -1.0 : 1.0) * pow_over_fact * std::exp(-ln_gamma(p.alpha + 2.0 + j)) * f11;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    max_term = std::max(max_term, std::abs(term));
    if (std::abs(term) < tol * std::max(max_term, 1e-300)) {
      if (++quiet >= 3) return std::exp(ln_pref) * sum;
    } else {
      quiet = 0;
    }
  }
  throw truncation_error("wigner_quasi_gaussian: j-sum cap reached", std::exp(ln_pref) * sum, cap);
}

/// Half-plane integration domain x in (0, x_max], k in [-k_max, k_max].
struct PhaseDomain {
  double x_max;
  double k_max;
};

inline PhaseDomain default_domain(const WignerKernel& kern) {
  return {kern.support_radius(), kern.momentum_radius()};
}

inline PhaseDomain merge(const PhaseDomain& a, const PhaseDomain& b) {
  return {std::max(a.x_max, b.x_max), std::max(a.k_max, b.k_max)};
}

namespace detail {

/// Unit-length starting segmentation of [lo, hi] for adaptive refinement.
inline std::vector<double> unit_breaks(double lo, double hi) {
  std::vector<double> b{lo, hi};
  for (double v = std::ceil(lo); v < hi; v += 1.0)
    if (v > lo) b.push_back(v);
  return b;
}

}  // namespace detail

/// Iterated adaptive integral of f(x, k) over the domain (inner k, outer x).
/// Wigner functions vary on the O(1) dimensionless scale in both directions,
/// so both axes are pre-split into unit-length starting segments; adaptive
/// refinement resolves anything finer.  Set `k_even` when f(x, -k) = f(x, k)
/// to integrate the half momentum range only.
template <class F2>
double phase_space_integral(F2&& f, const PhaseDomain& dom, double tol, bool k_even = false) {
  const double inner_tol = 0.1 * tol / std::max(1.0, dom.x_max);
  auto row = [&](double x) {
    auto fk = [&](double k) { return f(x, k); };
    if (k_even)
      return 2.0 *
             integrate_segments(fk, detail::unit_breaks(0.0, dom.k_max), 0.5 * inner_tol).value;
    return integrate_segments(fk, detail::unit_breaks(-dom.k_max, dom.k_max), inner_tol).value;
  };
  return integrate_segments(row, detail::unit_breaks(0.0, dom.x_max), tol).value;
}

/// Normalization integral of a Wigner evaluable over its domain.
template <class F2>
double normalization(F2&& w, const PhaseDomain& dom, double tol, bool k_even = false) {
  return phase_space_integral(std::forward<F2>(w), dom, tol, k_even);
}

/// Quantum purity 2 pi IntInt W^2 dx dk.
template <class F2>
double purity(F2&& w, const PhaseDomain& dom, double tol, bool k_even = false) {
  auto sq = [&](double x, double k) {
    const double v = w(x, k);
    return v * v;
  };
  return 2.0 * M_PI * phase_space_integral(sq, dom, tol, k_even);
}

/// Overlap functional 2 pi IntInt W_a W_b dx dk (delta_mn for eigenstates).
template <class FA, class FB>
double overlap(FA&& wa, FB&& wb, const PhaseDomain& dom, double tol, bool k_even = false) {
  auto prod = [&](double x, double k) { return wa(x, k) * wb(x, k); };
  return 2.0 * M_PI * phase_space_integral(prod, dom, tol, k_even);
}

// ---------------------------------------------------------------------------
// Exact momentum reductions.
//
// The half-line support window makes W(x, .) decay only algebraically in
// momentum, like |k|^{-(alpha + 3/2)} from the y = +-x edge of the defining
// integral, so momentum integrals truncated at any practical k_max are
// biased far above fine tolerances (for alpha = -1/2 the normalization
// deficit falls off only like 1/k_max).  All full-line k-integrals are
// therefore done in closed form in theta space, where they are exact:
//
//   Int_R cos(2y(k+c)) dk = pi delta(y)          (Dirichlet),
//   Int_R W^2 dk = pi Int a^2 / (x cos) dtheta   (Parseval),
//
// and the window integral over |k| <= K reduces to a single oscillatory
// theta integral.  The finite-box quadratures remain available through the
// lambda-based functionals above for sampled data and mixtures.
// ---------------------------------------------------------------------------

/// Position marginal Int_R W(x, k) dk = pi a(0; x) / x, exactly: the full
/// momentum line concentrates the Dirichlet kernel at theta = 0.  It must
/// reproduce the position density |phi(x)|^2 (or |G(x)|^2).
inline double marginal_position(const WignerKernel& kern, double x) {
  if (x <= 0.0) return 0.0;
  return M_PI * kern.amplitude(0.0, x) / x;
}

/// Windowed marginal Int_{-K}^{K} W(x, k) dk as the single theta integral
///   Int dtheta a(theta; x) sin(2 y K) cos(2 y c) / y,  y = x sin(theta),
/// which tends to the full marginal as K grows.  This is the exact
/// momentum-window reduction used by the contour functionals.
inline double windowed_marginal(const WignerKernel& kern, double x, double k_half_width,
                                double tol) {
  if (x <= 0.0) return 0.0;
  if (!(k_half_width > 0.0))
    throw std::domain_error("windowed_marginal: window half-width must be positive");
  const double c = kern.tilt(x);
  auto f = [&](double theta) {
    const double y = x * std::sin(theta);
    return kern.amplitude(theta, x) * std::sin(2.0 * y * k_half_width) * std::cos(2.0 * y * c) /
           y;
  };
  // even in theta; fastest phase is 2 y (K + |c|)
  const double w = 2.0 * x * (k_half_width + std::abs(c));
  return 2.0 * integrate_segments(f, kern.theta_breakpoints(x, w), tol).value;
}

/// Momentum moments m_p(x) = Int_R k^p W(x, k) dk for p = 0, 1, 2, in closed
/// form.  With a even in theta, the Dirichlet limit gives
///   m_0 = pi a(0)/x,   m_1 = -c m_0,
///   m_2 = c^2 m_0 - (pi/4) g''(0),  g''(0) = a(0) (1 + d^2 ln a/dtheta^2|_0)
///         / x^3,
/// where g(y) = a(theta(y)) / (x cos theta) is the y-space profile.
inline double momentum_moment(const WignerKernel& kern, int p, double x) {
  if (x <= 0.0) return 0.0;
  const double m0 = M_PI * kern.amplitude(0.0, x) / x;
  if (p == 0) return m0;
  const double c = kern.tilt(x);
  if (p == 1) return -c * m0;
  if (p == 2)
    return c * c * m0 - 0.25 * m0 * (1.0 + kern.amplitude_ln_theta2(x)) / (x * x);
  throw std::domain_error("momentum_moment: only p = 0, 1, 2 have closed reductions");
}

/// Normalization IntInt W dx dk of a kernel state, with the momentum line
/// integrated exactly; reduces to the one-dimensional integral of the
/// position marginal.
inline double normalization(const WignerKernel& kern, double tol) {
  auto f = [&](double x) { return marginal_position(kern, x); };
  return integrate_segments(f, detail::unit_breaks(0.0, kern.support_radius()), tol).value;
}

/// Purity 2 pi IntInt W^2 dx dk of a kernel state via the Parseval
/// reduction: 2 pi Int dx pi Int dtheta a(theta; x)^2 / (x cos theta).
/// The theta integrand behaves like cos^{4 alpha + 3} at the edge, an
/// integrable singularity for every alpha > -1.
inline double purity(const WignerKernel& kern, double tol) {
  const double x_max = kern.support_radius();
  const double inner_tol = 0.05 * tol / std::max(1.0, x_max);
  auto row = [&](double x) {
    auto f = [&](double theta) {
      const double a = kern.amplitude(theta, x);
      return a * a / (x * std::cos(theta));
    };
    return 2.0 * M_PI * integrate_segments(f, {0.0, M_PI_2}, inner_tol).value;
  };
  return 2.0 * M_PI * integrate_segments(row, detail::unit_breaks(0.0, x_max), tol).value;
}

/// Overlap 2 pi IntInt W_a W_b dx dk of two kernel states sharing the same
/// momentum tilt (delta_mn for eigenstates of one coupling).  With equal
/// tilts the Parseval pairing is diagonal in y, giving
/// 2 pi Int dx pi Int dtheta a_a a_b / (x cos theta).
inline double overlap(const WignerKernel& ka, const WignerKernel& kb, double tol) {
  const double probe = 1.0;
  if (std::abs(ka.tilt(probe) - kb.tilt(probe)) > 1e-14)
    throw std::invalid_argument("overlap: kernels carry different momentum tilts");
  const double x_max = std::max(ka.support_radius(), kb.support_radius());
  const double inner_tol = 0.05 * tol / std::max(1.0, x_max);
  auto row = [&](double x) {
    auto f = [&](double theta) {
      return ka.amplitude(theta, x) * kb.amplitude(theta, x) / (x * std::cos(theta));
    };
    return 2.0 * M_PI * integrate_segments(f, {0.0, M_PI_2}, inner_tol).value;
  };
  return 2.0 * M_PI * integrate_segments(row, detail::unit_breaks(0.0, x_max), tol).value;
}

/// Expectation IntInt A(x, k) W(x, k) dx dk of a symbol polynomial in k,
///   A(x, k) = f0(x) + f1(x) k + f2(x) k^2,
/// using the closed momentum moments; the only quadrature left is the
/// one-dimensional x integral.
template <class F0, class F1, class F2>
double expectation(const WignerKernel& kern, F0&& f0, F1&& f1, F2&& f2, double tol) {
  auto f = [&](double x) {
    return f0(x) * momentum_moment(kern, 0, x) + f1(x) * momentum_moment(kern, 1, x) +
           f2(x) * momentum_moment(kern, 2, x);
  };
  return integrate_segments(f, detail::unit_breaks(0.0, kern.support_radius()), tol).value;
}

/// Rectangular phase-space sampling of a real function.  Nodes sit at cell
/// midpoints, so a domain starting at x = 0 still keeps every node strictly
/// inside the half line and midpoint Riemann sums approximate the integral.
struct PhaseGrid {
  double x_lo = 0.0, x_hi = 0.0;
  int nx = 0;
  double k_lo = 0.0, k_hi = 0.0;
  int nk = 0;
  std::vector<double> values;  // row-major, values[ix * nk + ik]
  std::string metadata;

  double dx() const { return (x_hi - x_lo) / nx; }
  double dk() const { return (k_hi - k_lo) / nk; }
  double x_at(int ix) const { return x_lo + (ix + 0.5) * dx(); }
  double k_at(int ik) const { return k_lo + (ik + 0.5) * dk(); }
  double at(int ix, int ik) const { return values[static_cast<std::size_t>(ix) * nk + ik]; }
};

/// Fill a PhaseGrid by a parallel map over rows.  Cells at x <= 0 are legal
/// (half-line states simply evaluate to zero there).  Every stored value must
/// be finite, and |W| must respect the dimensionless pure-state bound 1/pi
/// (up to tolerance) when `check_bound` is set; violations indicate a
/// numerical failure and are reported as exceptions, never stored.
template <class F2>
PhaseGrid fill_grid(F2&& f, double x_lo, double x_hi, int nx, double k_lo, double k_hi, int nk,
                    std::string metadata = {}, bool check_bound = true) {
  if (!(x_hi > x_lo) || nx < 1 || !(k_hi > k_lo) || nk < 1)
    throw std::domain_error("fill_grid: malformed grid geometry");
  PhaseGrid grid;
  grid.x_lo = x_lo;
  grid.x_hi = x_hi;
  grid.nx = nx;
  grid.k_lo = k_lo;
  grid.k_hi = k_hi;
  grid.nk = nk;
  grid.metadata = std::move(metadata);
  grid.values.assign(static_cast<std::size_t>(nx) * nk, 0.0);

  const unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> workers;
  std::vector<std::string> failures(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    workers.emplace_back([&, t]() {
      try {
        for (int ix = static_cast<int>(t); ix < nx; ix += static_cast<int>(n_threads)) {
          const double x = grid.x_at(ix);
          for (int ik = 0; ik < nk; ++ik)
            grid.values[static_cast<std::size_t>(ix) * nk + ik] = f(x, grid.k_at(ik));
        }
      } catch (const std::exception& e) {
        failures[t] = e.what();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& msg : failures)
    if (!msg.empty()) throw std::runtime_error("fill_grid: " + msg);

  for (double v : grid.values) {
    if (!std::isfinite(v)) throw std::runtime_error("fill_grid: non-finite value");
    if (check_bound && std::abs(v) > 1.0 / M_PI + 1e-9)
      throw std::runtime_error("fill_grid: Wigner bound |W| <= 1/pi violated");
  }
  return grid;
}

}  // namespace wigosc
