#pragma once
// Scalar special functions used throughout the library: log-gamma, associated
// Laguerre polynomials, the exponentially scaled modified Bessel function of
// the first kind, and the hypergeometric series 1F1 / 2F1.
//
// All evaluators are pure, allocation-free and reentrant.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wigosc {

/// Relative-tolerance control for the hypergeometric series evaluators.
struct SeriesControl {
  double tol = 1e-12;     ///< relative stopping tolerance
  int max_terms = 10000;  ///< hard cap on the number of summed terms
};

/// Thrown when a series evaluator exhausts its term cap before reaching tol.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& what, double best_estimate, int terms)
      : std::runtime_error(what), best_(best_estimate), terms_(terms) {}
  double best_estimate() const { return best_; }
  int terms_used() const { return terms_; }

 private:
  double best_;
  int terms_;
};

/// ln Gamma(x) for x > 0 via the Lanczos approximation (g = 7, 9 terms),
/// with the reflection formula covering 0 < x < 1/2.
/// Relative error stays below ~1e-13, so downstream integrals are
/// quadrature-limited rather than specfun-limited.
inline double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: argument must be positive");
  static const double c[9] = {0.99999999999980993,
                              676.5203681218851,
                              -1259.1392167224028,
                              771.32342877765313,
                              -176.61502916214059,
                              12.507343278686905,
                              -0.13857109526572012,
                              9.9843695780195716e-6,
                              1.5056327351493116e-7};
  if (x < 0.5) return std::log(M_PI / std::sin(M_PI * x)) - ln_gamma(1.0 - x);
  const double z = x - 1.0;
  double a = c[0];
  for (int i = 1; i < 9; ++i) a += c[i] / (z + i);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(a);
}

/// Associated Laguerre polynomial L_n^alpha(x) for alpha > -1 by the upward
/// three-term recurrence
///     (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1},
/// which is stable for the x >= 0 arguments used in this library.
inline double laguerre(int n, double alpha, double x) {
  if (n < 0) throw std::domain_error("laguerre: order must be non-negative");
  if (!(alpha > -1.0)) throw std::domain_error("laguerre: alpha must exceed -1");
  double lm1 = 1.0;  // L_0
  if (n == 0) return lm1;
  double l = 1.0 + alpha - x;  // L_1
  for (int m = 1; m < n; ++m) {
    const double lp1 = ((2.0 * m + 1.0 + alpha - x) * l - (m + alpha) * lm1) / (m + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

namespace detail {

/// ln of the scaled Bessel function via the ascending power series,
///     I_alpha(z) = (z/2)^alpha  sum_m (z^2/4)^m / (m! Gamma(m+alpha+1)),
/// suitable for small and moderate z (all terms positive, no cancellation).
inline double ln_bessel_i_series(double alpha, double z) {
  const double q = 0.25 * z * z;
  double u = 1.0, s = 1.0;
  for (int m = 1; m < 1000; ++m) {
    u *= q / (m * (m + alpha));
    s += u;
    if (u < 1e-17 * s) break;
  }
  return alpha * std::log(0.5 * z) - ln_gamma(alpha + 1.0) - z + std::log(s);
}

/// ln of the scaled Bessel function via the large-z asymptotic expansion,
///     e^{-z} I_alpha(z) ~ (2 pi z)^{-1/2} [1 - (mu-1)/(8z) + ...],  mu = 4 alpha^2.
/// Summation stops at the smallest term (standard asymptotic truncation); the
/// neglected reflection term is O(e^{-2z}), i.e. < 1e-12 for z >= 15.
inline double ln_bessel_i_asymptotic(double alpha, double z) {
  const double mu = 4.0 * alpha * alpha;
  double term = 1.0, s = 1.0;
  for (int j = 1; j <= 60; ++j) {
    const double odd = 2.0 * j - 1.0;
    const double next = term * -(mu - odd * odd) / (j * 8.0 * z);
    if (std::abs(next) >= std::abs(term)) break;  // tail started to grow
    term = next;
    s += term;
    if (std::abs(term) < 1e-16 * std::abs(s)) break;
  }
  return -0.5 * std::log(2.0 * M_PI * z) + std::log(s);
}

/// Series/asymptotic switch point; validated by an overlap-agreement test.
inline constexpr double bessel_switch_z = 15.0;

}  // namespace detail

/// ln(e^{-z} I_alpha(z)) for alpha > -1, z > 0.  Log form so that callers can
/// combine competing exponential factors analytically before exponentiating.
inline double ln_bessel_i_scaled(double alpha, double z) {
  if (!(alpha > -1.0)) throw std::domain_error("ln_bessel_i_scaled: alpha must exceed -1");
  if (!(z > 0.0)) throw std::domain_error("ln_bessel_i_scaled: z must be positive");
  return z < detail::bessel_switch_z ? detail::ln_bessel_i_series(alpha, z)
                                     : detail::ln_bessel_i_asymptotic(alpha, z);
}

/// Exponentially scaled modified Bessel function e^{-z} I_alpha(z) for
/// alpha > -1 and z >= 0.  Stays bounded for arbitrarily large z (the scaled
/// form decays like 1/sqrt(2 pi z)); relative accuracy ~1e-10 or better.
inline double bessel_i_scaled(double alpha, double z) {
  if (!(alpha > -1.0)) throw std::domain_error("bessel_i_scaled: alpha must exceed -1");
  if (z < 0.0) throw std::domain_error("bessel_i_scaled: z must be non-negative");
  if (z == 0.0) {
    if (alpha == 0.0) return 1.0;
    if (alpha > 0.0) return 0.0;
    throw std::domain_error("bessel_i_scaled: diverges at z = 0 for negative order");
  }
  return std::exp(ln_bessel_i_scaled(alpha, z));
}

/// Confluent hypergeometric function 1F1(a; b; z) by forward term recursion
/// with compensated (Kahan) accumulation.
inline double hyp1f1(double a, double b, double z, SeriesControl ctl = {}) {
  if (!(ctl.tol > 0.0) || ctl.max_terms < 1)
    throw std::domain_error("hyp1f1: SeriesControl requires tol > 0 and max_terms >= 1");
  if (b <= 0.0 && b == std::floor(b))
    throw std::domain_error("hyp1f1: b must not be a non-positive integer");
  double term = 1.0, sum = 1.0, comp = 0.0;
  for (int j = 0; j < ctl.max_terms; ++j) {
    term *= (a + j) * z / ((b + j) * (j + 1.0));
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (j > 2 && std::abs(term) <= ctl.tol * std::max(std::abs(sum), 1e-300)) return sum;
  }
  throw truncation_error("hyp1f1: term cap reached before convergence", sum, ctl.max_terms);
}

/// Gauss hypergeometric function 2F1(a, b; c; z) on 0 <= z < 1 by forward
/// term recursion.  The series converges on the whole domain (slowly as
/// z -> 1 unless c-a-b > 0); the term cap reports a truncation error.
inline double hyp2f1(double a, double b, double c, double z, SeriesControl ctl = {}) {
  if (!(ctl.tol > 0.0) || ctl.max_terms < 1)
    throw std::domain_error("hyp2f1: SeriesControl requires tol > 0 and max_terms >= 1");
  if (c <= 0.0 && c == std::floor(c))
    throw std::domain_error("hyp2f1: c must not be a non-positive integer");
  if (!(z >= 0.0 && z < 1.0)) throw std::domain_error("hyp2f1: argument must lie in [0, 1)");
  double term = 1.0, sum = 1.0, comp = 0.0;
  for (int j = 0; j < ctl.max_terms; ++j) {
    term *= (a + j) * (b + j) * z / ((c + j) * (j + 1.0));
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (j > 2 && std::abs(term) <= ctl.tol * std::max(std::abs(sum), 1e-300)) return sum;
  }
  throw truncation_error("hyp2f1: term cap reached before convergence", sum, ctl.max_terms);
}

}  // namespace wigosc
