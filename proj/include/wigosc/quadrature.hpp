#pragma once
// Adaptive one-dimensional quadrature built on a Gauss(7)/Kronrod(15) nested
// rule with greedy interval bisection, plus the two transforms this library
// needs on top of it: a semi-infinite map x = a + t/(1-t) and the oscillatory
// Fourier-cosine kernel integral with half-period pre-splitting.

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wigosc {

/// Result of an adaptive integration.
struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int subdivisions = 0;
};

/// Thrown when the subdivision cap is exhausted before the tolerance is met,
/// or when the integrand produces a non-finite value.  Carries the best
/// estimate obtained so far.
class integration_error : public std::runtime_error {
 public:
  integration_error(const std::string& what, QuadResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadResult& best() const { return best_; }

 private:
  QuadResult best_;
};

namespace detail {

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-index nodes.
inline constexpr double gk_x[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double gk_wk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278};
inline constexpr double gk_wg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

/// Single Gauss-Kronrod pass over [a, b]; the error estimate is the
/// (conservative) difference between the Kronrod and Gauss values.
template <class F>
Segment gk15(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * gk_x[i];
    const double fv = (i == 7) ? f(mid) : f(mid - dx) + f(mid + dx);
    kron += gk_wk[i] * fv;
    if (i % 2 == 1) gauss += gk_wg[i / 2] * fv;  // odd indices carry the Gauss-7 nodes
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace detail

/// Adaptive integration over the union of the intervals delimited by
/// `breakpoints` (sorted, deduplicated internally).  Splitting the domain up
/// front lets callers align segments with known structure (oscillation
/// half-periods, boundary layers) before the greedy refinement takes over.
/// The target is met when the summed error estimate falls below
/// max(tol * |value|, tol), i.e. tol acts as both a relative and an absolute
/// tolerance (the latter for near-zero results).
template <class F>
QuadResult integrate_segments(F&& f, std::vector<double> breakpoints, double tol,
                              int max_segments = 20000) {
  if (!(tol > 0.0)) throw std::domain_error("integrate_segments: tol must be positive");
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  if (breakpoints.size() < 2) return {0.0, 0.0, 0};

  std::priority_queue<detail::Segment> queue;
  double total = 0.0, err = 0.0;
  int count = 0;
  auto push = [&](double a, double b) {
    detail::Segment s = detail::gk15(f, a, b);
    if (!std::isfinite(s.value))
      throw integration_error("integrate_segments: integrand returned a non-finite value",
                              {total, err, count});
    total += s.value;
    err += s.error;
    queue.push(s);
    ++count;
  };
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) push(breakpoints[i], breakpoints[i + 1]);

  while (err > std::max(tol * std::abs(total), tol)) {
    if (count >= max_segments)
      throw integration_error("integrate_segments: subdivision cap reached", {total, err, count});
    detail::Segment worst = queue.top();
    if (worst.error <= 0.0) break;  // nothing left to refine
    queue.pop();
    total -= worst.value;
    err -= worst.error;
    --count;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval at floating-point resolution
      total += worst.value;
      err += worst.error;
      ++count;
      break;
    }
    push(worst.a, mid);
    push(mid, worst.b);
  }
  return {total, err, count};
}

/// Adaptive integration of f over [a, b].
template <class F>
QuadResult integrate_finite(F&& f, double a, double b, double tol) {
  if (!(a <= b)) throw std::domain_error("integrate_finite: require a <= b");
  return integrate_segments(std::forward<F>(f), {a, b}, tol);
}

/// Integration over [a, infinity) via the rational map x = a + t/(1-t),
/// t in [0, 1).  Intended for integrands with (at least) Gaussian-times-power
/// decay, for which the transformed integrand vanishes smoothly at t -> 1.
template <class F>
QuadResult integrate_semi_infinite(F&& f, double a, double tol) {
  auto mapped = [&](double t) {
    const double om = 1.0 - t;
    const double x = a + t / om;
    const double fx = f(x);
    // Underflowed Gaussian tails: avoid 0 * inf at t ~ 1.
    return fx == 0.0 ? 0.0 : fx / (om * om);
  };
  // Give the far tail its own starting segments so decay is detected early.
  return integrate_segments(mapped, {0.0, 0.5, 0.9, 0.99, 1.0}, tol);
}

/// Oscillatory Fourier-cosine integral of an even function g over [-x, x]:
///     integral dy e^{2iky} g(y)  =  2 * integral_0^x g(y) cos(2ky) dy,
/// the workhorse behind every Wigner transform on the half line.  The domain
/// is pre-split so that no initial segment exceeds half a cosine period
/// pi/(2|k|); adaptive refinement then resolves the amplitude structure.
template <class G>
double wigner_kernel_integral(G&& g, double x, double k, double tol) {
  if (!(x > 0.0)) throw std::domain_error("wigner_kernel_integral: x must be positive");
  auto f = [&](double y) { return g(y) * std::cos(2.0 * k * y); };
  std::vector<double> bps{0.0, x};
  const double ak = std::abs(k);
  if (ak > 0.0) {
    const double half_period = M_PI / (2.0 * ak);
    if (x / half_period > 1e5)
      throw std::domain_error("wigner_kernel_integral: oscillation count out of supported range");
    for (double y = half_period; y < x; y += half_period) bps.push_back(y);
  }
  return 2.0 * integrate_segments(f, std::move(bps), tol).value;
}

}  // namespace wigosc
