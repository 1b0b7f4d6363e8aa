#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "budgetext/core_model.hpp"

namespace budgetext::numeric {

/// Left edge of the sublevel set {q >= lo : f(q) <= level} for a continuous
/// non-increasing f.
///
/// Requires f(lo) > level. The upper end of the bracket starts at `hi` and
/// doubles until f drops to `level` or below. Bisection stops when the bracket
/// can no longer be split in double precision, so the returned point is the
/// smallest representable q in the set up to one ulp.
template <class F>
double left_edge_bisect(F &&f, double lo, double hi, double level)
{
  if (!(hi > lo)) hi = lo + 1.0;
  int doublings = 0;
  while (f(hi) > level)
  {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 2000 || !std::isfinite(hi))
    {
      throw NumericalFailure("left_edge_bisect: no bracket found");
    }
  }
  for (;;)
  {
    double const mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > level)
    {
      lo = mid;
    }
    else
    {
      hi = mid;
    }
  }
  return hi;
}

namespace detail {

// Forces a few unconditional splits so that sampling points which happen to
// agree cannot accept a coarse estimate of a piecewise curve.
inline constexpr int kMinSimpsonDepth = 3;

template <class F>
double simpson_step(F &f, double a, double fa, double m, double fm, double b, double fb,
                    double whole, double tol, int depth, int max_depth)
{
  double const lm  = 0.5 * (a + m);
  double const rm  = 0.5 * (m + b);
  double const flm = f(lm);
  double const frm = f(rm);
  double const left  = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double const right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double const delta = left + right - whole;
  if (depth >= kMinSimpsonDepth && std::abs(delta) <= 15.0 * tol)
  {
    return left + right + delta / 15.0;
  }
  if (depth >= max_depth)
  {
    throw NumericalFailure("adaptive Simpson did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
  }
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1, max_depth) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
///
/// Throws NumericalFailure when a subinterval needs more than `max_depth`
/// bisections. Jump discontinuities inside [a, b] never converge; split the
/// range at them first.
template <class F>
double adaptive_simpson(F &&f, double a, double b, double tol, int max_depth = 40)
{
  if (!(b > a)) return 0.0;
  double const m  = 0.5 * (a + b);
  double const fa = f(a);
  double const fm = f(m);
  double const fb = f(b);
  double const whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, fa, m, fm, b, fb, whole, tol, 0, max_depth);
}

}  // namespace budgetext::numeric
