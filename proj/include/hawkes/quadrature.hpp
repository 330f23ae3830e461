#pragma once

#include <cmath>
#include <limits>

namespace hawkes {

namespace detail {

template <class F>
double simpson_refine(const F& f, double a, double b, double fa, double fm, double fb,
                      double whole, double rel_tol, double abs_tol, int depth, int forced) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double both = left + right;
  const double diff = both - whole;
  if (forced <= 0 && (depth <= 0 || !std::isfinite(both) ||
                      std::abs(diff) <= 15.0 * std::max(rel_tol * std::abs(both), abs_tol))) {
    return both + diff / 15.0;
  }
  return simpson_refine(f, a, m, fa, flm, fm, left, rel_tol, 0.5 * abs_tol, depth - 1, forced - 1) +
         simpson_refine(f, m, b, fm, frm, fb, right, rel_tol, 0.5 * abs_tol, depth - 1, forced - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b].  Bisects until two successive estimates on
/// a panel agree to rel_tol (or abs_tol, whichever is looser).  The first
/// `min_depth` levels are always split so narrow features are not skipped.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol = 1e-10,
                        double abs_tol = 1e-15, int max_depth = 40, int min_depth = 1) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_refine(f, a, b, fa, fm, fb, whole, rel_tol, abs_tol, max_depth, min_depth);
}

}  // namespace hawkes
