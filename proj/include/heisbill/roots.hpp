#pragma once

#include <cmath>
#include <utility>

namespace heis {

/// Bisection on a bracket [lo, hi] where f(lo) and f(hi) have opposite signs
/// (or are assumed to, for open brackets whose ends are never evaluated).
/// `f_lo_negative` states the sign at the low end. Stops once the bracket is
/// narrower than `tol` or cannot be split further in floating point.
template <typename Scalar, typename F>
Scalar bisect(F&& f, Scalar lo, Scalar hi, bool f_lo_negative, Scalar tol,
              int max_iter = 400) {
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    const bool mid_negative = f(mid) < 0;
    if (mid_negative == f_lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

/// Bisection that evaluates both ends to fix the orientation. The caller
/// guarantees a sign change.
template <typename Scalar, typename F>
Scalar bisect_bracket(F&& f, Scalar lo, Scalar hi, Scalar tol, int max_iter = 400) {
  return bisect(f, lo, hi, f(lo) < 0, tol, max_iter);
}

/// Golden-section search for a minimum of a unimodal f on [lo, hi].
template <typename Scalar, typename F>
Scalar golden_section_min(F&& f, Scalar lo, Scalar hi, Scalar tol, int max_iter = 300) {
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - 1) / 2;
  Scalar x1 = hi - inv_phi * (hi - lo);
  Scalar x2 = lo + inv_phi * (hi - lo);
  Scalar f1 = f(x1);
  Scalar f2 = f(x2);
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace heis
