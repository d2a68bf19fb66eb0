#pragma once

#include <cmath>
#include <string>

#include "cmcbar/base.hpp"

namespace cmcbar {

struct RootResult {
  double root = 0.0;
  double f_root = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Bracketed hybrid root finder: secant steps alternated with bisection, so
/// the bracket width halves at least every other iteration. Requires f(lo)
/// and f(hi) of opposite sign (zero endpoint values are accepted as roots).
/// Derivative-free on purpose: the residuals fed into this are
/// quadrature-valued and expensive.
template <class F>
RootResult find_root_bracketed(F&& f, double lo, double hi, double flo, double fhi, double x_tol,
                               double f_tol, int max_iter = 200) {
  RootResult res;
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  if (flo == 0.0) {
    res.root = lo;
    return res;
  }
  if (fhi == 0.0) {
    res.root = hi;
    return res;
  }
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("find_root_bracketed: endpoints do not bracket a root");

  double a = lo, b = hi, fa = flo, fb = fhi;
  double x = 0.5 * (a + b);
  double fx = fa;
  for (int it = 1; it <= max_iter; ++it) {
    double cand;
    if (it % 2 == 1) {
      cand = b - fb * (b - a) / (fb - fa);
      const double guard = 1e-3 * (b - a);
      if (!(cand > a + guard && cand < b - guard)) cand = 0.5 * (a + b);
    } else {
      cand = 0.5 * (a + b);
    }
    x = cand;
    fx = f(x);
    res.iterations = it;
    if ((fx > 0.0) == (fa > 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    if (std::fabs(fx) <= f_tol && (b - a) <= x_tol * (1.0 + std::fabs(x))) {
      res.root = x;
      res.f_root = fx;
      return res;
    }
    if ((b - a) <= 1e-16 * (1.0 + std::fabs(x))) break;  // interval exhausted
  }
  if (std::fabs(fx) <= f_tol) {
    res.root = x;
    res.f_root = fx;
    return res;
  }
  throw ConvergenceError("find_root_bracketed: no convergence within " +
                         std::to_string(max_iter) + " iterations (|f| = " +
                         std::to_string(std::fabs(fx)) + ")");
}

template <class F>
RootResult find_root_bracketed(F&& f, double lo, double hi, double x_tol = 1e-10,
                               double f_tol = 1e-9, int max_iter = 200) {
  const double flo = f(lo);
  const double fhi = f(hi);
  return find_root_bracketed(std::forward<F>(f), lo, hi, flo, fhi, x_tol, f_tol, max_iter);
}

}  // namespace cmcbar
