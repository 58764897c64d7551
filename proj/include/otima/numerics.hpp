#pragma once

// Quadrature and root-finding building blocks shared by the physics modules.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "otima/error.hpp"

namespace otima::numerics {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[static_cast<std::size_t>(j)];
    const double sum = f(c - dx) + f(c + dx);
    kron += kWgk[static_cast<std::size_t>(j)] * sum;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * sum;
  }
  return {kron * h, std::abs((kron - gauss) * h)};
}

template <class F>
void gk15_adapt(F& f, double a, double b, double whole, double err, double tol, int depth,
                QuadResult& acc) {
  acc.evaluations += 15;
  if (err <= tol || depth <= 0) {
    if (err > tol) acc.converged = false;
    acc.value += whole;
    acc.error += err;
    return;
  }
  const double m = 0.5 * (a + b);
  const auto [lv, le] = gk15(f, a, m);
  const auto [rv, re] = gk15(f, m, b);
  gk15_adapt(f, a, m, lv, le, 0.5 * tol, depth - 1, acc);
  gk15_adapt(f, m, b, rv, re, 0.5 * tol, depth - 1, acc);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// The tolerance is max(abs_tol, rel_tol * |estimate|) where the estimate comes
/// from a coarse 16-panel pass. Subintervals are bisected until the Kronrod-Gauss
/// difference meets their share of the tolerance.
template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0,
                     int max_depth = 40) {
  QuadResult res;
  res.converged = true;
  if (a == b) return res;
  constexpr int kPanels = 16;
  std::array<std::pair<double, double>, kPanels> panels;
  double coarse = 0.0;
  const double w = (b - a) / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + w * i, hi = (i + 1 == kPanels) ? b : a + w * (i + 1);
    panels[static_cast<std::size_t>(i)] = detail::gk15(f, lo, hi);
    coarse += panels[static_cast<std::size_t>(i)].first;
  }
  const double tol = std::max(abs_tol, rel_tol * std::abs(coarse)) / kPanels;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + w * i, hi = (i + 1 == kPanels) ? b : a + w * (i + 1);
    const auto [v, e] = panels[static_cast<std::size_t>(i)];
    detail::gk15_adapt(f, lo, hi, v, e, tol, max_depth, res);
  }
  return res;
}

/// Composite Simpson rule with `intervals` (rounded up to even) subintervals.
template <class F>
double simpson(F&& f, double a, double b, long intervals) {
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;
  const double h = (b - a) / static_cast<double>(intervals);
  double odd = 0.0, even = 0.0;
  for (long i = 1; i < intervals; ++i) {
    const double v = f(a + h * static_cast<double>(i));
    (i % 2 == 1 ? odd : even) += v;
  }
  return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Generalised Gauss-Laguerre rule for weight x^alpha e^{-x} on [0, inf).
/// Newton iteration on the Laguerre recurrence with the usual asymptotic
/// initial guesses for successive roots.
inline GaussRule gauss_laguerre(int n, double alpha) {
  if (n < 1) throw DomainError("gauss_laguerre: n must be >= 1");
  if (!(alpha > -1.0)) throw DomainError("gauss_laguerre: alpha must be > -1");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * n + 1.8 * alpha);
    } else if (i == 1) {
      z += (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai)) *
           (z - rule.nodes[static_cast<std::size_t>(i) - 2]) / (1.0 + 0.3 * alpha);
    }
    double pp = 0.0, p2 = 0.0;
    bool done = false;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2 * j - 1 + alpha - z) * p2 - (j - 1 + alpha) * p3) / j;
      }
      pp = (n * p1 - (n + alpha) * p2) / z;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::abs(z)) {
        done = true;
        break;
      }
    }
    if (!done) throw ConvergenceError("gauss_laguerre: Newton iteration did not converge");
    rule.nodes[static_cast<std::size_t>(i)] = z;
    rule.weights[static_cast<std::size_t>(i)] =
        -std::exp(std::lgamma(alpha + n) - std::lgamma(static_cast<double>(n))) / (pp * n * p2);
  }
  return rule;
}

/// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign.
///
/// Bisection keeps the bracket; a secant step from the bracket ends is tried
/// first and accepted only when it lands strictly inside the bracket.
template <class F>
double find_root(F&& f, double lo, double hi, double x_tol = 1e-12, int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw DomainError("find_root: root is not bracketed");
  for (int it = 0; it < max_iter; ++it) {
    if (hi - lo <= x_tol) return 0.5 * (lo + hi);
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    const double mid = 0.5 * (lo + hi);
    // Alternate secant and bisection so the bracket is guaranteed to shrink.
    if (it % 2 == 1 || !(x > lo && x < hi)) x = mid;
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  if (hi - lo <= x_tol) return 0.5 * (lo + hi);
  throw ConvergenceError("find_root: iteration limit reached");
}

/// Plain bisection; used as an independent cross-check of closed-form inversions.
template <class F>
double bisect(F&& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  if ((flo > 0.0) == (f(hi) > 0.0)) throw DomainError("bisect: root is not bracketed");
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace otima::numerics
