#pragma once

// Special functions consumed by the Mie sums, the fringe visibility and the
// collapse-model geometry factor:
//   * spherical Bessel j_l of complex argument (Miller downward recurrence)
//   * spherical Neumann y_l and Hankel h_l^(1) of real argument (upward recurrence)
//   * modified Bessel I_0, I_1, I_2 of real argument, plain, scaled and logarithmic
//   * erf

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "otima/error.hpp"

namespace otima::specfun {

using Complex = std::complex<double>;

/// Largest multipole order the recurrences are validated for.
inline constexpr int kMaxOrder = 200;
/// |Im z| beyond which sin z overflows in double precision.
inline constexpr double kMaxImag = 600.0;
inline constexpr double kMaxAbs = 1e4;

namespace detail {

inline void check_order(int ell, int max_order = kMaxOrder) {
  if (ell < 0) throw DomainError("spherical Bessel: negative order " + std::to_string(ell));
  if (ell > max_order) throw DomainError("spherical Bessel: order above supported maximum");
}

inline void check_arg(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("spherical Bessel: non-finite argument");
  if (std::abs(z.imag()) > kMaxImag || std::abs(z) > kMaxAbs)
    throw DomainError("spherical Bessel: argument beyond overflow guard");
}

// Ascending series j_n(z) = z^n/(2n+1)!! sum_k (-z^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1)).
// Only used for small |z| where it converges in a handful of terms.
inline Complex small_arg_j(int n, Complex z) {
  Complex lead{1.0, 0.0};
  for (int i = 1; i <= n; ++i) lead *= z / static_cast<double>(2 * i + 1);
  const Complex q = -0.5 * z * z;
  Complex term{1.0, 0.0};
  Complex sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * (2.0 * n + 2.0 * k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

}  // namespace detail

/// j_0(z) ... j_{ell_max}(z) for complex z.
///
/// Miller's algorithm: recur downward from ell_max + 20 + ceil(1.5|z|) with an
/// arbitrary seed, then normalise against whichever of j_0, j_1 is larger in
/// magnitude. The other one is used as a consistency check.
inline std::vector<Complex> spherical_bessel_j_sequence(int ell_max, Complex z) {
  detail::check_order(ell_max);
  detail::check_arg(z);

  std::vector<Complex> out(static_cast<std::size_t>(ell_max) + 1, Complex{0.0, 0.0});
  const double az = std::abs(z);
  if (az == 0.0) {
    out[0] = 1.0;
    return out;
  }

  // Exact low orders.
  Complex j0, j1;
  if (az < 0.5) {
    j0 = detail::small_arg_j(0, z);
    j1 = detail::small_arg_j(1, z);
  } else {
    const Complex s = std::sin(z), c = std::cos(z);
    j0 = s / z;
    j1 = s / (z * z) - c / z;
  }

  // A max(20, 1.5|z|) margin leaves ~1e-7 errors for |z| ~ 10; the sum does not.
  const int start = ell_max + 20 + static_cast<int>(std::ceil(1.5 * az));
  const int keep = std::max(ell_max, 1);
  std::vector<Complex> f(static_cast<std::size_t>(keep) + 1, Complex{0.0, 0.0});

  constexpr double kRescaleAt = 1e200;
  Complex next{0.0, 0.0};   // f_{n+1}
  Complex cur{1e-30, 0.0};  // f_n
  for (int n = start; n > 0; --n) {
    if (n <= keep) f[static_cast<std::size_t>(n)] = cur;
    const Complex prev = static_cast<double>(2 * n + 1) / z * cur - next;
    next = cur;
    cur = prev;
    if (std::abs(cur) > kRescaleAt) {
      cur /= kRescaleAt;
      next /= kRescaleAt;
      for (int m = n; m <= keep; ++m) f[static_cast<std::size_t>(m)] /= kRescaleAt;
    }
  }
  f[0] = cur;

  const bool use_j0 = std::abs(j0) >= std::abs(j1);
  const Complex ref = use_j0 ? j0 : j1;
  const Complex raw = use_j0 ? f[0] : f[1];
  if (raw == Complex{0.0, 0.0} || !std::isfinite(std::abs(raw)))
    throw ConvergenceError("spherical Bessel: degenerate normalisation in downward recurrence");
  const Complex scale = ref / raw;

  const Complex other = use_j0 ? j1 : j0;
  const Complex other_rec = scale * (use_j0 ? f[1] : f[0]);
  const double mag = std::max(std::abs(j0), std::abs(j1));
  if (std::abs(other_rec - other) > 1e-8 * mag)
    throw ConvergenceError("spherical Bessel: downward recurrence failed j0/j1 consistency check");

  for (int n = 0; n <= ell_max; ++n) out[static_cast<std::size_t>(n)] = scale * f[static_cast<std::size_t>(n)];
  out[0] = j0;
  if (ell_max >= 1) out[1] = j1;
  return out;
}

/// Spherical Bessel function of the first kind, complex argument.
inline Complex spherical_bessel_j(int ell, Complex z) {
  return spherical_bessel_j_sequence(ell, z)[static_cast<std::size_t>(ell)];
}

/// Real-argument j_l; evaluated on the complex path so both agree exactly.
inline double spherical_bessel_j(int ell, double x) {
  return spherical_bessel_j(ell, Complex{x, 0.0}).real();
}

/// y_0(x) ... y_{ell_max}(x) by upward recurrence, x > 0.
inline std::vector<double> spherical_bessel_y_sequence(int ell_max, double x) {
  if (ell_max < 0) throw DomainError("spherical Neumann: negative order");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("spherical Neumann: argument must be > 0");
  std::vector<double> y(static_cast<std::size_t>(ell_max) + 1);
  const double s = std::sin(x), c = std::cos(x);
  y[0] = -c / x;
  if (ell_max >= 1) y[1] = -c / (x * x) - s / x;
  for (int n = 1; n < ell_max; ++n)
    y[static_cast<std::size_t>(n) + 1] =
        static_cast<double>(2 * n + 1) / x * y[static_cast<std::size_t>(n)] - y[static_cast<std::size_t>(n) - 1];
  return y;
}

inline double spherical_bessel_y(int ell, double x) {
  return spherical_bessel_y_sequence(ell, x)[static_cast<std::size_t>(ell)];
}

/// h_0^(1)(x) ... h_{ell_max}^(1)(x) = j_l(x) + i y_l(x), x > 0.
inline std::vector<Complex> spherical_hankel_h1_sequence(int ell_max, double x) {
  detail::check_order(ell_max);
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("spherical Hankel: argument must be > 0");
  const auto j = spherical_bessel_j_sequence(ell_max, Complex{x, 0.0});
  const auto y = spherical_bessel_y_sequence(ell_max, x);
  std::vector<Complex> h(j.size());
  for (std::size_t n = 0; n < h.size(); ++n) h[n] = Complex{j[n].real(), y[n]};
  return h;
}

inline Complex spherical_hankel_h1(int ell, double x) {
  return spherical_hankel_h1_sequence(ell, x)[static_cast<std::size_t>(ell)];
}

namespace detail {

inline void check_bessel_i(int order, double x) {
  if (order < 0 || order > 2) throw DomainError("bessel_I: only orders 0, 1, 2 are supported");
  if (std::isnan(x) || x < 0.0) throw DomainError("bessel_I: argument must be >= 0");
}

/// Switch from the ascending series to the asymptotic expansion.
inline constexpr double kBesselAsymptoticFrom = 15.0;

inline double bessel_i_series(int nu, double x) {
  const double h = 0.5 * x;
  double lead = 1.0;
  for (int i = 1; i <= nu; ++i) lead *= h / i;
  const double q = h * h;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return lead * sum;
}

// e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k prod_{i<=k}(mu - (2i-1)^2) / (k! (8x)^k)
inline double bessel_i_asymptotic_scaled(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0, last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(last)) break;  // optimal truncation
    term = next;
    sum += term;
    last = std::abs(term);
    if (last < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * 3.14159265358979323846 * x);
}

}  // namespace detail

/// e^{-x} I_order(x).
inline double bessel_I_scaled(int order, double x) {
  detail::check_bessel_i(order, x);
  if (std::isinf(x)) return 0.0;
  if (x < detail::kBesselAsymptoticFrom) return std::exp(-x) * detail::bessel_i_series(order, x);
  return detail::bessel_i_asymptotic_scaled(order, x);
}

/// Modified Bessel function of the first kind, I_order(x), order in {0, 1, 2}.
inline double bessel_I(int order, double x) {
  detail::check_bessel_i(order, x);
  if (x < detail::kBesselAsymptoticFrom) return detail::bessel_i_series(order, x);
  return detail::bessel_i_asymptotic_scaled(order, x) * std::exp(x);
}

/// ln I_order(x); finite wherever I_order(x) > 0 regardless of overflow of I itself.
inline double log_bessel_I(int order, double x) {
  detail::check_bessel_i(order, x);
  if (x < detail::kBesselAsymptoticFrom) return std::log(detail::bessel_i_series(order, x));
  return std::log(detail::bessel_i_asymptotic_scaled(order, x)) + x;
}

inline double erf(double x) {
  if (std::isnan(x)) throw DomainError("erf: NaN argument");
  return std::erf(x);
}

}  // namespace otima::specfun
