#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's special-function or quadrature code.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

/// j_n(x) by the ascending power series in long double.
inline double spherical_j_series(int n, double x) {
  long double lead = 1.0L;
  for (int i = 1; i <= n; ++i) lead *= static_cast<long double>(x) / (2 * i + 1);
  const long double q = -0.5L * x * x;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * (2 * n + 2 * k + 1));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && k > 10) break;
  }
  return static_cast<double>(lead * sum);
}

/// I_nu(x) by the ascending power series in long double.
inline double bessel_i_series(int nu, double x) {
  const long double h = 0.5L * x;
  long double lead = 1.0L;
  for (int i = 1; i <= nu; ++i) lead *= h / i;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 2000; ++k) {
    term *= h * h / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  return static_cast<double>(lead * sum);
}

/// Adaptive Simpson on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 50) {
  const std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double a0, double b0, double fa, double fm, double fb, double whole, double eps,
          int d) -> double {
    const double m = 0.5 * (a0 + b0);
    const double lm = 0.5 * (a0 + m), rm = 0.5 * (m + b0);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a0) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b0 - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
      return left + right + (left + right - whole) / 15.0;
    return rec(a0, m, fa, flm, fm, left, 0.5 * eps, d - 1) +
           rec(m, b0, fm, frm, fb, right, 0.5 * eps, d - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

/// erf(x) = 2/sqrt(pi) int_0^x exp(-t^2) dt by adaptive Simpson.
inline double erf_quadrature(double x) {
  const double v = adaptive_simpson([](double t) { return std::exp(-t * t); }, 0.0, std::abs(x),
                                    1e-15);
  return (x < 0 ? -1.0 : 1.0) * 2.0 / std::sqrt(std::numbers::pi) * v;
}

/// Travelling-wave Mie absorption efficiency Q_abs = Q_ext - Q_sca of a sphere
/// with size parameter x and complex refractive index m (Bohren & Huffman):
/// logarithmic derivative D_n(mx) by downward recurrence, Riccati-Bessel
/// psi_n(x), xi_n(x) by upward recurrence.
inline double mie_q_abs(double x, Complex m) {
  const Complex mx = m * x;
  const int nstop = static_cast<int>(x + 4.0 * std::cbrt(x) + 2.0) + 10;
  const int nmx = static_cast<int>(std::max(static_cast<double>(nstop), std::abs(mx))) + 30;
  std::vector<Complex> d(static_cast<std::size_t>(nmx) + 1, Complex{0.0, 0.0});
  for (int n = nmx; n > 0; --n) {
    const double nn = n;
    d[static_cast<std::size_t>(n) - 1] =
        nn / mx - 1.0 / (d[static_cast<std::size_t>(n)] + nn / mx);
  }
  double psi0 = std::cos(x), psi1 = std::sin(x);
  double chi0 = -std::sin(x), chi1 = std::cos(x);
  Complex xi1{psi1, -chi1};
  double qext = 0.0, qsca = 0.0;
  for (int n = 1; n <= nstop; ++n) {
    const double nn = n;
    const double psi = (2.0 * nn - 1.0) * psi1 / x - psi0;
    const double chi = (2.0 * nn - 1.0) * chi1 / x - chi0;
    const Complex xi{psi, -chi};
    const Complex dn = d[static_cast<std::size_t>(n)];
    const Complex a = ((dn / m + nn / x) * psi - psi1) / ((dn / m + nn / x) * xi - xi1);
    const Complex b = ((m * dn + nn / x) * psi - psi1) / ((m * dn + nn / x) * xi - xi1);
    qext += (2.0 * nn + 1.0) * (a + b).real();
    qsca += (2.0 * nn + 1.0) * (std::norm(a) + std::norm(b));
    psi0 = psi1;
    psi1 = psi;
    chi0 = chi1;
    chi1 = chi;
    xi1 = Complex{psi1, -chi1};
  }
  return 2.0 / (x * x) * (qext - qsca);
}

/// Maxwell-Boltzmann moment <v^p> = v_p^p 2/sqrt(pi) Gamma((3+p)/2).
inline double mb_moment(double p, double vp) {
  return std::pow(vp, p) * 2.0 / std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (3.0 + p));
}

/// Riemann zeta by direct summation with an Euler-Maclaurin tail (s > 1).
inline double zeta(double s) {
  const int n = 1000;
  double sum = 0.0;
  for (int k = 1; k < n; ++k) sum += std::pow(k, -s);
  const double nn = n;
  return sum + std::pow(nn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(nn, -s) +
         s / 12.0 * std::pow(nn, -s - 1.0);
}

}  // namespace oracle
