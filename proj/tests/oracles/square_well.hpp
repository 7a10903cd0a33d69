#pragma once

// Closed forms for the square well q = c on [0, 1], written independently of
// the library's ODE path. kappa = sqrt(k^2 - c) only enters through even
// functions, so the branch is irrelevant; series handle kappa -> 0.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline const cplx I{0.0, 1.0};

// sin(kappa)/kappa and cos(kappa) as functions of z = kappa^2.
inline cplx sinc_of_sq(cplx z) {
  if (std::abs(z) < 1e-3) return 1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0;
  const cplx kappa = std::sqrt(z);
  return std::sin(kappa) / kappa;
}
inline cplx cos_of_sq(cplx z) {
  if (std::abs(z) < 1e-3) return 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0;
  return std::cos(std::sqrt(z));
}
// kappa * sin(kappa)
inline cplx ksin_of_sq(cplx z) { return z * sinc_of_sq(z); }

// For |kappa| >= 1 the exponential split
//   omega = i e^{ik}/(2 kappa) [ (kappa+k)^2 e^{-i kappa} - c^2 e^{i kappa}/(kappa+k)^2 ]
// with Re kappa matched to Re k avoids the cancellation between the
// trigonometric terms in the lower half-plane.
inline cplx omega(double c, cplx k) {
  const cplx z = k * k - c;
  if (std::abs(z) < 1.0)
    return std::exp(I * k) * ((z + k * k) * sinc_of_sq(z) + 2.0 * I * k * cos_of_sq(z));
  cplx kappa = std::sqrt(z);
  if (kappa.real() * k.real() + kappa.imag() * k.imag() < 0.0) kappa = -kappa;
  const cplx sum = kappa + k;
  return I * std::exp(I * k) / (2.0 * kappa) *
         (sum * sum * std::exp(-I * kappa) - c * c * std::exp(I * kappa) / (sum * sum));
}

inline cplx s(double c, cplx k) {
  const cplx z = k * k - c;
  return c * std::exp(I * k) * sinc_of_sq(z);
}

// psi_+(x) = e^{ik} (cos kappa(x-1) + ik sin kappa(x-1)/kappa), x in [0, 1].
inline cplx psi_plus(double c, cplx k, double x) {
  const double t = x - 1.0;
  const cplx z = (k * k - c) * t * t;
  return std::exp(I * k) * (cos_of_sq(z) + I * k * t * sinc_of_sq(z));
}
inline cplx dpsi_plus(double c, cplx k, double x) {
  const double t = x - 1.0;
  const cplx z = (k * k - c) * t * t;
  // d/dx cos(kappa t) = -kappa^2 t sin(kappa t)/(kappa t).
  return std::exp(I * k) * (-(k * k - c) * t * sinc_of_sq(z) + I * k * cos_of_sq(z));
}

// psi_-(x) = cos(kappa x) - ik sin(kappa x)/kappa.
inline cplx psi_minus(double c, cplx k, double x) {
  const cplx z = (k * k - c) * x * x;
  return cos_of_sq(z) - I * k * x * sinc_of_sq(z);
}
inline cplx dpsi_minus(double c, cplx k, double x) {
  const cplx z = (k * k - c) * x * x;
  return -(k * k - c) * x * sinc_of_sq(z) - I * k * cos_of_sq(z);
}

// d/dz of sin(kappa)/kappa and cos(kappa), z = kappa^2.
inline cplx dsinc_of_sq(cplx z) {
  if (std::abs(z) < 1e-2)
    return -1.0 / 6.0 + z / 60.0 - z * z / 1680.0 + z * z * z / 90720.0;
  return (cos_of_sq(z) - sinc_of_sq(z)) / (2.0 * z);
}
inline cplx dcos_of_sq(cplx z) { return -0.5 * sinc_of_sq(z); }

// Symbolic derivative of omega = e^{ik}[(z + k^2) sinc + 2ik cos], z = k^2 - c.
inline cplx omega_prime(double c, cplx k) {
  const cplx z = k * k - c;
  const cplx e = std::exp(I * k);
  const cplx body = (z + k * k) * sinc_of_sq(z) + 2.0 * I * k * cos_of_sq(z);
  const cplx dbody = 4.0 * k * sinc_of_sq(z) + (z + k * k) * dsinc_of_sq(z) * 2.0 * k + 2.0 * I * cos_of_sq(z) +
                     2.0 * I * k * dcos_of_sq(z) * 2.0 * k;
  return I * e * body + e * dbody;
}

// e^{beta} omega(i beta) = (-2 beta^2 - c) sin(kappa)/kappa - 2 beta cos(kappa),
// kappa^2 = -beta^2 - c: real on the positive imaginary axis.
inline double omega_on_imag_axis(double c, double beta) {
  const cplx z = -beta * beta - c;
  return ((-2.0 * beta * beta - c) * sinc_of_sq(z) - 2.0 * beta * cos_of_sq(z)).real();
}

// Bound states of a well (c < 0): bisection on omega_on_imag_axis over a
// bracketing interval.
inline double bound_state(double c, double lo, double hi) {
  auto f = [c](double b) { return omega_on_imag_axis(c, b); };
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// All bound states i beta with beta in [lo, hi], from a sign-change scan
// followed by bisection.
inline std::vector<double> bound_states(double c, double lo, double hi, int scan = 4000) {
  std::vector<double> out;
  double prev_b = lo, prev = omega_on_imag_axis(c, lo);
  for (int i = 1; i <= scan; ++i) {
    const double b = lo + (hi - lo) * i / scan;
    const double v = omega_on_imag_axis(c, b);
    if ((v < 0) != (prev < 0)) out.push_back(bound_state(c, prev_b, b));
    prev_b = b;
    prev = v;
  }
  return out;
}

}  // namespace oracle
