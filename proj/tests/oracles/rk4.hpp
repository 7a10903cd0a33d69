#pragma once

// Brute-force reference for the Jost solution: classical fixed-step RK4 in
// long double on the raw system (psi, psi'), no scaling, no adaptivity.
// Slow and simple on purpose; only meant for moderate |k|.

#include <complex>
#include <functional>

namespace oracle {

using lcplx = std::complex<long double>;

struct Boundary {
  std::complex<double> psi;
  std::complex<double> dpsi;
};

// psi_+ at x_end, integrating backward from x = 1 with psi = e^{ikx} there.
inline Boundary rk4_plus(const std::function<double(double)>& q, std::complex<double> kd, double x_end = 0.0,
                         int steps = 20000) {
  const lcplx k(kd.real(), kd.imag());
  const lcplx i(0.0L, 1.0L);
  lcplx y0 = std::exp(i * k);
  lcplx y1 = i * k * y0;
  const long double h = (static_cast<long double>(x_end) - 1.0L) / steps;
  auto f = [&](long double x, const lcplx& a, const lcplx& b, lcplx& da, lcplx& db) {
    da = b;
    db = (static_cast<long double>(q(static_cast<double>(x))) - k * k) * a;
  };
  long double x = 1.0L;
  for (int n = 0; n < steps; ++n) {
    lcplx a1, b1, a2, b2, a3, b3, a4, b4;
    f(x, y0, y1, a1, b1);
    f(x + h / 2, y0 + h / 2 * a1, y1 + h / 2 * b1, a2, b2);
    f(x + h / 2, y0 + h / 2 * a2, y1 + h / 2 * b2, a3, b3);
    f(x + h, y0 + h * a3, y1 + h * b3, a4, b4);
    y0 += h / 6 * (a1 + 2.0L * a2 + 2.0L * a3 + a4);
    y1 += h / 6 * (b1 + 2.0L * b2 + 2.0L * b3 + b4);
    x = 1.0L + (n + 1) * h;
  }
  return {{static_cast<double>(y0.real()), static_cast<double>(y0.imag())},
          {static_cast<double>(y1.real()), static_cast<double>(y1.imag())}};
}

inline std::complex<double> rk4_omega(const std::function<double(double)>& q, std::complex<double> k,
                                      int steps = 20000) {
  const auto b = rk4_plus(q, k, 0.0, steps);
  return b.dpsi + std::complex<double>(0, 1) * k * b.psi;
}

}  // namespace oracle
