#pragma once

// Jost solutions of -y'' + q(x) y = k^2 y for q supported in [0, 1],
// the entire functions
//   omega(k) = {psi_-, psi_+}          = psi_+'(0,k) + ik psi_+(0,k),
//   s(k)     = -{psi_-(.,-k), psi_+}   = -psi_+'(0,k) + ik psi_+(0,k),
// their k-derivatives, and the scattering coefficients on the real line.
//
// The ODE is advanced with the fourth-order Magnus exponential integrator
// (two Gauss-Legendre nodes per step, exact 2x2 matrix exponential) under
// step-doubling error control. On pieces where q is constant the propagator
// is exact, and its accuracy does not degrade as |Re k| grows. The k-derivative
// is carried along as the derivative of the discrete propagator, so it is the
// exact derivative of the computed omega. Magnitudes are kept O(1) by
// renormalising with powers of two into a complex log-scale.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "resolab/errors.hpp"
#include "resolab/potential.hpp"

namespace resolab {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};

struct SolverOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  std::size_t max_steps = 2'000'000;
};

/// (psi, psi') of a Jost solution at x for frequency k.
struct JostEvaluation {
  double x = 0.0;
  cplx k;
  cplx psi;
  cplx dpsi;
};

namespace detail {

/// exp(log_scale) * 2^exponent2. The power of two is kept apart from the
/// log-scale so renormalising never rounds the phase or the modulus.
inline cplx scale_factor(cplx log_scale, int exponent2) {
  const long double r = static_cast<long double>(log_scale.real()) +
                        static_cast<long double>(exponent2) * std::numbers::ln2_v<long double>;
  return std::polar(static_cast<double>(std::exp(r)), log_scale.imag());
}

}  // namespace detail

/// An entire function value and its k-derivative, both stored as
/// mantissa * exp(log_scale) * 2^exponent2. Safe far into the lower
/// half-plane where the raw values overflow.
struct EntireValue {
  cplx mantissa;
  cplx derivative;
  cplx log_scale;
  int exponent2 = 0;

  cplx value() const { return mantissa * detail::scale_factor(log_scale, exponent2); }
  cplx derivative_value() const { return derivative * detail::scale_factor(log_scale, exponent2); }
  /// f'/f, independent of the scale.
  cplx log_derivative() const { return derivative / mantissa; }
  double log_abs() const {
    return std::log(std::abs(mantissa)) + log_scale.real() + exponent2 * std::numbers::ln2;
  }
  double phase() const { return std::remainder(std::arg(mantissa) + log_scale.imag(), 2.0 * std::numbers::pi); }
};

enum class JostSide { plus, minus };

namespace detail {

/// State (psi, psi', d/dk psi, d/dk psi') as mantissas. The true values are
/// mantissa * exp(log_scale) * 2^exponent2; d/dk of log_scale is
/// `log_scale_dk`, so d/dk psi = (y[2] + log_scale_dk * y[0]) * scale.
struct JostState {
  double x = 0.0;
  std::array<cplx, 4> y{};
  cplx log_scale;
  cplx log_scale_dk;
  int exponent2 = 0;

  cplx psi() const { return y[0] * scale_factor(log_scale, exponent2); }
  cplx dpsi() const { return y[1] * scale_factor(log_scale, exponent2); }
};

/// One Magnus step: E = exp(Omega) and dE/dk acting on (psi, psi').
struct StepMap {
  std::array<cplx, 4> e;   // row-major 2x2
  std::array<cplx, 4> de;  // d/dk of e
};

// C = cosh(mu), S = sinh(mu)/mu, D = dS/d(mu^2); all even in mu.
inline void cosh_sinhc(cplx mu2, cplx& c, cplx& s, cplx& d) {
  if (std::abs(mu2) < 0.05) {
    // Taylor series in z = mu^2.
    cplx term_c = 1.0, term_s = 1.0;
    c = 1.0;
    s = 1.0;
    d = 0.0;
    cplx zpow = 1.0;  // z^(n-1)
    double fact_odd = 1.0;  // (2n+1)!
    for (int n = 1; n <= 12; ++n) {
      term_c *= mu2 / (double((2 * n - 1) * (2 * n)));
      term_s *= mu2 / (double((2 * n) * (2 * n + 1)));
      c += term_c;
      s += term_s;
      fact_odd *= double((2 * n) * (2 * n + 1));
      d += double(n) * zpow / fact_odd;
      zpow *= mu2;
    }
    return;
  }
  const cplx mu = std::sqrt(mu2);
  c = std::cosh(mu);
  s = std::sinh(mu) / mu;
  d = (c - s) / (2.0 * mu2);
}

inline StepMap magnus_step(double q1, double q2, double h, cplx k) {
  static const double kCommutator = std::sqrt(3.0) / 12.0;
  const double alpha = kCommutator * h * h * (q1 - q2);
  const cplx pbar = 0.5 * (q1 + q2) - k * k;
  const cplx mu2 = alpha * alpha + h * h * pbar;
  cplx c, s, d;
  cosh_sinhc(mu2, c, s, d);
  // Omega = [[alpha, h], [h*pbar, -alpha]], dOmega/dk = [[0, 0], [-2kh, 0]].
  const cplx o10 = h * pbar;
  const cplx dmu2 = -2.0 * k * h * h;
  const cplx dc = 0.5 * s * dmu2;
  const cplx ds = d * dmu2;
  StepMap m;
  m.e = {c + s * alpha, s * h, s * o10, c - s * alpha};
  m.de = {dc + ds * alpha, ds * h, ds * o10 + s * (-2.0 * k * h), dc - ds * alpha};
  return m;
}

inline std::array<cplx, 4> apply_step(const StepMap& m, const std::array<cplx, 4>& y) {
  return {m.e[0] * y[0] + m.e[1] * y[1], m.e[2] * y[0] + m.e[3] * y[1],
          m.de[0] * y[0] + m.de[1] * y[1] + m.e[0] * y[2] + m.e[1] * y[3],
          m.de[2] * y[0] + m.de[3] * y[1] + m.e[2] * y[2] + m.e[3] * y[3]};
}

/// Exact propagation over h where q = 0, in the characteristic variables
/// u = psi' + ik psi and v = psi' - ik psi, which only pick up the phases
/// e^{ikh} and e^{-ikh}. Unlike the 2x2 map this keeps an absent e^{-ikx}
/// component exactly absent, so nothing cancels in the lower half-plane.
/// Requires k != 0.
inline std::array<cplx, 4> free_advance(double h, cplx k, const std::array<cplx, 4>& y) {
  const cplx ik = kI * k;
  const cplx u = y[1] + ik * y[0], v = y[1] - ik * y[0];
  const cplx du = y[3] + kI * y[0] + ik * y[2], dv = y[3] - kI * y[0] - ik * y[2];
  const cplx ep = std::exp(ik * h), em = std::exp(-ik * h);
  const cplx un = ep * u, vn = em * v;
  const cplx dun = ep * (kI * h * u + du), dvn = em * (-kI * h * v + dv);
  return {(un - vn) / (2.0 * ik), 0.5 * (un + vn), (dun - dvn) / (2.0 * ik) - (un - vn) / (2.0 * ik * k),
          0.5 * (dun + dvn)};
}

inline double gauss_node(int i) {
  static const double off = std::sqrt(3.0) / 6.0;
  return i == 0 ? 0.5 - off : 0.5 + off;
}

inline std::array<cplx, 4> magnus_advance(const Potential& q, double anchor, double x0, double h, cplx k,
                                          const std::array<cplx, 4>& y) {
  const double q1 = q.on_piece(x0 + gauss_node(0) * h, anchor);
  const double q2 = q.on_piece(x0 + gauss_node(1) * h, anchor);
  return apply_step(magnus_step(q1, q2, h, k), y);
}

inline void renormalise(JostState& st, double kscale) {
  const double size = std::max(std::abs(st.y[0]), std::abs(st.y[1]) / kscale);
  if (size == 0.0 || !std::isfinite(size)) return;
  const int e = std::ilogb(size);
  if (e > -64 && e < 64) return;
  for (auto& v : st.y) v = {std::ldexp(v.real(), -e), std::ldexp(v.imag(), -e)};
  st.exponent2 += e;
}

inline bool piecewise_constant(const Potential& q) {
  const auto& rep = q.representation();
  if (std::holds_alternative<SquareWell>(rep) || std::holds_alternative<Step>(rep)) return true;
  if (const auto* g = std::get_if<Grid>(&rep)) return g->interpolation == 0;
  if (const auto* b = std::get_if<Bump>(&rep)) return b->amplitude == 0.0 || (b->m == 0 && b->n == 0);
  if (const auto* p = std::get_if<PiecewisePoly>(&rep))
    return std::all_of(p->coefficients.begin(), p->coefficients.end(), [](const auto& c) {
      return std::all_of(c.begin() + 1, c.end(), [](double v) { return v == 0.0; });
    });
  if (const auto* sp = std::get_if<Spliced>(&rep)) return piecewise_constant(*sp->head) && piecewise_constant(*sp->tail);
  return false;
}

/// Integrates from the side's boundary (x=1 for plus, x=0 for minus) and
/// returns the state at each target in the order given.
inline std::vector<JostState> propagate(const Potential& q, cplx k, JostSide side, std::span<const double> targets,
                                        const SolverOptions& opt = {}) {
  for (double t : targets)
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("jost: evaluation points must lie in [0, 1]");

  JostState st;
  if (side == JostSide::plus) {
    st.x = 1.0;
    st.y = {1.0, kI * k, 0.0, kI};
    st.log_scale = kI * k;
    st.log_scale_dk = kI;
  } else {
    st.x = 0.0;
    st.y = {1.0, -kI * k, 0.0, -kI};
    st.log_scale = 0.0;
    st.log_scale_dk = 0.0;
  }
  const double kscale = 1.0 + std::abs(k);

  // Traversal order of targets, stable for equal values.
  std::vector<std::size_t> order(targets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return side == JostSide::plus ? targets[a] > targets[b] : targets[a] < targets[b];
  });

  // Stations: breakpoints plus targets, in traversal order.
  std::vector<double> stations = q.breakpoints();
  stations.insert(stations.end(), targets.begin(), targets.end());
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end()), stations.end());
  if (side == JostSide::plus) std::reverse(stations.begin(), stations.end());

  std::vector<JostState> out(targets.size());
  std::size_t next_target = 0;
  auto record = [&]() {
    while (next_target < order.size() && targets[order[next_target]] == st.x) {
      JostState rec = st;
      out[order[next_target]] = rec;
      ++next_target;
    }
  };
  record();

  const bool is_piecewise_constant = detail::piecewise_constant(q);
  std::size_t steps = 0;
  double h_suggest = 0.0;
  for (std::size_t si = 1; si < stations.size(); ++si) {
    const double seg_end = stations[si];
    const double anchor = 0.5 * (st.x + seg_end);
    const double seg_len = std::abs(seg_end - st.x);
    if (is_piecewise_constant && q.on_piece(anchor, anchor) == 0.0 && std::abs(k) >= 1e-3) {
      // Field-free piece: exact, in sub-steps short enough not to overflow.
      const int parts = 1 + static_cast<int>(seg_len * std::abs(k.imag()) / 512.0);
      const double dir = seg_end > st.x ? 1.0 : -1.0;
      const double x_start = st.x;
      for (int p = 1; p <= parts; ++p) {
        const double xn = p == parts ? seg_end : x_start + dir * seg_len * p / parts;
        st.y = free_advance(xn - st.x, k, st.y);
        st.x = xn;
        renormalise(st, kscale);
      }
      record();
      continue;
    }
    double h_abs = h_suggest > 0.0 ? std::min(seg_len, 4.0 * h_suggest) : seg_len;
    while (st.x != seg_end) {
      if (++steps > opt.max_steps) throw SolverError("jost: step budget exhausted", st.x, k);
      const double remaining = std::abs(seg_end - st.x);
      bool last = h_abs >= remaining * (1.0 - 1e-12);
      double h = last ? remaining : h_abs;
      const double dir = seg_end > st.x ? 1.0 : -1.0;
      h *= dir;

      const bool constant_piece = q.on_piece(st.x, anchor) == q.on_piece(st.x + h, anchor) &&
                                  q.on_piece(st.x + 0.5 * h, anchor) == q.on_piece(st.x, anchor) &&
                                  is_piecewise_constant;
      const auto full = magnus_advance(q, anchor, st.x, h, k, st.y);
      const auto mid = magnus_advance(q, anchor, st.x, 0.5 * h, k, st.y);
      const auto fine = magnus_advance(q, anchor, st.x + 0.5 * h, 0.5 * h, k, mid);

      // Error is measured on psi, on psi' -+ ik psi (whose values at x = 0 are
      // omega and -s) and on the k-derivatives, each relative to itself with
      // an absolute floor tied to the current solution size.
      const double size = std::max(std::abs(st.y[0]), std::abs(st.y[1]) / kscale);
      auto components = [&](const std::array<cplx, 4>& y) {
        return std::array<cplx, 5>{y[0], y[1] + kI * k * y[0], y[1] - kI * k * y[0], y[2], y[3]};
      };
      const auto cf = components(fine);
      const auto cc = components(full);
      const auto c0 = components(st.y);
      const std::array<double, 5> weight{1.0, kscale, kscale, 1.0, kscale};
      double err = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        if (!std::isfinite(std::abs(cf[i])) || !std::isfinite(std::abs(cc[i]))) {
          err = 1e10;  // overflow inside the step: too long
          break;
        }
        const double sc = opt.atol * weight[i] * size + opt.rtol * std::max(std::abs(c0[i]), std::abs(cf[i]));
        const double e = std::abs(cf[i] - cc[i]) / 15.0;
        if (sc > 0.0) err = std::max(err, e / sc);
      }
      if (!std::isfinite(err)) err = 1e10;

      if (err <= 1.0) {
        // Local extrapolation, except where q is constant over the step: there
        // both maps are exact and the difference is rounding noise.
        if (constant_piece) {
          st.y = fine;
        } else {
          for (std::size_t i = 0; i < 4; ++i) st.y[i] = fine[i] + (fine[i] - full[i]) / 15.0;
        }
        st.x = last ? seg_end : st.x + h;
        renormalise(st, kscale);
        const double grow = err == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 4.0);
        h_suggest = std::abs(h);
        h_abs = std::abs(h) * grow;
      } else {
        h_abs = std::abs(h) * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
        if (h_abs < 1e-14) throw SolverError("jost: step size underflow", st.x, k);
      }
    }
    record();
  }
  return out;
}

inline JostState plus_at_zero(const Potential& q, cplx k, const SolverOptions& opt) {
  const double x0 = 0.0;
  return propagate(q, k, JostSide::plus, std::span<const double>(&x0, 1), opt).front();
}

}  // namespace detail

inline std::vector<JostEvaluation> jost_solution(const Potential& q, cplx k, JostSide side,
                                                 std::span<const double> xs, const SolverOptions& opt = {}) {
  if (xs.empty()) throw DomainError("jost: no evaluation points");
  const auto states = detail::propagate(q, k, side, xs, opt);
  std::vector<JostEvaluation> out;
  out.reserve(states.size());
  for (const auto& st : states) out.push_back({st.x, k, st.psi(), st.dpsi()});
  return out;
}

/// psi_+(x, k) = e^{ikx} for x >= 1, integrated backward from x = 1.
inline std::vector<JostEvaluation> jost_plus(const Potential& q, cplx k, std::span<const double> xs,
                                             const SolverOptions& opt = {}) {
  return jost_solution(q, k, JostSide::plus, xs, opt);
}

/// psi_-(x, k) = e^{-ikx} for x <= 0, integrated forward from x = 0.
inline std::vector<JostEvaluation> jost_minus(const Potential& q, cplx k, std::span<const double> xs,
                                              const SolverOptions& opt = {}) {
  return jost_solution(q, k, JostSide::minus, xs, opt);
}

inline EntireValue omega_scaled(const Potential& q, cplx k, const SolverOptions& opt = {}) {
  const auto st = detail::plus_at_zero(q, k, opt);
  const auto& y = st.y;
  const cplx m = y[1] + kI * k * y[0];
  const cplx dm = y[3] + kI * y[0] + kI * k * y[2] + st.log_scale_dk * m;
  return {m, dm, st.log_scale, st.exponent2};
}

inline EntireValue s_scaled(const Potential& q, cplx k, const SolverOptions& opt = {}) {
  const auto st = detail::plus_at_zero(q, k, opt);
  const auto& y = st.y;
  const cplx m = -y[1] + kI * k * y[0];
  const cplx dm = -y[3] + kI * y[0] + kI * k * y[2] + st.log_scale_dk * m;
  return {m, dm, st.log_scale, st.exponent2};
}

inline cplx omega(const Potential& q, cplx k, const SolverOptions& opt = {}) { return omega_scaled(q, k, opt).value(); }
inline cplx s_func(const Potential& q, cplx k, const SolverOptions& opt = {}) { return s_scaled(q, k, opt).value(); }

/// d omega / dk from the variational system.
inline cplx omega_prime(const Potential& q, cplx k, const SolverOptions& opt = {}) {
  return omega_scaled(q, k, opt).derivative_value();
}
inline cplx s_prime(const Potential& q, cplx k, const SolverOptions& opt = {}) {
  return s_scaled(q, k, opt).derivative_value();
}

/// {f, g} = f g' - f' g.
inline cplx wronskian(const JostEvaluation& f, const JostEvaluation& g) {
  if (f.x != g.x || f.k != g.k) throw DomainError("wronskian: evaluations at different (x, k)");
  return f.psi * g.dpsi - f.dpsi * g.psi;
}

struct ScatteringData {
  cplx k;
  cplx omega;
  cplx s;
  cplx transmission;
  cplx reflection_plus;
  cplx reflection_minus;
};

/// T = 2ik/omega(k); R_+ = s(k)/omega(k), R_- = s(-k)/omega(k), i.e.
/// s(+-k) = 2ik R_+-(k) / T(k). For real k != 0.
inline ScatteringData scattering_coefficients(const Potential& q, double k, const SolverOptions& opt = {}) {
  if (k == 0.0) throw DomainError("scattering: T and R are undefined at k = 0");
  const cplx kc{k, 0.0};
  const cplx w = omega(q, kc, opt);
  if (std::abs(w) < 1e-13) throw ConsistencyError("scattering: omega vanishes on the real axis");
  const cplx sp = s_func(q, kc, opt);
  const cplx sm = s_func(q, -kc, opt);
  return {kc, w, sp, 2.0 * kI * kc / w, sp / w, sm / w};
}

}  // namespace resolab
