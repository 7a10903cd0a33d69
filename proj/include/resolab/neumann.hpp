#pragma once

// Neumann series for psi_+ from the Volterra equation
//   psi(x) = e^{ikx} + (1/2ik) int_x^1 [e^{ik(t-x)} - e^{-ik(t-x)}] q(t) psi(t) dt,
// iterated as psi_0 = e^{ikx}, psi_j = (kernel) psi_{j-1}. Used as an
// independent check on the ODE path, never as the primary evaluator.
//
// Each iterate is carried on Gauss-Legendre panels aligned with the
// breakpoints of q; the two one-sided integrals
//   A(x) = int_x^1 e^{ikt} q psi_{j-1},  B(x) = int_x^1 e^{-ikt} q psi_{j-1}
// are accumulated right-to-left with the cumulative (spectral) matrix,
// and psi_j(x) = [e^{-ikx} A(x) - e^{ikx} B(x)] / (2ik).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "resolab/errors.hpp"
#include "resolab/jost.hpp"
#include "resolab/potential.hpp"
#include "resolab/quadrature.hpp"

namespace resolab {

struct NeumannResult {
  cplx psi;            // sum of psi_0 .. psi_J at x
  double tail_bound;   // bound on |psi_+ - psi| (series tail plus a rounding allowance)
  std::vector<cplx> iterates;
};

namespace detail {

struct Panel {
  double a, b;
};

inline std::vector<Panel> neumann_panels(const Potential& q, double x, cplx k) {
  std::vector<Panel> out;
  const auto bp = q.breakpoints();
  std::vector<double> cuts{x};
  for (double b : bp)
    if (b > x && b < 1.0) cuts.push_back(b);
  cuts.push_back(1.0);
  // 20 nodes resolve a few oscillations of e^{2ikt} per panel to full precision.
  const double per_unit = std::max(4.0, (std::abs(k.real()) + std::abs(k.imag())) / 2.0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    if (!(len > 0.0)) continue;
    const auto n = static_cast<std::size_t>(std::ceil(len * per_unit));
    for (std::size_t j = 0; j < n; ++j)
      out.push_back({cuts[i] + len * static_cast<double>(j) / static_cast<double>(n),
                     j + 1 == n ? cuts[i + 1] : cuts[i] + len * static_cast<double>(j + 1) / static_cast<double>(n)});
  }
  return out;
}

}  // namespace detail

/// Partial sum psi_0 + ... + psi_J of the Neumann series at x, with the
/// bound
///   |sum_{j>J} psi_j(x)| <= e^{g(2-x)} (Q/|k|)^{J+1}/(J+1)! e^{Q/|k|},
/// g = max(0, -Im k), Q = int_x^1 |q|. It follows by induction from
/// |psi_j(x)| <= e^{g(2-x)} (Q(x)/|k|)^j / j!, using |sin(k u)/k| <= e^{|Im k| u}/|k|.
inline NeumannResult neumann_psi_plus(const Potential& q, cplx k, double x, int J) {
  if (J < 1) throw DomainError("neumann: need J >= 1");
  if (std::abs(k) < 0.1) throw DomainError("neumann: |k| < 0.1, the series bound is useless near k = 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("neumann: x must lie in [0, 1]");

  const double g = std::max(0.0, -k.imag());
  const double Q = l1_tail(q, x);
  const double ak = std::abs(k);
  const double growth = std::exp(g * (2.0 - x));

  NeumannResult res;
  res.iterates.push_back(std::exp(kI * k * x));
  if (x == 1.0 || q.vanishes_identically()) {
    res.iterates.resize(static_cast<std::size_t>(J) + 1, cplx{});
    res.psi = res.iterates.front();
    res.tail_bound = 0.0;
    return res;
  }

  const auto rule = quadrature::gauss_legendre(20);
  const auto cum = quadrature::cumulative_matrix(rule);
  const std::size_t n = rule.nodes.size();
  const auto panels = detail::neumann_panels(q, x, k);

  // Node layout: panel p, local node i -> index p*n + i.
  std::vector<double> t, qv, half;
  for (const auto& p : panels) {
    const double mid = 0.5 * (p.a + p.b);
    const double h = 0.5 * (p.b - p.a);
    for (std::size_t i = 0; i < n; ++i) {
      const double ti = mid + h * rule.nodes[i];
      t.push_back(ti);
      qv.push_back(q.on_piece(ti, mid));
      half.push_back(h);
    }
  }
  const std::size_t N = t.size();
  std::vector<cplx> ep(N), em(N), cur(N), next(N);
  for (std::size_t m = 0; m < N; ++m) {
    ep[m] = std::exp(kI * k * t[m]);
    em[m] = std::exp(-kI * k * t[m]);
    cur[m] = ep[m];
  }

  const cplx inv2ik = 1.0 / (2.0 * kI * k);
  std::vector<cplx> fa(n), fb(n);
  for (int j = 1; j <= J; ++j) {
    cplx A_right{}, B_right{};  // integrals over panels to the right of the current one
    cplx A_left{}, B_left{};
    for (std::size_t p = panels.size(); p-- > 0;) {
      const std::size_t off = p * n;
      cplx A_panel{}, B_panel{};
      for (std::size_t i = 0; i < n; ++i) {
        fa[i] = ep[off + i] * qv[off + i] * cur[off + i];
        fb[i] = em[off + i] * qv[off + i] * cur[off + i];
        A_panel += rule.weights[i] * fa[i];
        B_panel += rule.weights[i] * fb[i];
      }
      const double h = half[off];
      A_panel *= h;
      B_panel *= h;
      for (std::size_t i = 0; i < n; ++i) {
        cplx a_to{}, b_to{};  // integral from the panel start to node i
        for (std::size_t l = 0; l < n; ++l) {
          a_to += cum[i][l] * fa[l];
          b_to += cum[i][l] * fb[l];
        }
        const cplx A = A_right + A_panel - h * a_to;
        const cplx B = B_right + B_panel - h * b_to;
        next[off + i] = inv2ik * (em[off + i] * A - ep[off + i] * B);
      }
      A_right += A_panel;
      B_right += B_panel;
      if (p == 0) {
        A_left = A_right;
        B_left = B_right;
      }
    }
    res.iterates.push_back(inv2ik * (std::exp(-kI * k * x) * A_left - std::exp(kI * k * x) * B_left));
    std::swap(cur, next);
  }

  res.psi = cplx{};
  double magnitude_sum = 0.0;
  for (const auto& v : res.iterates) {
    res.psi += v;
    magnitude_sum += std::abs(v);
  }
  double term = 1.0;  // (Q/|k|)^{J+1} / (J+1)!
  for (int j = 1; j <= J + 1; ++j) term *= (Q / ak) / j;
  // Rounding and quadrature allowance on top of the analytic tail.
  const double numerical = 1e-12 * std::max(magnitude_sum, growth);
  res.tail_bound = growth * term * std::exp(Q / ak) + numerical;
  return res;
}

/// The individual iterates psi_0(x) .. psi_J(x).
inline std::vector<cplx> neumann_iterates(const Potential& q, cplx k, double x, int J) {
  return neumann_psi_plus(q, k, x, J).iterates;
}

}  // namespace resolab
