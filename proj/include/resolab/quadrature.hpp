#pragma once

// Quadrature building blocks: Gauss-Legendre rules, Gauss-Kronrod (7,15)
// adaptive integration for real or complex integrands, and the panel
// "cumulative integration" matrix used by the Neumann-series oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <queue>
#include <vector>

#include "resolab/errors.hpp"

namespace resolab::quadrature {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline Rule gauss_legendre(std::size_t n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / static_cast<double>(j);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// S(i, j) = integral over [-1, node_i] of the j-th Lagrange basis polynomial
/// on the rule's nodes. Multiplying panel samples by S gives the running
/// integral from the panel's left end to each node, exact for degree < n.
inline std::vector<std::vector<double>> cumulative_matrix(const Rule& rule) {
  const std::size_t n = rule.nodes.size();
  const auto& t = rule.nodes;
  std::vector<double> bary(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m)
      if (m != j) bary[j] /= (t[j] - t[m]);

  auto lagrange = [&](std::size_t j, double x) {
    double num = bary[j];
    for (std::size_t m = 0; m < n; ++m)
      if (m != j) num *= (x - t[m]);
    return num;
  };

  std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double half = 0.5 * (t[i] + 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t m = 0; m < n; ++m) acc += rule.weights[m] * lagrange(j, half * (t[m] + 1.0) - 1.0);
      s[i][j] = half * acc;
    }
  }
  return s;
}

namespace detail {

// Kronrod 15-point nodes (non-negative half, descending) and weights,
// with the embedded 7-point Gauss weights on the odd-indexed nodes.
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

template <class T>
double magnitude(const T& v) {
  if constexpr (requires { v.magnitude(); })
    return v.magnitude();
  else
    return std::abs(v);
}

template <class T>
struct Segment {
  double a;
  double b;
  T value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class T, class F>
Segment<T> gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  std::size_t intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7,15) integration of f over [a, b].
/// Stops when the summed error estimate drops below max(abs_tol, rel_tol*|I|).
/// `pieces` equal subintervals seed the queue, so that narrow features are
/// not missed by the first rule.
template <class T, class F>
Result<T> integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                    std::size_t max_intervals = 4000, std::size_t pieces = 1) {
  using Seg = detail::Segment<T>;
  std::priority_queue<Seg> heap;
  T total{};
  double err = 0.0;
  pieces = std::max<std::size_t>(pieces, 1);
  for (std::size_t i = 0; i < pieces; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(pieces);
    const double hi = i + 1 == pieces ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(pieces);
    const Seg seg = detail::gk15<T>(f, lo, hi);
    total += seg.value;
    err += seg.error;
    heap.push(seg);
  }
  std::size_t count = pieces;
  while (true) {
    if (!std::isfinite(err) || !std::isfinite(detail::magnitude(total)))
      throw NonconvergenceError("adaptive quadrature: non-finite integrand");
    if (err <= std::max(abs_tol, rel_tol * detail::magnitude(total))) break;
    if (count >= max_intervals)
      throw NonconvergenceError("adaptive quadrature exceeded its interval budget");
    Seg worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw NonconvergenceError("adaptive quadrature interval underflow");
    Seg left = detail::gk15<T>(f, worst.a, mid);
    Seg right = detail::gk15<T>(f, mid, worst.b);
    total = total - worst.value + left.value + right.value;
    err = err - worst.error + left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the cancellation accumulated in the running totals.
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  return {sum, esum, count};
}

}  // namespace resolab::quadrature
