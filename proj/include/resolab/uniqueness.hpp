#pragma once

// Experimental side of the uniqueness theorems: the difference functional
// g1 in its four forms, the midpoint logarithmic derivative tau_k, distances
// between zero sets, subset densities and falsification-style demos.
//
// The demos are numerical evidence, not proofs. Each theorem asserts that a
// data map is injective; a demo checks the contrapositive on one pair
// (different tails => different data).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "resolab/errors.hpp"
#include "resolab/jost.hpp"
#include "resolab/potential.hpp"
#include "resolab/quadrature.hpp"
#include "resolab/spectrum.hpp"

namespace resolab {

/// tau_k = psi_+'(1/2, k) / psi_+(1/2, k).
inline cplx tau(const Potential& q, cplx k, const SolverOptions& opt = {}) {
  const double half = 0.5;
  const auto e = jost_plus(q, k, std::span<const double>(&half, 1), opt).front();
  if (std::abs(e.psi) < 1e-12 * std::abs(e.dpsi))
    throw PoleError("tau: psi_+(1/2, k) vanishes; tau is infinite at this k");
  return e.dpsi / e.psi;
}

struct G1Evaluation {
  cplx k;
  cplx integral_form;  // int_a^1 (q~ - q) psi_+ psi~_+
  cplx omega_form;     // omega psi~_+(0) - omega~ psi_+(0)
  cplx s_form;         // -s psi~_+(0) + s~ psi_+(0)
  std::optional<cplx> tau_form;  // psi_+(1/2) psi~_+(1/2) (tau - tau~)

  /// Largest pairwise difference of the populated forms, relative to the
  /// largest form.
  double spread() const {
    std::vector<cplx> v{integral_form, omega_form, s_form};
    if (tau_form) v.push_back(*tau_form);
    double big = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      big = std::max(big, std::abs(v[i]));
      for (std::size_t j = i + 1; j < v.size(); ++j) diff = std::max(diff, std::abs(v[i] - v[j]));
    }
    return big == 0.0 ? 0.0 : diff / big;
  }
  double max_abs() const {
    double m = std::max({std::abs(integral_form), std::abs(omega_form), std::abs(s_form)});
    if (tau_form) m = std::max(m, std::abs(*tau_form));
    return m;
  }
};

namespace detail {

/// int_a^1 (q~ - q) psi_+ psi~_+ dx on Gauss-Legendre panels split at the
/// breakpoints of both potentials; panels are doubled until the value
/// settles to 1e-10 relative.
inline cplx g1_integral(const PotentialPair& pair, cplx k, const SolverOptions& opt) {
  const double a = pair.prefix;
  if (a >= 1.0) return {};
  std::vector<double> cuts{a, 1.0};
  for (const auto* p : {&pair.q, &pair.q_tilde})
    for (double b : p->breakpoints())
      if (b > a && b < 1.0) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const auto rule = quadrature::gauss_legendre(16);
  auto evaluate_with = [&](int per_segment) {
    std::vector<double> nodes, weights, dq;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double len = cuts[s + 1] - cuts[s];
      for (int p = 0; p < per_segment; ++p) {
        const double lo = cuts[s] + len * p / per_segment;
        const double hi = cuts[s] + len * (p + 1) / per_segment;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double x = mid + half * rule.nodes[i];
          nodes.push_back(x);
          weights.push_back(half * rule.weights[i]);
          dq.push_back(pair.q_tilde.on_piece(x, mid) - pair.q.on_piece(x, mid));
        }
      }
    }
    const auto psi = jost_plus(pair.q, k, nodes, opt);
    const auto psit = jost_plus(pair.q_tilde, k, nodes, opt);
    cplx acc{};
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * dq[i] * psi[i].psi * psit[i].psi;
    return acc;
  };

  // Resolve a few oscillations of e^{2ikx} per panel from the start.
  int per = std::max(1, static_cast<int>(std::ceil((std::abs(k) + 1.0) / 8.0)));
  cplx prev = evaluate_with(per);
  for (int round = 0; round < 8; ++round) {
    per *= 2;
    const cplx cur = evaluate_with(per);
    if (std::abs(cur - prev) <= 1e-10 * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace detail

/// All four forms of g1 at k, each computed independently. The omega, s and
/// tau forms equal the integral only when the pair agrees on [0, 1/2]; the
/// tau form is left empty for other prefixes or at a pole of tau.
inline G1Evaluation g1(const PotentialPair& pair, cplx k, const SolverOptions& opt = {}) {
  G1Evaluation out;
  out.k = k;
  out.integral_form = detail::g1_integral(pair, k, opt);

  const std::vector<double> xs{0.0, 0.5};
  const auto p = jost_plus(pair.q, k, xs, opt);
  const auto pt = jost_plus(pair.q_tilde, k, xs, opt);
  const cplx w = omega(pair.q, k, opt), wt = omega(pair.q_tilde, k, opt);
  const cplx s = s_func(pair.q, k, opt), st = s_func(pair.q_tilde, k, opt);
  out.omega_form = w * pt[0].psi - wt * p[0].psi;
  out.s_form = -s * pt[0].psi + st * p[0].psi;
  if (pair.prefix == 0.5) {
    try {
      const cplx t = tau(pair.q, k, opt), tt = tau(pair.q_tilde, k, opt);
      out.tau_form = p[1].psi * pt[1].psi * (t - tt);
    } catch (const PoleError&) {
    }
  }
  return out;
}

namespace detail {

inline std::vector<cplx> flatten_within(const ZeroSet& zs, double radius) {
  std::vector<cplx> out;
  for (const auto& p : zs.points)
    if (std::abs(p.k) <= radius)
      for (int m = 0; m < p.multiplicity; ++m) out.push_back(p.k);
  return out;
}

inline double directed_hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double worst = 0.0;
  for (const cplx& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const cplx& y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace detail

/// Hausdorff distance between the zero lists (multiplicities flattened)
/// restricted to |k| <= radius. Infinite if exactly one of them is empty.
inline double resonance_distance(const ZeroSet& a, const ZeroSet& b, double radius) {
  if (radius > a.region.inradius() || radius > b.region.inradius())
    throw DomainError("resonance_distance: zero sets do not cover the disk of radius " + std::to_string(radius));
  const auto fa = detail::flatten_within(a, radius);
  const auto fb = detail::flatten_within(b, radius);
  if (fa.empty() && fb.empty()) return 0.0;
  if (fa.empty() || fb.empty()) return std::numeric_limits<double>::infinity();
  return std::max(detail::directed_hausdorff(fa, fb), detail::directed_hausdorff(fb, fa));
}

struct DensityEstimate {
  std::string subset_label;
  std::vector<double> radii;
  std::vector<int> counts;
  double gamma_hat = 0.0;
  double threshold = 0.0;
  bool meets_threshold = false;
};

/// Selects points by value and by position in the zero set's canonical order.
using Selector = std::function<bool(const SpectralPoint&, std::size_t)>;

inline Selector select_all() {
  return [](const SpectralPoint&, std::size_t) { return true; };
}
inline Selector select_none() {
  return [](const SpectralPoint&, std::size_t) { return false; };
}
inline Selector select_every_second() {
  return [](const SpectralPoint&, std::size_t i) { return i % 2 == 0; };
}

/// gamma_hat from N_sel(r) pi/2 = gamma r by least squares through the
/// origin; threshold 2(1 - a) for theorem 2 and 1 - 2a for theorem 3.
inline DensityEstimate subset_density(const ZeroSet& zs, const Selector& selector, double a, int theorem,
                                      const std::vector<double>& radii, std::string label = "subset") {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("subset_density: a must lie in [0, 1]");
  if (theorem != 2 && theorem != 3) throw DomainError("subset_density: theorem must be 2 or 3");
  if (radii.empty()) throw DomainError("subset_density: no radii");
  const double limit = zs.region.inradius();
  DensityEstimate d;
  d.subset_label = std::move(label);
  d.radii = radii;
  d.threshold = theorem == 2 ? 2.0 * (1.0 - a) : 1.0 - 2.0 * a;
  std::vector<SpectralPoint> chosen;
  for (std::size_t i = 0; i < zs.points.size(); ++i)
    if (selector(zs.points[i], i)) chosen.push_back(zs.points[i]);
  double num = 0.0, den = 0.0;
  for (double r : radii) {
    if (!(r > 0.0) || r > limit) throw DomainError("subset_density: radius exceeds the searched region");
    int n = 0;
    for (const auto& p : chosen)
      if (std::abs(p.k) <= r) n += p.multiplicity;
    d.counts.push_back(n);
    num += r * (n * std::numbers::pi / 2.0);
    den += r * r;
  }
  d.gamma_hat = num / den;
  d.meets_threshold = d.gamma_hat > d.threshold;
  return d;
}

struct DemoConfig {
  int theorem = 1;
  double radius = 15.0;                     // data disk
  double tolerance = 1e-3;                  // data considered equal below this
  std::vector<double> density_radii{5.0, 10.0, 15.0};
  Selector subset = select_all();           // Omega (theorem 2) or S (theorem 3)
  std::string subset_label = "all";
  SearchOptions search{};
  SolverOptions solver{};
};

struct DemoReport {
  int theorem = 1;
  std::string header =
      "falsification-style numerical evidence, not a proof: the theorem asserts the data map is injective; "
      "this checks that different tails give different data";
  bool applicable = true;
  std::string inapplicable_reason;
  double prefix = 0.0;
  std::vector<std::pair<std::string, double>> hypothesis;
  ZeroSet zeros_q, zeros_q_tilde;                 // omega zeros (theorems 1, 2, 4) or s zeros (theorem 3)
  std::optional<ZeroSet> omega_zeros_q, omega_zeros_q_tilde;  // theorem 3 also carries {k_j}
  std::optional<DensityEstimate> density;
  std::vector<std::pair<int, int>> sign_q, sign_q_tilde;     // theorem 3: (index, sigma), index -1 for sigma_0
  std::vector<std::pair<cplx, cplx>> tau_q, tau_q_tilde;     // theorem 4: (k_j, tau) - tau NaN at a pole
  double data_distance = 0.0;
  double tail_max_difference = 0.0;
  bool data_coincide = false;
  bool consistent = true;  // false only if the data coincide while the tails differ
  std::string verdict;
};

namespace detail {

inline double tail_difference(const PotentialPair& pair) {
  double worst = 0.0;
  constexpr int kSamples = 4001;
  for (int i = 0; i < kSamples; ++i) {
    const double x = pair.prefix + (1.0 - pair.prefix) * i / (kSamples - 1.0);
    worst = std::max(worst, std::abs(pair.q(x) - pair.q_tilde(x)));
  }
  return worst;
}

inline Rect data_region(double radius) {
  const double r = radius * 1.02 + 0.5;
  return {-r, r, -r, r};
}

inline ZeroSet restrict(const ZeroSet& zs, const Selector& sel) {
  ZeroSet out = zs;
  out.points.clear();
  for (std::size_t i = 0; i < zs.points.size(); ++i)
    if (sel(zs.points[i], i)) out.points.push_back(zs.points[i]);
  return out;
}

inline std::vector<std::pair<cplx, cplx>> tau_at_zeros(const Potential& q, const ZeroSet& zs, double radius,
                                                       const SolverOptions& opt) {
  std::vector<std::pair<cplx, cplx>> out;
  for (const auto& p : zs.points) {
    if (std::abs(p.k) > radius) continue;
    try {
      out.emplace_back(p.k, tau(q, p.k, opt));
    } catch (const PoleError&) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      out.emplace_back(p.k, cplx{nan, nan});
    }
  }
  return out;
}

}  // namespace detail

/// Runs the experiment attached to one of the four uniqueness theorems.
inline DemoReport theorem_demo(const PotentialPair& pair, const DemoConfig& cfg) {
  DemoReport rep;
  rep.theorem = cfg.theorem;
  rep.prefix = pair.prefix;
  rep.hypothesis = {{"prefix", pair.prefix}, {"radius", cfg.radius}, {"tolerance", cfg.tolerance}};
  auto inapplicable = [&](std::string why) {
    rep.applicable = false;
    rep.inapplicable_reason = std::move(why);
    rep.verdict = "inapplicable: " + rep.inapplicable_reason;
    return rep;
  };
  const bool smooth = pair.q.smoothness().has_value() && pair.q_tilde.smoothness().has_value();
  switch (cfg.theorem) {
    case 1:
      if (pair.prefix != 0.5) return inapplicable("theorem 1 needs the pair to agree on exactly [0, 1/2]");
      if (!smooth) return inapplicable("theorem 1 needs condition (C) smoothness metadata");
      break;
    case 2:
      if (!(pair.prefix > 0.5)) return inapplicable("theorem 2 needs a prefix a > 1/2");
      if (!in_class_q1(pair.q) || !in_class_q1(pair.q_tilde)) return inapplicable("theorem 2 needs q in Q1");
      break;
    case 3:
      if (!(pair.prefix < 0.5)) return inapplicable("theorem 3 needs a prefix a < 1/2");
      if (!in_class_q1(pair.q) || !in_class_q1(pair.q_tilde)) return inapplicable("theorem 3 needs q in Q1");
      break;
    case 4:
      if (!smooth) return inapplicable("theorem 4 needs condition (C) smoothness metadata");
      break;
    default:
      throw DomainError("theorem_demo: theorem must be 1, 2, 3 or 4");
  }

  rep.tail_max_difference = detail::tail_difference(pair);
  const Rect region = detail::data_region(cfg.radius);
  const bool identical_tails = rep.tail_max_difference == 0.0;

  if (cfg.theorem == 3) {
    rep.omega_zeros_q = find_omega_zeros(pair.q, region, cfg.search, cfg.solver);
    rep.omega_zeros_q_tilde = identical_tails ? *rep.omega_zeros_q
                                              : find_omega_zeros(pair.q_tilde, region, cfg.search, cfg.solver);
    const ZeroSet s_q = find_s_zeros(pair.q, region, cfg.search, cfg.solver);
    const ZeroSet s_qt = identical_tails ? s_q : find_s_zeros(pair.q_tilde, region, cfg.search, cfg.solver);
    rep.zeros_q = detail::restrict(s_q, cfg.subset);
    rep.zeros_q_tilde = detail::restrict(s_qt, cfg.subset);
    rep.density = subset_density(s_q, cfg.subset, pair.prefix, 3, cfg.density_radii, cfg.subset_label);
    // Sigma includes sigma_0 (the sign at the origin) alongside sigma_j of the selected zeros.
    auto signs = [&](const Potential& q, const ZeroSet& zs) {
      std::vector<std::pair<int, int>> out;
      try {
        out.emplace_back(-1, origin_data(s_function(q, cfg.solver)).sigma0);
      } catch (const Error&) {
        out.emplace_back(-1, 0);
      }
      const auto ss = sign_set(zs);
      for (std::size_t i = 0; i < ss.size(); ++i) out.emplace_back(static_cast<int>(i), ss[i].sigma);
      return out;
    };
    rep.sign_q = signs(pair.q, rep.zeros_q);
    rep.sign_q_tilde = signs(pair.q_tilde, rep.zeros_q_tilde);
    const double d_omega = resonance_distance(*rep.omega_zeros_q, *rep.omega_zeros_q_tilde, cfg.radius);
    const double d_s = resonance_distance(rep.zeros_q, rep.zeros_q_tilde, cfg.radius);
    rep.data_distance = std::max(d_omega, d_s);
    if (rep.sign_q != rep.sign_q_tilde) rep.data_distance = std::max(rep.data_distance, 1.0);
  } else {
    rep.zeros_q = find_omega_zeros(pair.q, region, cfg.search, cfg.solver);
    rep.zeros_q_tilde = identical_tails ? rep.zeros_q : find_omega_zeros(pair.q_tilde, region, cfg.search, cfg.solver);
    if (cfg.theorem == 2) {
      rep.density = subset_density(rep.zeros_q, cfg.subset, pair.prefix, 2, cfg.density_radii, cfg.subset_label);
      rep.data_distance = resonance_distance(detail::restrict(rep.zeros_q, cfg.subset),
                                             detail::restrict(rep.zeros_q_tilde, cfg.subset), cfg.radius);
    } else {
      rep.data_distance = resonance_distance(rep.zeros_q, rep.zeros_q_tilde, cfg.radius);
    }
    if (cfg.theorem == 4) {
      for (const auto& p : rep.zeros_q.points)
        if (p.multiplicity > 1) return inapplicable("theorem 4 needs simple zeros (a multiple zero was found)");
      rep.tau_q = detail::tau_at_zeros(pair.q, rep.zeros_q, cfg.radius, cfg.solver);
      rep.tau_q_tilde = detail::tau_at_zeros(pair.q_tilde, rep.zeros_q_tilde, cfg.radius, cfg.solver);
      if (rep.tau_q.size() != rep.tau_q_tilde.size()) {
        rep.data_distance = std::max(rep.data_distance, 1.0);
      } else {
        for (std::size_t i = 0; i < rep.tau_q.size(); ++i) {
          const cplx a = rep.tau_q[i].second, b = rep.tau_q_tilde[i].second;
          const bool a_pole = std::isnan(a.real()), b_pole = std::isnan(b.real());
          const double d = (a_pole || b_pole) ? (a_pole == b_pole ? 0.0 : 1.0)
                                              : std::abs(a - b) / (1.0 + std::abs(a));
          rep.data_distance = std::max(rep.data_distance, d);
        }
      }
    }
  }

  rep.data_coincide = rep.data_distance <= cfg.tolerance;
  if (rep.data_coincide) {
    rep.consistent = identical_tails;
    rep.verdict = "data coincide: uniqueness predicts q = q~; measured max |q - q~| on the tail = " +
                  std::to_string(rep.tail_max_difference);
  } else {
    rep.consistent = !identical_tails;
    rep.verdict = identical_tails ? "data differ although the potentials are identical (numerical inconsistency)"
                                  : "tails differ and the data differ: consistent with uniqueness";
  }
  if (cfg.theorem == 2 && rep.density && !rep.density->meets_threshold)
    rep.verdict += " (note: the subset density does not exceed the theorem's threshold)";
  if (cfg.theorem == 3 && rep.density && !rep.density->meets_threshold)
    rep.verdict += " (note: the sign-set density does not exceed the theorem's threshold)";
  return rep;
}

}  // namespace resolab
