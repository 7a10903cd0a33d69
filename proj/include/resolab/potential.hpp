#pragma once

// Real potentials supported in [0, 1].
//
// A Potential is an immutable value: a representation (one of the variants
// below), an orientation flag set by reflect(), and optional endpoint
// smoothness metadata (m, n, delta): q is C^m near 0 with its first m
// derivatives vanishing below order m, and likewise C^n near 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resolab/errors.hpp"
#include "resolab/quadrature.hpp"

namespace resolab {

struct Smoothness {
  int m = 0;
  int n = 0;
  double delta = 0.5;
};

class Potential;

struct SquareWell {
  double amplitude = 0.0;
};

/// levels[i] on [breakpoints[i], breakpoints[i+1]).
struct Step {
  std::vector<double> breakpoints;
  std::vector<double> levels;
};

/// Piece i is sum_j coefficients[i][j] * (x - breakpoints[i])^j.
struct PiecewisePoly {
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> coefficients;
};

/// Samples at x_i = i/(N-1). Order 0 is nearest-sample, 1 linear, 3 natural
/// cubic spline.
struct Grid {
  std::vector<double> samples;
  int interpolation = 1;
  std::vector<double> curvature;  // spline second derivatives, order 3 only
};

/// q(x) = amplitude * x^m * (1-x)^n on [0, 1].
struct Bump {
  int m = 0;
  int n = 0;
  double amplitude = 0.0;
};

/// head on [0, at], tail on (at, 1].
struct Spliced {
  std::shared_ptr<const Potential> head;
  std::shared_ptr<const Potential> tail;
  double at = 0.5;
};

namespace detail {

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite value in ") + what);
}

inline void validate_breakpoints(const std::vector<double>& bp, std::size_t pieces, const char* what) {
  if (bp.size() < 2 || bp.size() != pieces + 1)
    throw DomainError(std::string(what) + ": need one more breakpoint than pieces");
  if (bp.front() != 0.0 || bp.back() != 1.0)
    throw DomainError(std::string(what) + ": breakpoints must start at 0 and end at 1");
  for (std::size_t i = 0; i < bp.size(); ++i) {
    require_finite(bp[i], what);
    if (i > 0 && !(bp[i] > bp[i - 1])) throw DomainError(std::string(what) + ": breakpoints must increase");
  }
}

inline std::size_t piece_index(const std::vector<double>& bp, double anchor) {
  const auto it = std::upper_bound(bp.begin(), bp.end(), anchor);
  const auto idx = static_cast<std::ptrdiff_t>(it - bp.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(bp.size()) - 2));
}

inline double int_power(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

inline std::vector<double> natural_spline_curvature(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  const double h = 1.0 / static_cast<double>(n - 1);
  // Thomas algorithm on the interior system M[i-1] + 4 M[i] + M[i+1] = rhs.
  std::vector<double> diag(n, 4.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] = 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = 1.0 / diag[i - 1];
    diag[i] -= w;
    rhs[i] -= w * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) m[i] = (rhs[i] - m[i + 1]) / diag[i];
  return m;
}

inline std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v) {
    if (x < 0.0 || x > 1.0) continue;
    if (out.empty() || x - out.back() > 1e-14) out.push_back(x);
  }
  if (out.empty() || out.front() != 0.0) out.insert(out.begin(), 0.0);
  if (out.back() != 1.0) {
    if (1.0 - out.back() <= 1e-14) out.back() = 1.0;
    else out.push_back(1.0);
  }
  return out;
}

}  // namespace detail

class Potential {
 public:
  using Representation = std::variant<SquareWell, Step, PiecewisePoly, Grid, Bump, Spliced>;

  /// q == 0. Outside the class Q^1 but accepted as a fixture.
  static Potential zero() { return square_well(0.0); }

  static Potential square_well(double amplitude) {
    detail::require_finite(amplitude, "square_well");
    Potential p(SquareWell{amplitude});
    if (amplitude != 0.0) p.smoothness_ = Smoothness{0, 0, 0.5};
    return p;
  }

  static Potential step(std::vector<double> breakpoints, std::vector<double> levels) {
    detail::validate_breakpoints(breakpoints, levels.size(), "step");
    for (double v : levels) detail::require_finite(v, "step levels");
    Potential p(Step{std::move(breakpoints), std::move(levels)});
    const auto& s = std::get<Step>(p.rep_);
    if (s.levels.front() != 0.0 && s.levels.back() != 0.0) {
      const double first = s.breakpoints[1];
      const double last = 1.0 - s.breakpoints[s.breakpoints.size() - 2];
      p.smoothness_ = Smoothness{0, 0, std::min({first, last, 0.5})};
    }
    return p;
  }

  static Potential piecewise_poly(std::vector<double> breakpoints, std::vector<std::vector<double>> coefficients) {
    detail::validate_breakpoints(breakpoints, coefficients.size(), "piecewise_poly");
    for (const auto& piece : coefficients) {
      if (piece.empty()) throw DomainError("piecewise_poly: empty coefficient list");
      for (double c : piece) detail::require_finite(c, "piecewise_poly coefficients");
    }
    return Potential(PiecewisePoly{std::move(breakpoints), std::move(coefficients)});
  }

  static Potential grid(std::vector<double> samples, int interpolation) {
    if (samples.size() < 2) throw DomainError("grid: need at least two samples");
    if (interpolation != 0 && interpolation != 1 && interpolation != 3)
      throw DomainError("grid: interpolation order must be 0, 1 or 3");
    for (double v : samples) detail::require_finite(v, "grid samples");
    Grid g{std::move(samples), interpolation, {}};
    if (interpolation == 3) g.curvature = detail::natural_spline_curvature(g.samples);
    return Potential(std::move(g));
  }

  static Potential bump(int m, int n, double amplitude) {
    if (m < 0 || n < 0) throw DomainError("bump: exponents must be non-negative");
    detail::require_finite(amplitude, "bump");
    Potential p(Bump{m, n, amplitude});
    if (amplitude != 0.0) p.smoothness_ = Smoothness{m, n, 0.5};
    return p;
  }

  static Potential spliced(const Potential& head, const Potential& tail, double at) {
    if (!(at >= 0.0 && at <= 1.0)) throw DomainError("splice: point must lie in [0, 1]");
    Potential p(Spliced{std::make_shared<const Potential>(head), std::make_shared<const Potential>(tail), at});
    const auto& hs = head.smoothness_;
    const auto& ts = tail.smoothness_;
    if (at == 1.0) p.smoothness_ = hs;
    else if (at == 0.0) p.smoothness_ = ts;
    else if (hs && ts)
      p.smoothness_ = Smoothness{hs->m, ts->n, std::min({hs->delta, ts->delta, at, 1.0 - at})};
    return p;
  }

  /// q(x); exactly 0 outside [0, 1]. At a jump the right-hand piece wins.
  double operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) return 0.0;
    return on_piece(x, x);
  }

  /// Value at x of the smooth piece containing `anchor`, extended to the
  /// closed piece. Lets an integrator sample one-sided limits at jumps.
  double on_piece(double x, double anchor) const {
    if (mirrored_) {
      x = 1.0 - x;
      anchor = 1.0 - anchor;
    }
    return std::visit([&](const auto& r) { return eval(r, x, anchor); }, rep_);
  }

  /// Points where q or a derivative may jump, sorted, always including 0 and 1.
  std::vector<double> breakpoints() const {
    std::vector<double> raw = std::visit([](const auto& r) { return raw_breakpoints(r); }, rep_);
    if (mirrored_)
      for (double& b : raw) b = 1.0 - b;
    return detail::sorted_unique(std::move(raw));
  }

  const Representation& representation() const { return rep_; }
  bool mirrored() const { return mirrored_; }
  const std::optional<Smoothness>& smoothness() const { return smoothness_; }

  Potential with_smoothness(std::optional<Smoothness> s) const {
    if (s && (s->m < 0 || s->n < 0 || !(s->delta > 0.0 && s->delta < 1.0)))
      throw DomainError("smoothness: need m, n >= 0 and delta in (0, 1)");
    Potential p = *this;
    p.smoothness_ = s;
    return p;
  }

  /// True when the representation is identically zero.
  bool vanishes_identically() const {
    return std::visit([](const auto& r) { return is_zero(r); }, rep_);
  }

  friend Potential reflect(const Potential& q);

 private:
  explicit Potential(Representation rep) : rep_(std::move(rep)) {}

  static double eval(const SquareWell& r, double, double) { return r.amplitude; }
  static double eval(const Step& r, double, double anchor) {
    return r.levels[detail::piece_index(r.breakpoints, anchor)];
  }
  static double eval(const PiecewisePoly& r, double x, double anchor) {
    const std::size_t i = detail::piece_index(r.breakpoints, anchor);
    const double t = x - r.breakpoints[i];
    const auto& c = r.coefficients[i];
    double acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * t + c[j];
    return acc;
  }
  static double eval(const Grid& r, double x, double anchor) {
    const std::size_t n = r.samples.size();
    const double scale = static_cast<double>(n - 1);
    if (r.interpolation == 0) {
      const auto idx = static_cast<std::size_t>(std::clamp(std::floor(anchor * scale + 0.5), 0.0, scale));
      return r.samples[idx];
    }
    const auto i = static_cast<std::size_t>(std::clamp(std::floor(anchor * scale), 0.0, scale - 1.0));
    const double h = 1.0 / scale;
    const double x0 = static_cast<double>(i) * h;
    const double a = (x0 + h - x) / h;
    const double b = (x - x0) / h;
    double v = a * r.samples[i] + b * r.samples[i + 1];
    if (r.interpolation == 3 && !r.curvature.empty())
      v += ((a * a * a - a) * r.curvature[i] + (b * b * b - b) * r.curvature[i + 1]) * h * h / 6.0;
    return v;
  }
  static double eval(const Bump& r, double x, double) {
    return r.amplitude * detail::int_power(x, r.m) * detail::int_power(1.0 - x, r.n);
  }
  static double eval(const Spliced& r, double x, double anchor) {
    return anchor <= r.at ? r.head->on_piece(x, anchor) : r.tail->on_piece(x, anchor);
  }

  static std::vector<double> raw_breakpoints(const SquareWell&) { return {0.0, 1.0}; }
  static std::vector<double> raw_breakpoints(const Bump&) { return {0.0, 1.0}; }
  static std::vector<double> raw_breakpoints(const Step& r) { return r.breakpoints; }
  static std::vector<double> raw_breakpoints(const PiecewisePoly& r) { return r.breakpoints; }
  static std::vector<double> raw_breakpoints(const Grid& r) {
    const std::size_t n = r.samples.size();
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> out{0.0, 1.0};
    for (std::size_t i = 0; i + 1 < n; ++i)
      out.push_back(r.interpolation == 0 ? (static_cast<double>(i) + 0.5) * h : static_cast<double>(i) * h);
    return out;
  }
  static std::vector<double> raw_breakpoints(const Spliced& r) {
    std::vector<double> out{r.at};
    for (double b : r.head->breakpoints())
      if (b <= r.at) out.push_back(b);
    for (double b : r.tail->breakpoints())
      if (b > r.at) out.push_back(b);
    return out;
  }

  static bool is_zero(const SquareWell& r) { return r.amplitude == 0.0; }
  static bool is_zero(const Bump& r) { return r.amplitude == 0.0; }
  static bool is_zero(const Step& r) {
    return std::all_of(r.levels.begin(), r.levels.end(), [](double v) { return v == 0.0; });
  }
  static bool is_zero(const PiecewisePoly& r) {
    return std::all_of(r.coefficients.begin(), r.coefficients.end(), [](const auto& c) {
      return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
    });
  }
  static bool is_zero(const Grid& r) {
    return std::all_of(r.samples.begin(), r.samples.end(), [](double v) { return v == 0.0; });
  }
  static bool is_zero(const Spliced& r) {
    const bool head_zero = r.at == 0.0 || r.head->vanishes_identically();
    const bool tail_zero = r.at == 1.0 || r.tail->vanishes_identically();
    return head_zero && tail_zero;
  }

  Representation rep_;
  bool mirrored_ = false;
  std::optional<Smoothness> smoothness_;
};

inline double evaluate(const Potential& q, double x) { return q(x); }

/// x -> q(1 - x). Square wells are fixed points and bumps swap exponents;
/// every other representation flips its orientation flag, so reflecting
/// twice restores the original value exactly.
inline Potential reflect(const Potential& q) {
  Potential r = q;
  if (const auto* b = std::get_if<Bump>(&q.rep_)) {
    r.rep_ = Bump{b->n, b->m, b->amplitude};
  } else if (!std::holds_alternative<SquareWell>(q.rep_)) {
    r.mirrored_ = !q.mirrored_;
  }
  if (q.smoothness_) r.smoothness_ = Smoothness{q.smoothness_->n, q.smoothness_->m, q.smoothness_->delta};
  return r;
}

/// q on [0, a], tail on (a, 1].
inline Potential splice(const Potential& q, const Potential& tail, double a) {
  return Potential::spliced(q, tail, a);
}

/// Q(x) = integral of |q| over [x, 1], piecewise adaptive Gauss-Kronrod.
inline double l1_tail(const Potential& q, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("l1_tail: x must lie in [0, 1]");
  double total = 0.0;
  const auto bp = q.breakpoints();
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double lo = std::max(bp[i], x);
    const double hi = bp[i + 1];
    if (!(hi > lo)) continue;
    const double anchor = 0.5 * (lo + hi);
    auto integrand = [&](double t) { return std::abs(q.on_piece(t, anchor)); };
    total += quadrature::integrate<double>(integrand, lo, hi, 1e-15, 1e-11).value;
  }
  return total;
}

/// True unless q vanishes on a whole sampled neighbourhood of 0 or of 1.
/// The sampling stands in for the a.e. condition defining Q^1.
inline bool in_class_q1(const Potential& q) {
  bool near_zero = false;
  bool near_one = false;
  for (int j = 1; j <= 200 && !(near_zero && near_one); ++j) {
    const double x = 5e-5 * j;
    near_zero = near_zero || q(x) != 0.0;
    near_one = near_one || q(1.0 - x) != 0.0;
  }
  return near_zero && near_one;
}

/// Length of the smallest interval outside which q vanishes: 1 in Q^1,
/// otherwise resolved to the sampling step 1e-5 (breakpoints sampled exactly).
inline double support_length(const Potential& q) {
  if (in_class_q1(q)) return 1.0;
  std::vector<double> xs = q.breakpoints();
  for (int j = 0; j <= 100000; ++j) xs.push_back(1e-5 * j);
  std::sort(xs.begin(), xs.end());
  double lo = 2.0, hi = -1.0;
  for (double x : xs)
    if (q(x) != 0.0) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  return hi >= lo ? hi - lo : 0.0;
}

/// Two potentials known to agree on [0, prefix].
struct PotentialPair {
  Potential q;
  Potential q_tilde;
  double prefix = 0.5;
};

/// Builds a pair after checking agreement, with tolerance 0, at the cell
/// midpoints of a dense grid of [0, prefix]. Agreement is almost-everywhere,
/// so endpoint values (a jump at the splice point, prefix 0) are not tested.
inline PotentialPair make_pair(const Potential& q, const Potential& q_tilde, double prefix) {
  if (!(prefix >= 0.0 && prefix <= 1.0)) throw DomainError("pair: prefix must lie in [0, 1]");
  constexpr int kSamples = 4000;
  for (int i = 0; i < kSamples && prefix > 0.0; ++i) {
    const double x = prefix * (i + 0.5) / kSamples;
    if (q(x) != q_tilde(x)) throw DomainError("pair: potentials differ inside the agreement prefix");
  }
  return {q, q_tilde, prefix};
}

}  // namespace resolab
