#pragma once

// Zeros of omega(k) (eigenvalues and resonances) and of s(k) in complex
// rectangles: argument-principle counts, recursive quadrisection, Newton
// polishing, classification, counting functions and sign data.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "resolab/errors.hpp"
#include "resolab/jost.hpp"
#include "resolab/parallel.hpp"
#include "resolab/potential.hpp"
#include "resolab/quadrature.hpp"

namespace resolab {

struct Rect {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  double diameter() const { return std::hypot(width(), height()); }
  cplx center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(cplx k, double margin = 0.0) const {
    return k.real() >= re_min - margin && k.real() <= re_max + margin && k.imag() >= im_min - margin &&
           k.imag() <= im_max + margin;
  }
  /// Radius of the largest origin-centred disk inside the rectangle (0 if
  /// the origin is outside).
  double inradius() const { return std::max(0.0, std::min({re_max, -re_min, im_max, -im_min})); }
  Rect grown(double d) const { return {re_min - d, re_max + d, im_min - d, im_max + d}; }
};

inline void validate(const Rect& r) {
  if (!(std::isfinite(r.re_min) && std::isfinite(r.re_max) && std::isfinite(r.im_min) && std::isfinite(r.im_max)))
    throw DomainError("region: bounds must be finite");
  if (!(r.re_min < r.re_max && r.im_min < r.im_max)) throw DomainError("region: need re0 < re1 and im0 < im1");
}

enum class SpectralKind { eigenvalue, resonance, origin };
enum class ZeroFunction { omega, s };

inline const char* to_string(SpectralKind k) {
  switch (k) {
    case SpectralKind::eigenvalue: return "eigenvalue";
    case SpectralKind::resonance: return "resonance";
    case SpectralKind::origin: return "origin";
  }
  return "?";
}
inline const char* to_string(ZeroFunction f) { return f == ZeroFunction::omega ? "omega" : "s"; }

struct SpectralPoint {
  cplx k;
  int multiplicity = 1;
  SpectralKind kind = SpectralKind::resonance;
};

struct ZeroSet {
  std::vector<SpectralPoint> points;
  Rect region;
  double residual_bound = 0.0;  // largest final Newton correction, an estimate of location error
  int count = 0;                // argument-principle count over the region
  ZeroFunction function = ZeroFunction::omega;

  int total_multiplicity() const {
    int n = 0;
    for (const auto& p : points) n += p.multiplicity;
    return n;
  }
};

/// An entire function together with its derivative, in scaled form.
using AnalyticFunction = std::function<EntireValue(cplx)>;

inline AnalyticFunction omega_function(const Potential& q, SolverOptions opt = {}) {
  return [q, opt](cplx k) { return omega_scaled(q, k, opt); };
}
inline AnalyticFunction s_function(const Potential& q, SolverOptions opt = {}) {
  return [q, opt](cplx k) { return s_scaled(q, k, opt); };
}
/// Wraps an ordinary (f, f') pair.
inline AnalyticFunction analytic(std::function<cplx(cplx)> f, std::function<cplx(cplx)> df) {
  return [f = std::move(f), df = std::move(df)](cplx k) { return EntireValue{f(k), df(k), cplx{}}; };
}

struct SearchOptions {
  double tol = 1e-10;            // Newton acceptance, relative to 1 + |k|
  int max_depth = 40;
  unsigned threads = 1;
  double contour_guard = 1e-9;   // a zero closer than this to a contour is "on" it
  double edge_abs_tol = 1e-3;    // per-segment quadrature tolerance on the integral of f'/f
  double piece_length = 0.5;     // initial quadrature subdivision along each segment
};

namespace detail {

struct ContourHit {};  // internal signal: a zero lies on the contour being integrated

/// (integral of f'/f, integral of k f'/f) along a segment.
struct Moments {
  cplx m0;
  cplx m1;
  Moments& operator+=(const Moments& o) {
    m0 += o.m0;
    m1 += o.m1;
    return *this;
  }
  friend Moments operator+(Moments a, const Moments& b) { return a += b; }
  friend Moments operator-(Moments a, const Moments& b) { return {a.m0 - b.m0, a.m1 - b.m1}; }
  friend Moments operator*(Moments a, double s) { return {a.m0 * s, a.m1 * s}; }
  Moments& operator*=(double s) {
    m0 *= s;
    m1 *= s;
    return *this;
  }
  double magnitude() const { return std::abs(m0); }
};

inline Moments segment_moments(const AnalyticFunction& f, cplx a, cplx b, const SearchOptions& opt) {
  const cplx dk = b - a;
  const double len = std::abs(dk);
  auto integrand = [&](double t) {
    const cplx k = a + t * dk;
    const EntireValue v = f(k);
    const cplx ld = v.log_derivative();
    if (!std::isfinite(ld.real()) || !std::isfinite(ld.imag()) || 1.0 / std::abs(ld) < opt.contour_guard)
      throw ContourHit{};
    return Moments{ld * dk, k * ld * dk};
  };
  const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / opt.piece_length)));
  try {
    return quadrature::integrate<Moments>(integrand, 0.0, 1.0, opt.edge_abs_tol, 0.0, 20000 + 4 * pieces, pieces)
        .value;
  } catch (const NonconvergenceError&) {
    throw ContourHit{};  // an unresolvable spike means a zero sits on the segment
  }
}

inline int round_winding(cplx w) {
  const double x = w.real();
  const double r = std::round(x);
  if (std::abs(x - r) > 0.1 || std::abs(w.imag()) > 0.1) throw ContourHit{};
  return static_cast<int>(r);
}

inline Moments rect_moments(const AnalyticFunction& f, const Rect& r, const SearchOptions& opt) {
  const cplx c00{r.re_min, r.im_min}, c10{r.re_max, r.im_min}, c11{r.re_max, r.im_max}, c01{r.re_min, r.im_max};
  Moments m = segment_moments(f, c00, c10, opt);
  m += segment_moments(f, c10, c11, opt);
  m += segment_moments(f, c11, c01, opt);
  m += segment_moments(f, c01, c00, opt);
  return m;
}

inline cplx winding(const Moments& m) { return m.m0 / cplx{0.0, 2.0 * std::numbers::pi}; }

struct Box {
  Rect rect;
  int count = 0;
  cplx moment;  // (1/2 pi i) * contour integral of k f'/f: sum of the zeros inside
  int depth = 0;
};

// Off-centre split points, tried in turn. A symmetric region would otherwise
// be cut exactly along the imaginary axis, where eigenvalues live.
inline constexpr std::array<std::pair<double, double>, 6> kSplits = {{
    {0.5 + 0.037, 0.5 - 0.061},
    {0.5 - 0.113, 0.5 + 0.089},
    {0.5 + 0.171, 0.5 + 0.023},
    {0.5 - 0.029, 0.5 - 0.147},
    {0.5 + 0.211, 0.5 - 0.193},
    {0.5 - 0.223, 0.5 + 0.207},
}};

/// Splits a box into four children whose counts add up to the parent's;
/// 12 segment integrals per attempt.
inline std::array<Box, 4> quadrisect(const AnalyticFunction& f, const Box& box, const SearchOptions& opt) {
  const Rect& r = box.rect;
  for (const auto& [fx, fy] : kSplits) {
    const std::array<double, 3> xs{r.re_min, r.re_min + fx * r.width(), r.re_max};
    const std::array<double, 3> ys{r.im_min, r.im_min + fy * r.height(), r.im_max};
    try {
      // h[j][i]: segment at y = ys[j] from xs[i] to xs[i+1]; v[i][j]: at x = xs[i] from ys[j] to ys[j+1].
      Moments h[3][2], v[3][2];
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 2; ++i) h[j][i] = segment_moments(f, {xs[i], ys[j]}, {xs[i + 1], ys[j]}, opt);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) v[i][j] = segment_moments(f, {xs[i], ys[j]}, {xs[i], ys[j + 1]}, opt);
      std::array<Box, 4> kids;
      int total = 0;
      for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
          const Moments m = h[j][i] + v[i + 1][j] - h[j + 1][i] - v[i][j];
          Box& b = kids[static_cast<std::size_t>(2 * j + i)];
          b.rect = {xs[i], xs[i + 1], ys[j], ys[j + 1]};
          b.count = round_winding(winding(m));
          b.moment = m.m1 / cplx{0.0, 2.0 * std::numbers::pi};
          b.depth = box.depth + 1;
          total += b.count;
        }
      }
      if (total == box.count) return kids;
    } catch (const ContourHit&) {
    }
  }
  throw NonconvergenceError("find_zeros: could not split a subregion consistently (zero on every trial cut)");
}

struct Polished {
  cplx k;
  double step = 0.0;
  bool converged = false;
};

/// Newton with multiplicity m from k0. Stops when the step falls below
/// tol (1 + |k|).
inline Polished newton(const AnalyticFunction& f, cplx k0, int m, double tol) {
  Polished out{k0, 0.0, false};
  cplx k = k0;
  for (int it = 0; it < 60; ++it) {
    const EntireValue v = f(k);
    const cplx ld = v.log_derivative();
    if (v.mantissa == cplx{} || !std::isfinite(std::abs(ld))) {
      out = {k, 0.0, true};
      return out;
    }
    const cplx dk = static_cast<double>(m) / ld;
    k -= dk;
    out.k = k;
    out.step = std::abs(dk);
    if (out.step <= tol * (1.0 + std::abs(k))) {
      out.converged = true;
      return out;
    }
  }
  // Accept a noise-limited stall.
  out.converged = out.step <= 1e-9 * (1.0 + std::abs(out.k));
  return out;
}

struct BoxOutcome {
  std::vector<std::pair<cplx, int>> zeros;
  std::vector<Box> children;
  double residual = 0.0;
};

inline BoxOutcome process_box(const AnalyticFunction& f, const Box& box, const SearchOptions& opt) {
  BoxOutcome out;
  if (box.count == 0) return out;
  const double diam = box.rect.diameter();
  const double margin = 1e-9 * (1.0 + diam);
  if (box.count == 1 || diam < 1e-6) {
    const cplx guess = box.rect.contains(box.moment / static_cast<double>(box.count), margin)
                           ? box.moment / static_cast<double>(box.count)
                           : box.rect.center();
    const Polished p = newton(f, guess, box.count, opt.tol);
    if (p.converged && box.rect.contains(p.k, margin)) {
      out.zeros.emplace_back(p.k, box.count);
      out.residual = p.step;
      return out;
    }
    if (diam < 1e-6) {
      // Cluster too tight to resolve: report the centroid.
      out.zeros.emplace_back(guess, box.count);
      out.residual = diam;
      return out;
    }
  }
  if (box.depth >= opt.max_depth)
    throw NonconvergenceError("find_zeros: subdivision depth budget exhausted near k = (" +
                              std::to_string(box.rect.center().real()) + ", " +
                              std::to_string(box.rect.center().imag()) + ")");
  const auto kids = quadrisect(f, box, opt);
  for (const auto& kbox : kids)
    if (kbox.count > 0) out.children.push_back(kbox);
  return out;
}

/// Sort key: |k| quantised to 1e-9 relative, then arg k in [-pi, pi).
inline bool canonical_less(cplx a, cplx b) {
  const double qa = std::floor(std::abs(a) * 1e9 / (1.0 + std::abs(a)));
  const double qb = std::floor(std::abs(b) * 1e9 / (1.0 + std::abs(b)));
  if (qa != qb) return qa < qb;
  auto arg = [](cplx z) {
    const double t = std::arg(z);
    return t >= std::numbers::pi ? t - 2.0 * std::numbers::pi : t;
  };
  return arg(a) < arg(b);
}

/// Counts with one outward nudge of the contour if a zero sits on it.
/// Returns the count and the rectangle actually used.
inline std::pair<Box, bool> top_box(const AnalyticFunction& f, const Rect& region, const SearchOptions& opt) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const Rect r = attempt == 0 ? region : region.grown(1e-6 * region.diameter());
    try {
      const Moments m = rect_moments(f, r, opt);
      Box b{r, round_winding(winding(m)), m.m1 / cplx{0.0, 2.0 * std::numbers::pi}, 0};
      if (b.count < 0) throw ContourHit{};
      return {b, attempt == 1};
    } catch (const ContourHit&) {
    }
  }
  throw ZeroOnContourError("argument principle: a zero lies on the contour even after nudging it outward");
}

}  // namespace detail

/// Number of zeros (with multiplicity) of f inside the rectangle.
inline int count_zeros(const AnalyticFunction& f, const Rect& region, const SearchOptions& opt = {}) {
  validate(region);
  return detail::top_box(f, region, opt).first.count;
}

/// Kind of a zero of `fn` at k. For omega an off-axis zero in the upper
/// half-plane, or a multiple zero at the origin, is a consistency error.
inline SpectralPoint classify(cplx k, int multiplicity, ZeroFunction fn = ZeroFunction::omega) {
  SpectralPoint p{k, multiplicity, SpectralKind::resonance};
  if (std::abs(k) <= 1e-10) {
    p.kind = SpectralKind::origin;
    if (fn == ZeroFunction::omega && multiplicity > 1)
      throw ConsistencyError("classify: omega has a multiple zero at k = 0");
  } else if (k.imag() > 1e-8) {
    p.kind = SpectralKind::eigenvalue;
    if (fn == ZeroFunction::omega && std::abs(k.real()) > 1e-8 * (1.0 + std::abs(k)))
      throw ConsistencyError("classify: zero in the upper half-plane off the imaginary axis at k = (" +
                             std::to_string(k.real()) + ", " + std::to_string(k.imag()) + ")");
  }
  return p;
}

/// All zeros of f in the rectangle, with multiplicities, classified and in
/// canonical order.
inline ZeroSet find_zeros(const AnalyticFunction& f, const Rect& region, ZeroFunction fn = ZeroFunction::omega,
                          const SearchOptions& opt = {}) {
  validate(region);
  if (!(opt.tol >= 1e-12)) throw DomainError("find_zeros: tol must be >= 1e-12");
  const detail::Box top = detail::top_box(f, region, opt).first;
  ZeroSet zs;
  zs.region = region;
  zs.function = fn;
  zs.count = top.count;

  std::vector<std::pair<cplx, int>> raw;
  std::vector<detail::Box> level{top};
  while (!level.empty()) {
    std::vector<detail::BoxOutcome> results(level.size());
    parallel_for(level.size(), opt.threads,
                 [&](std::size_t i) { results[i] = detail::process_box(f, level[i], opt); });
    std::vector<detail::Box> next;
    for (auto& r : results) {
      raw.insert(raw.end(), r.zeros.begin(), r.zeros.end());
      next.insert(next.end(), r.children.begin(), r.children.end());
      zs.residual_bound = std::max(zs.residual_bound, r.residual);
    }
    level = std::move(next);
  }

  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return detail::canonical_less(a.first, b.first); });
  std::vector<std::pair<cplx, int>> merged;
  for (const auto& z : raw) {
    const bool dup = std::any_of(merged.begin(), merged.end(),
                                 [&](const auto& m) { return std::abs(m.first - z.first) < 1e-7; });
    if (!dup) merged.push_back(z);
  }
  for (const auto& [k, m] : merged) zs.points.push_back(classify(k, m, fn));
  if (zs.total_multiplicity() != zs.count)
    throw NonconvergenceError("find_zeros: harvested multiplicities (" + std::to_string(zs.total_multiplicity()) +
                              ") disagree with the argument-principle count (" + std::to_string(zs.count) + ")");
  return zs;
}

inline ZeroSet find_omega_zeros(const Potential& q, const Rect& region, const SearchOptions& opt = {},
                                const SolverOptions& solver = {}) {
  return find_zeros(omega_function(q, solver), region, ZeroFunction::omega, opt);
}
inline ZeroSet find_s_zeros(const Potential& q, const Rect& region, const SearchOptions& opt = {},
                            const SolverOptions& solver = {}) {
  return find_zeros(s_function(q, solver), region, ZeroFunction::s, opt);
}

/// N(r) = number of zeros (with multiplicity) with |k| <= r, for each r.
inline std::vector<std::pair<double, int>> counting_function(const ZeroSet& zs, const std::vector<double>& radii) {
  const double limit = zs.region.inradius();
  std::vector<std::pair<double, int>> out;
  for (double r : radii) {
    if (!(r >= 0.0) || r > limit)
      throw DomainError("counting_function: radius " + std::to_string(r) + " exceeds the searched region's inradius " +
                        std::to_string(limit));
    int n = 0;
    for (const auto& p : zs.points)
      if (std::abs(p.k) <= r) n += p.multiplicity;
    out.emplace_back(r, n);
  }
  return out;
}

struct SignDatum {
  cplx zeta;
  int sigma = 0;
};

/// sigma_j = sign(Im zeta_j), with |Im zeta| <= 1e-8 mapped to 0.
inline int sign_of_imag(cplx z) {
  if (std::abs(z.imag()) <= 1e-8) return 0;
  return z.imag() > 0.0 ? 1 : -1;
}

inline std::vector<SignDatum> sign_set(const ZeroSet& zeros_of_s) {
  std::vector<SignDatum> out;
  out.reserve(zeros_of_s.points.size());
  for (const auto& p : zeros_of_s.points) out.push_back({p.k, sign_of_imag(p.k)});
  return out;
}

struct OriginSign {
  int u = 0;            // order of the zero at k = 0
  int sigma0 = 0;       // sign(i^u c_u)
  cplx leading;         // i^u c_u
  std::vector<cplx> taylor;  // c_0 .. c_7
};

/// Taylor data of f at 0 from Cauchy integrals on |k| = 0.25 (256-point
/// trapezoid rule, spectrally accurate for entire f).
inline OriginSign origin_data(const AnalyticFunction& f) {
  constexpr int kNodes = 256;
  constexpr int kCoeffs = 8;
  constexpr double kRadius = 0.25;
  std::vector<cplx> samples(kNodes);
  for (int j = 0; j < kNodes; ++j) {
    const double th = 2.0 * std::numbers::pi * j / kNodes;
    samples[static_cast<std::size_t>(j)] = f(std::polar(kRadius, th)).value();
  }
  OriginSign out;
  out.taylor.resize(kCoeffs);
  double biggest = 0.0;
  for (int n = 0; n < kCoeffs; ++n) {
    cplx acc{};
    for (int j = 0; j < kNodes; ++j) acc += samples[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * n * j / kNodes);
    out.taylor[static_cast<std::size_t>(n)] = acc / (kNodes * std::pow(kRadius, n));
    biggest = std::max(biggest, std::abs(out.taylor[static_cast<std::size_t>(n)]));
  }
  // Values of s are O(|k|) = O(0.25) on the circle; below 1e-12 is rounding.
  if (!(biggest > 1e-12)) throw DomainError("origin_data: s vanishes to high order at k = 0");
  int u = -1;
  for (int n = 0; n < kCoeffs && u < 0; ++n)
    if (std::abs(out.taylor[static_cast<std::size_t>(n)]) > 1e-9 * biggest) u = n;
  out.u = u;
  cplx iu{1.0, 0.0};
  for (int n = 0; n < u; ++n) iu *= kI;
  out.leading = iu * out.taylor[static_cast<std::size_t>(u)];
  if (std::abs(out.leading.imag()) > 1e-6 * std::abs(out.leading))
    throw ConsistencyError("origin_data: i^u c_u is not real; conjugation symmetry violated");
  out.sigma0 = out.leading.real() > 0.0 ? 1 : (out.leading.real() < 0.0 ? -1 : 0);
  return out;
}

}  // namespace resolab
