#pragma once

// JSON forms of potentials, zero sets and identity reports.
//
// Potential files:
//   {"type": "square_well", "amplitude": 2}
//   {"type": "step", "breakpoints": [0, 0.5, 1], "levels": [1, 3]}
//   {"type": "piecewise_poly", "breakpoints": [...], "coefficients": [[c0, c1, ...], ...]}
//   {"type": "grid", "samples": [...], "interpolation": 0 | 1 | 3}
//   {"type": "bump", "m": 1, "n": 1, "amplitude": 6}
// each with an optional "smoothness": {"m": int, "n": int, "delta": float}.
// Polynomial coefficients are in the local variable t = x - b_i, ascending.
// Unknown fields are rejected.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "resolab/errors.hpp"
#include "resolab/identities.hpp"
#include "resolab/potential.hpp"
#include "resolab/spectrum.hpp"

namespace resolab::io {

using json = nlohmann::json;

namespace detail {

inline void require_fields(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key())) throw ParseError(where + ": unknown field \"" + it.key() + "\"");
}

template <class T>
T field(const json& j, const char* name, const std::string& where) {
  if (!j.contains(name)) throw ParseError(where + ": missing field \"" + name + "\"");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": field \"" + name + "\" has the wrong type (" + e.what() + ")");
  }
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

inline Potential potential_from_json(const json& j, const std::string& where = "potential") {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  const auto type = detail::field<std::string>(j, "type", where);
  const std::string w = where + " (" + type + ")";
  std::optional<Smoothness> smooth;
  if (j.contains("smoothness")) {
    const json& s = j.at("smoothness");
    if (!s.is_object()) throw ParseError(w + ": \"smoothness\" must be an object");
    detail::require_fields(s, {"m", "n", "delta"}, w + ".smoothness");
    smooth = Smoothness{detail::field<int>(s, "m", w + ".smoothness"), detail::field<int>(s, "n", w + ".smoothness"),
                        s.contains("delta") ? detail::field<double>(s, "delta", w + ".smoothness") : 0.5};
  }
  try {
    Potential p = Potential::zero();
    if (type == "square_well") {
      detail::require_fields(j, {"type", "amplitude", "smoothness"}, w);
      p = Potential::square_well(detail::field<double>(j, "amplitude", w));
    } else if (type == "step") {
      detail::require_fields(j, {"type", "breakpoints", "levels", "smoothness"}, w);
      p = Potential::step(detail::field<std::vector<double>>(j, "breakpoints", w),
                          detail::field<std::vector<double>>(j, "levels", w));
    } else if (type == "piecewise_poly") {
      detail::require_fields(j, {"type", "breakpoints", "coefficients", "smoothness"}, w);
      p = Potential::piecewise_poly(detail::field<std::vector<double>>(j, "breakpoints", w),
                                    detail::field<std::vector<std::vector<double>>>(j, "coefficients", w));
    } else if (type == "grid") {
      detail::require_fields(j, {"type", "samples", "interpolation", "smoothness"}, w);
      p = Potential::grid(detail::field<std::vector<double>>(j, "samples", w),
                          detail::field<int>(j, "interpolation", w));
    } else if (type == "bump") {
      detail::require_fields(j, {"type", "m", "n", "amplitude", "smoothness"}, w);
      p = Potential::bump(detail::field<int>(j, "m", w), detail::field<int>(j, "n", w),
                          detail::field<double>(j, "amplitude", w));
    } else {
      throw ParseError(where + ": unknown potential type \"" + type + "\"");
    }
    if (j.contains("smoothness")) p = p.with_smoothness(smooth);
    return p;
  } catch (const DomainError& e) {
    throw ParseError(w + ": " + e.what());
  }
}

inline json parse_text(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset -> line/column for the message.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(where + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Potential potential_from_file(const std::string& path) {
  return potential_from_json(parse_text(read_file(path), path), path);
}

/// Canonical JSON; also covers the derived forms (spliced, reflected) that
/// have no file representation.
inline json potential_to_json(const Potential& q) {
  json j = std::visit(
      [](const auto& r) -> json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, SquareWell>) {
          return {{"type", "square_well"}, {"amplitude", r.amplitude}};
        } else if constexpr (std::is_same_v<R, Step>) {
          return {{"type", "step"}, {"breakpoints", r.breakpoints}, {"levels", r.levels}};
        } else if constexpr (std::is_same_v<R, PiecewisePoly>) {
          return {{"type", "piecewise_poly"}, {"breakpoints", r.breakpoints}, {"coefficients", r.coefficients}};
        } else if constexpr (std::is_same_v<R, Grid>) {
          return {{"type", "grid"}, {"samples", r.samples}, {"interpolation", r.interpolation}};
        } else if constexpr (std::is_same_v<R, Bump>) {
          return {{"type", "bump"}, {"m", r.m}, {"n", r.n}, {"amplitude", r.amplitude}};
        } else {
          return {{"type", "spliced"}, {"head", potential_to_json(*r.head)}, {"tail", potential_to_json(*r.tail)},
                  {"at", r.at}};
        }
      },
      q.representation());
  if (q.mirrored()) j = json{{"type", "reflected"}, {"of", j}};
  if (const auto& s = q.smoothness()) j["smoothness"] = {{"m", s->m}, {"n", s->n}, {"delta", s->delta}};
  return j;
}

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
inline std::string potential_digest(const Potential& q) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(detail::fnv1a(potential_to_json(q).dump())));
  return buf;
}

inline json zero_set_to_json(const ZeroSet& zs, const std::string& digest) {
  json zeros = json::array();
  for (const auto& p : zs.points)
    zeros.push_back({{"re", p.k.real()}, {"im", p.k.imag()}, {"multiplicity", p.multiplicity}, {"kind", to_string(p.kind)}});
  return {{"region", {zs.region.re_min, zs.region.re_max, zs.region.im_min, zs.region.im_max}},
          {"zeros", zeros},
          {"function", to_string(zs.function)},
          {"potential_digest", digest},
          {"count", zs.count},
          {"residual_bound", zs.residual_bound}};
}

/// Reads a zero-set file back, re-validating its structure: multiplicities
/// positive, kinds consistent with locations, points inside the region.
inline ZeroSet zero_set_from_json(const json& j, const std::string& where = "zero set") {
  if (!j.is_object()) throw ParseError(where + ": expected a JSON object");
  detail::require_fields(j, {"region", "zeros", "function", "potential_digest", "count", "residual_bound", "config"},
                         where);
  ZeroSet zs;
  const auto reg = detail::field<std::vector<double>>(j, "region", where);
  if (reg.size() != 4) throw ParseError(where + ": \"region\" needs four numbers");
  zs.region = {reg[0], reg[1], reg[2], reg[3]};
  try {
    validate(zs.region);
  } catch (const DomainError& e) {
    throw ParseError(where + ": " + e.what());
  }
  const auto fn = detail::field<std::string>(j, "function", where);
  if (fn != "omega" && fn != "s") throw ParseError(where + ": \"function\" must be \"omega\" or \"s\"");
  zs.function = fn == "omega" ? ZeroFunction::omega : ZeroFunction::s;
  const json& zeros = j.at("zeros");
  if (!zeros.is_array()) throw ParseError(where + ": \"zeros\" must be an array");
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const std::string w = where + ".zeros[" + std::to_string(i) + "]";
    const json& z = zeros[i];
    if (!z.is_object()) throw ParseError(w + ": expected an object");
    detail::require_fields(z, {"re", "im", "multiplicity", "kind"}, w);
    const cplx k{detail::field<double>(z, "re", w), detail::field<double>(z, "im", w)};
    const int m = detail::field<int>(z, "multiplicity", w);
    const auto kind = detail::field<std::string>(z, "kind", w);
    if (m < 1) throw ParseError(w + ": multiplicity must be positive");
    if (!zs.region.contains(k, 1e-6 * (1.0 + zs.region.diameter())))
      throw ParseError(w + ": zero lies outside the region");
    SpectralPoint p;
    try {
      p = classify(k, m, zs.function);
    } catch (const ConsistencyError& e) {
      throw ParseError(w + ": " + e.what());
    }
    if (kind != to_string(p.kind)) throw ParseError(w + ": kind \"" + kind + "\" does not match the location");
    zs.points.push_back(p);
  }
  zs.count = j.contains("count") ? detail::field<int>(j, "count", where) : zs.total_multiplicity();
  if (zs.count != zs.total_multiplicity()) throw ParseError(where + ": multiplicities do not add up to \"count\"");
  if (j.contains("residual_bound")) zs.residual_bound = detail::field<double>(j, "residual_bound", where);
  return zs;
}

inline json report_to_json(const IdentityReport& r) {
  json samples = json::array();
  for (const auto& s : r.samples) samples.push_back({{"k", {s.k.real(), s.k.imag()}}, {"residual", s.residual}});
  json j = {{"name", r.name},
            {"threshold", r.threshold},
            {"max_rel_residual", r.max_rel_residual},
            {"max_abs_residual", r.max_abs_residual},
            {"pass", r.pass},
            {"samples", samples}};
  if (r.skipped) j["skipped"] = true;
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.diagnostics.empty()) {
    json d = json::object();
    for (const auto& [k, v] : r.diagnostics) d[k] = v;
    j["diagnostics"] = d;
  }
  return j;
}

/// Fixed 17-significant-digit formatting for CSV output.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace resolab::io
