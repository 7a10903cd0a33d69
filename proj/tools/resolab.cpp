// resolab: command-line front end.
//
//   resolab scatter     --potential P --grid 1:10:10 [--out F] [--format csv|json]
//   resolab resonances  --potential P --region -20,20,-6,0.5 [--function omega|s] [--format json|svg]
//   resolab verify      --potential P --suite identities|asymptotics|reflection|counting|uniqueness|all
//   resolab reconstruct --potential P --radius 100 [--zeros Z.json] [--grid 1:10:91]
//   resolab uniqueness  --potential P --potential Q --prefix 0.5 --theorem 1
//
// Exit codes: 0 success (or skip), 1 a check failed, 2 usage or parse
// error, 3 numerical nonconvergence.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resolab/io.hpp"
#include "resolab/resolab.hpp"

namespace {

using namespace resolab;
using json = nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerics = 3;

struct Config {
  std::vector<std::string> potentials;
  std::string region_text = "-20,20,-6,0.5";
  std::string grid_text = "1:10:10";
  bool grid_given = false;
  double radius = 0.0;
  std::string suite = "all";
  std::string out;
  std::string format;
  double tol = 1e-10;
  unsigned threads = default_threads();
  std::string function = "omega";
  std::string zeros_path;
  double prefix = 0.5;
  int theorem = 1;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(what + ": \"" + s + "\" is not a number");
  }
}

Rect parse_region(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw ParseError("--region: expected re0,re1,im0,im1");
  Rect r{to_double(parts[0], "--region"), to_double(parts[1], "--region"), to_double(parts[2], "--region"),
         to_double(parts[3], "--region")};
  try {
    validate(r);
  } catch (const DomainError& e) {
    throw ParseError(std::string("--region: ") + e.what());
  }
  return r;
}

/// start:stop:count[,imag]
std::vector<cplx> parse_grid(const std::string& text) {
  const auto comma = split(text, ',');
  if (comma.empty() || comma.size() > 2) throw ParseError("--grid: expected start:stop:count[,imag]");
  const auto parts = split(comma[0], ':');
  if (parts.size() != 3) throw ParseError("--grid: expected start:stop:count[,imag]");
  const double a = to_double(parts[0], "--grid"), b = to_double(parts[1], "--grid");
  const double n = to_double(parts[2], "--grid");
  if (!(n >= 1.0) || n != std::floor(n)) throw ParseError("--grid: count must be a positive integer");
  const double im = comma.size() == 2 ? to_double(comma[1], "--grid") : 0.0;
  std::vector<cplx> out;
  const auto count = static_cast<int>(n);
  for (int i = 0; i < count; ++i) {
    const double re = count == 1 ? a : a + (b - a) * i / (count - 1.0);
    out.emplace_back(re, im);
  }
  return out;
}

SolverOptions solver_options(const Config&) { return SolverOptions{}; }

SearchOptions search_options(const Config& c) {
  SearchOptions o;
  o.tol = c.tol;
  o.threads = c.threads;
  return o;
}

Potential load(const Config& c, std::size_t i = 0) {
  if (c.potentials.size() <= i) throw ParseError("missing --potential");
  return io::potential_from_file(c.potentials[i]);
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ParseError(c.out + ": cannot open for writing");
  f << text;
}

json config_json(const Config& c, const std::string& command) {
  // Thread count is deliberately absent: output must not depend on it.
  const SolverOptions so{};
  return {{"command", command},
          {"potentials", c.potentials},
          {"region", c.region_text},
          {"grid", c.grid_text},
          {"radius", c.radius},
          {"tol", c.tol},
          {"solver_rtol", so.rtol},
          {"solver_atol", so.atol}};
}

std::string csv_header(const Config& c, const std::string& command) {
  return "# resolab " + command + " " + config_json(c, command).dump() + "\n";
}

// ---------------------------------------------------------------- scatter

int cmd_scatter(const Config& c) {
  const Potential q = load(c);
  const auto grid = parse_grid(c.grid_text);
  const bool real_grid = std::all_of(grid.begin(), grid.end(), [](cplx k) { return k.imag() == 0.0; });
  if (real_grid)
    for (const cplx& k : grid)
      if (k.real() == 0.0) throw DomainError("scatter: the real grid contains k = 0, where T and R are undefined");
  const SolverOptions so = solver_options(c);

  struct Row {
    cplx k, w, s;
    double t = NAN, rp = NAN, rm = NAN, unit = NAN;
  };
  std::vector<Row> rows(grid.size());
  parallel_for(grid.size(), c.threads, [&](std::size_t i) {
    Row r;
    r.k = grid[i];
    r.w = omega(q, r.k, so);
    r.s = s_func(q, r.k, so);
    if (real_grid) {
      const auto sc = scattering_coefficients(q, r.k.real(), so);
      r.t = std::abs(sc.transmission);
      r.rp = std::abs(sc.reflection_plus);
      r.rm = std::abs(sc.reflection_minus);
      r.unit = std::max(std::abs(r.t * r.t + r.rp * r.rp - 1.0), std::abs(r.t * r.t + r.rm * r.rm - 1.0));
    }
    rows[i] = r;
  });

  if (c.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json row = {{"k", {r.k.real(), r.k.imag()}}, {"omega", {r.w.real(), r.w.imag()}}, {"s", {r.s.real(), r.s.imag()}}};
      if (real_grid) {
        row["abs_T"] = r.t;
        row["abs_R_plus"] = r.rp;
        row["abs_R_minus"] = r.rm;
        row["unitarity_residual"] = r.unit;
      }
      arr.push_back(row);
    }
    emit(c, json{{"config", config_json(c, "scatter")}, {"rows", arr}}.dump(2) + "\n");
    return 0;
  }
  std::string text = csv_header(c, "scatter");
  text += real_grid ? "k,re_omega,im_omega,re_s,im_s,abs_T,abs_R_plus,abs_R_minus,unitarity_residual\n"
                    : "re_k,im_k,re_omega,im_omega,re_s,im_s\n";
  for (const auto& r : rows) {
    if (real_grid) {
      text += io::fmt(r.k.real()) + "," + io::fmt(r.w.real()) + "," + io::fmt(r.w.imag()) + "," + io::fmt(r.s.real()) +
              "," + io::fmt(r.s.imag()) + "," + io::fmt(r.t) + "," + io::fmt(r.rp) + "," + io::fmt(r.rm) + "," +
              io::fmt(r.unit) + "\n";
    } else {
      text += io::fmt(r.k.real()) + "," + io::fmt(r.k.imag()) + "," + io::fmt(r.w.real()) + "," + io::fmt(r.w.imag()) +
              "," + io::fmt(r.s.real()) + "," + io::fmt(r.s.imag()) + "\n";
    }
  }
  emit(c, text);
  return 0;
}

// ---------------------------------------------------------------- resonances

std::string svg_scatter(const ZeroSet& zs, const std::string& title) {
  constexpr double W = 640, H = 480, M = 60;
  const Rect& r = zs.region;
  auto px = [&](double re) { return M + (re - r.re_min) / r.width() * (W - 2 * M); };
  auto py = [&](double im) { return H - M - (im - r.im_min) / r.height() * (H - 2 * M); };
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.6g", v);
    return std::string(b);
  };
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + title + "</text>\n";
  s += "<rect x=\"" + num(M) + "\" y=\"" + num(M) + "\" width=\"" + num(W - 2 * M) + "\" height=\"" + num(H - 2 * M) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  if (r.im_min < 0 && r.im_max > 0)
    s += "<line x1=\"" + num(M) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(W - M) + "\" y2=\"" + num(py(0)) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  if (r.re_min < 0 && r.re_max > 0)
    s += "<line x1=\"" + num(px(0)) + "\" y1=\"" + num(M) + "\" x2=\"" + num(px(0)) + "\" y2=\"" + num(H - M) +
         "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double re = r.re_min + r.width() * i / 4.0, im = r.im_min + r.height() * i / 4.0;
    s += "<text x=\"" + num(px(re)) + "\" y=\"" + num(H - M + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + num(re) + "</text>\n";
    s += "<text x=\"" + num(M - 6) + "\" y=\"" + num(py(im) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(im) + "</text>\n";
  }
  s += "<text x=\"320\" y=\"" + num(H - 14) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">Re k</text>\n";
  s += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 16 240)\">Im k</text>\n";
  for (const auto& p : zs.points) {
    const std::string cx = num(px(p.k.real())), cy = num(py(p.k.imag()));
    if (p.kind == SpectralKind::resonance)
      s += "<circle cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"4\" fill=\"none\" stroke=\"firebrick\"/>\n";
    else if (p.kind == SpectralKind::eigenvalue)
      s += "<circle cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"4\" fill=\"navy\"/>\n";
    else
      s += "<rect x=\"" + num(px(p.k.real()) - 4) + "\" y=\"" + num(py(p.k.imag()) - 4) +
           "\" width=\"8\" height=\"8\" fill=\"darkgreen\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

int cmd_resonances(const Config& c) {
  const Potential q = load(c);
  const Rect region = parse_region(c.region_text);
  if (c.function != "omega" && c.function != "s") throw ParseError("--function: expected omega or s");
  const bool is_omega = c.function == "omega";
  const ZeroSet zs = is_omega ? find_omega_zeros(q, region, search_options(c), solver_options(c))
                              : find_s_zeros(q, region, search_options(c), solver_options(c));
  if (c.format == "svg") {
    emit(c, svg_scatter(zs, std::string("zeros of ") + c.function + " (" + std::to_string(zs.count) + ")"));
    return 0;
  }
  json j = io::zero_set_to_json(zs, io::potential_digest(q));
  j["config"] = config_json(c, "resonances");
  emit(c, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------- verify

std::vector<cplx> box_grid(double re0, double re1, double im0, double im1, int nre, int nim) {
  std::vector<cplx> g;
  for (int i = 0; i < nre; ++i)
    for (int j = 0; j < nim; ++j)
      g.emplace_back(re0 + (re1 - re0) * i / (nre - 1.0), im0 + (im1 - im0) * j / (nim - 1.0));
  return g;
}

std::vector<cplx> real_grid(double a, double b, int n) {
  std::vector<cplx> g;
  for (int i = 0; i < n; ++i) g.emplace_back(a + (b - a) * i / (n - 1.0), 0.0);
  return g;
}

IdentityReport uniqueness_report(const Config& c, const Potential& q) {
  IdentityReport rep;
  rep.name = "g1_forms";
  rep.threshold = 1e-7;
  // Without a second potential use the prefix-0 pair (q, q(1 - x)).
  const bool two = c.potentials.size() >= 2;
  const PotentialPair pair = two ? make_pair(q, load(c, 1), c.prefix) : make_pair(q, reflect(q), 0.0);
  if (!two) rep.note = "pair: (q, q(1 - x)) with prefix 0";
  const auto grid = box_grid(0.5, 9.5, -1.0, 1.0, 5, 2);
  std::vector<G1Evaluation> evals(grid.size());
  parallel_for(grid.size(), c.threads, [&](std::size_t i) { evals[i] = g1(pair, grid[i], solver_options(c)); });
  for (const auto& e : evals) {
    // Identical pairs make every form vanish; then the absolute size is the residual.
    const double r = e.max_abs() <= 1e-10 ? 0.0 : e.spread();
    rep.samples.push_back({e.k, r});
    rep.max_rel_residual = std::max(rep.max_rel_residual, r);
    rep.max_abs_residual = std::max(rep.max_abs_residual, e.max_abs() * r);
  }
  rep.finish();
  return rep;
}

int cmd_verify(const Config& c) {
  const Potential q = load(c);
  const SolverOptions so = solver_options(c);
  const std::vector<std::string> known{"identities", "asymptotics", "reflection", "counting", "uniqueness", "all"};
  if (std::find(known.begin(), known.end(), c.suite) == known.end()) throw ParseError("--suite: unknown suite " + c.suite);
  auto want = [&](const char* s) { return c.suite == "all" || c.suite == s; };

  std::vector<IdentityReport> reports;
  if (want("identities")) reports.push_back(check_product_identity(q, box_grid(0.5, 20.0, -2.0, 2.0, 20, 5), so, c.threads));
  if (want("reflection")) reports.push_back(check_reflection(q, real_grid(1.0, 10.0, 100), so, c.threads));
  if (want("asymptotics")) {
    std::vector<double> taus;
    for (double t = -25.0; t <= -8.0 + 1e-9; t += 1.0) taus.push_back(t);
    try {
      reports.push_back(check_asymptotics(q, taus, so));
    } catch (const InapplicableError& e) {
      reports.push_back(skipped_report("asymptotics", e.what()));
    }
  }
  if (want("counting")) {
    if (!in_class_q1(q)) {
      reports.push_back(skipped_report("counting_trend", "potential outside class Q1"));
    } else {
      const double R = c.radius > 0.0 ? c.radius : 40.0;
      const ZeroSet zs = find_omega_zeros(q, {-R, R, -R, R}, search_options(c), so);
      reports.push_back(verify_counting_trend(q, zs, {R / 4.0, R / 2.0, R}));
    }
  }
  if (want("uniqueness")) reports.push_back(uniqueness_report(c, q));

  bool pass = true;
  json arr = json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    arr.push_back(io::report_to_json(r));
  }
  emit(c, json{{"config", config_json(c, "verify")}, {"suite", c.suite}, {"pass", pass}, {"reports", arr}}.dump(2) + "\n");
  for (const auto& r : reports)
    std::cerr << (r.skipped ? "SKIP " : (r.pass ? "PASS " : "FAIL ")) << r.name
              << (r.skipped ? " (" + r.note + ")" : " max_rel_residual=" + io::fmt(r.max_rel_residual)) << "\n";
  return pass ? 0 : kExitFail;
}

// ---------------------------------------------------------------- reconstruct

int cmd_reconstruct(const Config& c) {
  const Potential q = load(c);
  const double R = c.radius > 0.0 ? c.radius : 100.0;
  ZeroSet zs;
  if (!c.zeros_path.empty()) {
    const json j = io::parse_text(io::read_file(c.zeros_path), c.zeros_path);
    zs = io::zero_set_from_json(j, c.zeros_path);
    if (zs.function != ZeroFunction::omega) throw ParseError(c.zeros_path + ": reconstruction needs zeros of omega");
    if (j.at("potential_digest").get<std::string>() != io::potential_digest(q))
      throw ParseError(c.zeros_path + ": zero set was computed for a different potential");
  } else {
    zs = find_omega_zeros(q, {-R, R, -R, R}, search_options(c), solver_options(c));
  }
  std::vector<double> probes;
  for (int i = 1; i <= 4; ++i) probes.push_back(R / 16.0 * i);
  const auto rec = hadamard_reconstruct(zs, probes, R, support_length(q));
  const auto grid = parse_grid(c.grid_text);

  std::string text = csv_header(c, "reconstruct");
  text += "# c_omega " + io::fmt(rec.c_omega.real()) + " " + io::fmt(rec.c_omega.imag()) + "\n";
  text += "# s_exponent " + std::to_string(rec.s_exponent) + " zeros_used " + std::to_string(rec.factors.size()) + "\n";
  for (const auto& [k, v] : rec.limit_samples)
    text += "# cauchy_sample " + io::fmt(k) + " " + io::fmt(v.real()) + " " + io::fmt(v.imag()) + "\n";
  text += "re_k,im_k,abs_omega,abs_omega_hat,rel_error\n";
  double worst = 0.0;
  for (const cplx& k : grid) {
    const cplx w = omega(q, k, solver_options(c));
    const cplx wh = rec(k);
    const double rel = std::abs(wh - w) / std::abs(w);
    worst = std::max(worst, rel);
    text += io::fmt(k.real()) + "," + io::fmt(k.imag()) + "," + io::fmt(std::abs(w)) + "," + io::fmt(std::abs(wh)) +
            "," + io::fmt(rel) + "\n";
  }
  text += "# max_rel_error " + io::fmt(worst) + "\n";
  emit(c, text);
  return 0;
}

// ---------------------------------------------------------------- uniqueness

json demo_to_json(const DemoReport& r) {
  auto zeros = [](const ZeroSet& zs) {
    json a = json::array();
    for (const auto& p : zs.points) a.push_back({p.k.real(), p.k.imag(), p.multiplicity});
    return a;
  };
  json j = {{"theorem", r.theorem},
            {"header", r.header},
            {"applicable", r.applicable},
            {"prefix", r.prefix},
            {"verdict", r.verdict}};
  if (!r.applicable) {
    j["inapplicable_reason"] = r.inapplicable_reason;
    return j;
  }
  json hyp = json::object();
  for (const auto& [k, v] : r.hypothesis) hyp[k] = v;
  j["hypothesis"] = hyp;
  j["zeros_q"] = zeros(r.zeros_q);
  j["zeros_q_tilde"] = zeros(r.zeros_q_tilde);
  if (r.omega_zeros_q) j["omega_zeros_q"] = zeros(*r.omega_zeros_q);
  if (r.omega_zeros_q_tilde) j["omega_zeros_q_tilde"] = zeros(*r.omega_zeros_q_tilde);
  if (r.density)
    j["density"] = {{"subset", r.density->subset_label},
                    {"radii", r.density->radii},
                    {"counts", r.density->counts},
                    {"gamma_hat", r.density->gamma_hat},
                    {"threshold", r.density->threshold},
                    {"meets_threshold", r.density->meets_threshold}};
  auto signs = [](const std::vector<std::pair<int, int>>& v) {
    json a = json::array();
    for (const auto& [i, s] : v) a.push_back({i, s});
    return a;
  };
  if (!r.sign_q.empty()) {
    j["signs_q"] = signs(r.sign_q);
    j["signs_q_tilde"] = signs(r.sign_q_tilde);
  }
  auto taus = [](const std::vector<std::pair<cplx, cplx>>& v) {
    json a = json::array();
    for (const auto& [k, t] : v) {
      if (std::isnan(t.real()))
        a.push_back({k.real(), k.imag(), "inf"});
      else
        a.push_back({k.real(), k.imag(), t.real(), t.imag()});
    }
    return a;
  };
  if (!r.tau_q.empty()) {
    j["tau_q"] = taus(r.tau_q);
    j["tau_q_tilde"] = taus(r.tau_q_tilde);
  }
  j["data_distance"] = std::isfinite(r.data_distance) ? json(r.data_distance) : json("inf");
  j["data_coincide"] = r.data_coincide;
  j["tail_max_difference"] = r.tail_max_difference;
  j["consistent"] = r.consistent;
  return j;
}

int cmd_uniqueness(const Config& c) {
  if (c.potentials.size() != 2) throw ParseError("uniqueness: give exactly two --potential files (q and q~)");
  const PotentialPair pair = make_pair(load(c, 0), load(c, 1), c.prefix);
  DemoConfig cfg;
  cfg.theorem = c.theorem;
  if (c.radius > 0.0) {
    cfg.radius = c.radius;
    cfg.density_radii = {c.radius / 3.0, 2.0 * c.radius / 3.0, c.radius};
  }
  cfg.search = search_options(c);
  cfg.solver = solver_options(c);
  const DemoReport rep = theorem_demo(pair, cfg);
  json j = demo_to_json(rep);
  j["config"] = config_json(c, "uniqueness");
  emit(c, j.dump(2) + "\n");
  std::cerr << rep.verdict << "\n";
  if (!rep.applicable) return 0;
  return rep.consistent ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jost functions, resonances and uniqueness experiments for potentials supported in [0, 1]"};
  app.require_subcommand(1);
  Config c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--potential", c.potentials, "potential JSON file (repeatable for pairs)");
    sub->add_option("--out", c.out, "output file (default: stdout)");
    sub->add_option("--tol", c.tol, "Newton tolerance for zero polishing")->check(CLI::PositiveNumber);
    sub->add_option("--threads", c.threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
  };
  auto* scatter = app.add_subcommand("scatter", "omega, s, |T|, |R+-| on a k grid");
  add_common(scatter);
  scatter->add_option("--grid", c.grid_text, "start:stop:count[,imag]");
  scatter->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* resonances = app.add_subcommand("resonances", "zeros of omega (or s) in a rectangle");
  add_common(resonances);
  resonances->add_option("--region", c.region_text, "re0,re1,im0,im1");
  resonances->add_option("--function", c.function, "omega or s");
  resonances->add_option("--format", c.format, "json or svg")->check(CLI::IsMember({"json", "svg"}));

  auto* verify = app.add_subcommand("verify", "identity and asymptotics suites");
  add_common(verify);
  verify->add_option("--suite", c.suite, "identities|asymptotics|reflection|counting|uniqueness|all");
  verify->add_option("--radius", c.radius, "counting radius (default 40)")->check(CLI::PositiveNumber);
  verify->add_option("--prefix", c.prefix, "agreement prefix when two potentials are given");
  verify->add_option("--format", c.format, "json")->check(CLI::IsMember({"json"}));

  auto* reconstruct = app.add_subcommand("reconstruct", "omega from its zeros via the disk-ordered product");
  add_common(reconstruct);
  reconstruct->add_option("--radius", c.radius, "truncation radius R (default 100)")->check(CLI::PositiveNumber);
  reconstruct->add_option("--zeros", c.zeros_path, "zero-set JSON from `resonances` (default: search [-R,R]^2)");
  reconstruct->add_option("--grid", c.grid_text, "comparison grid (default 1:10:91)");
  reconstruct->add_option("--format", c.format, "csv")->check(CLI::IsMember({"csv"}));

  auto* uniq = app.add_subcommand("uniqueness", "falsification demo for one of the uniqueness theorems");
  add_common(uniq);
  uniq->add_option("--prefix", c.prefix, "agreement prefix a");
  uniq->add_option("--theorem", c.theorem, "1, 2, 3 or 4")->check(CLI::Range(1, 4));
  uniq->add_option("--radius", c.radius, "data disk radius (default 15)")->check(CLI::PositiveNumber);
  uniq->add_option("--format", c.format, "json")->check(CLI::IsMember({"json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  c.grid_given = reconstruct->get_option("--grid")->count() > 0;
  if (*reconstruct && !c.grid_given) c.grid_text = "1:10:91";
  // Echo the radius actually used.
  if (c.radius <= 0.0) c.radius = *verify ? 40.0 : *reconstruct ? 100.0 : *uniq ? 15.0 : 0.0;
  try {
    if (*scatter) return cmd_scatter(c);
    if (*resonances) return cmd_resonances(c);
    if (*verify) return cmd_verify(c);
    if (*reconstruct) return cmd_reconstruct(c);
    if (*uniq) return cmd_uniqueness(c);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InapplicableError& e) {
    std::cerr << "skipped: " << e.what() << "\n";
    return 0;
  } catch (const NonconvergenceError& e) {
    std::cerr << "nonconvergence: " << e.what() << "\n";
    return kExitNumerics;
  } catch (const ConsistencyError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
