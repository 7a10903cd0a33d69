#include <gtest/gtest.h>

#include <cmath>

#include "resolab/errors.hpp"
#include "resolab/io.hpp"

using namespace resolab;
using io::json;

namespace {

Potential parse(const std::string& text) { return io::potential_from_json(io::parse_text(text, "test"), "test"); }

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

ZeroSet small_set() {
  ZeroSet zs;
  zs.region = {-2, 2, -3, 3};
  zs.function = ZeroFunction::omega;
  zs.points = {{cplx{0.0, 1.5}, 1, SpectralKind::eigenvalue},
               {cplx{-1.0, -1.0}, 1, SpectralKind::resonance},
               {cplx{1.0, -1.0}, 1, SpectralKind::resonance}};
  zs.count = 3;
  zs.residual_bound = 1e-12;
  return zs;
}

}  // namespace

TEST(Io, ParsesEveryPotentialType) {
  EXPECT_EQ(parse(R"({"type":"square_well","amplitude":2})")(0.3), 2.0);
  EXPECT_EQ(parse(R"({"type":"step","breakpoints":[0,0.5,1],"levels":[1,3]})")(0.7), 3.0);
  // Local variable t = x - 0.5 on the second piece: 1 + 2 (0.25).
  EXPECT_DOUBLE_EQ(parse(R"({"type":"piecewise_poly","breakpoints":[0,0.5,1],"coefficients":[[0],[1,2]]})")(0.75), 1.5);
  EXPECT_DOUBLE_EQ(parse(R"({"type":"grid","samples":[0,2,0],"interpolation":1})")(0.25), 1.0);
  EXPECT_DOUBLE_EQ(parse(R"({"type":"bump","m":1,"n":1,"amplitude":6})")(0.5), 6.0 * 0.25);
}

TEST(Io, SmoothnessOverride) {
  const auto p = parse(R"({"type":"grid","samples":[0,1,0],"interpolation":1,"smoothness":{"m":0,"n":0,"delta":0.3}})");
  ASSERT_TRUE(p.smoothness().has_value());
  EXPECT_EQ(p.smoothness()->delta, 0.3);
  const auto d = parse(R"({"type":"grid","samples":[0,1,0],"interpolation":1,"smoothness":{"m":1,"n":2}})");
  EXPECT_EQ(d.smoothness()->n, 2);
  EXPECT_EQ(d.smoothness()->delta, 0.5);
}

TEST(Io, ErrorsNameTheField) {
  EXPECT_NE(parse_error(R"({"type":"square_well","amplitude":2,"colour":1})").find("\"colour\""), std::string::npos);
  EXPECT_NE(parse_error(R"({"type":"square_well"})").find("missing field \"amplitude\""), std::string::npos);
  EXPECT_NE(parse_error(R"({"type":"square_well","amplitude":"x"})").find("\"amplitude\""), std::string::npos);
  EXPECT_NE(parse_error(R"({"type":"hat"})").find("unknown potential type"), std::string::npos);
  EXPECT_NE(parse_error(R"({"type":"step","breakpoints":[0,0.7,0.5,1],"levels":[1,2,3]})").find("step"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"type":"bump","m":1,"n":1,"amplitude":1,"smoothness":{"m":1,"q":0}})").find("\"q\""),
            std::string::npos);
  EXPECT_NE(parse_error("[1, 2]").find("object"), std::string::npos);
}

TEST(Io, MalformedJsonReportsLineAndColumn) {
  try {
    io::parse_text("{\n  \"type\": \"step\",\n  \"levels\": [1, 2,, 3]\n}", "f.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("f.json:3:"), std::string::npos) << e.what();
  }
}

TEST(Io, MissingFileIsParseError) { EXPECT_THROW(io::potential_from_file("/nonexistent/q.json"), ParseError); }

TEST(Io, PotentialRoundTrip) {
  const std::vector<std::string> texts{
      R"({"type":"square_well","amplitude":-20})",
      R"({"type":"step","breakpoints":[0,0.3,0.7,1],"levels":[1,-2,3]})",
      R"({"type":"piecewise_poly","breakpoints":[0,0.4,1],"coefficients":[[1,2],[-3,0,5]]})",
      R"({"type":"grid","samples":[0,1,3,2,0.5,0],"interpolation":3})",
      R"({"type":"bump","m":2,"n":1,"amplitude":0.1})"};
  for (const auto& t : texts) {
    const auto p = parse(t);
    const auto back = io::potential_from_json(io::potential_to_json(p));
    EXPECT_EQ(io::potential_digest(back), io::potential_digest(p)) << t;
    for (double x : {0.0, 0.123, 0.5, 0.77, 1.0}) EXPECT_EQ(back(x), p(x)) << t;
  }
}

TEST(Io, DigestIsStableAndDiscriminating) {
  const auto a = Potential::square_well(2.0);
  EXPECT_EQ(io::potential_digest(a), io::potential_digest(Potential::square_well(2.0)));
  EXPECT_EQ(io::potential_digest(a).size(), 16u);
  EXPECT_NE(io::potential_digest(a), io::potential_digest(Potential::square_well(2.0000000001)));
  const auto s = Potential::step({0.0, 0.5, 1.0}, {1.0, 3.0});
  EXPECT_NE(io::potential_digest(s), io::potential_digest(reflect(s)));
  EXPECT_NE(io::potential_digest(splice(a, s, 0.5)), io::potential_digest(splice(a, s, 0.6)));
  // FNV-1a reference value for the empty string.
  EXPECT_EQ(io::detail::fnv1a(""), 14695981039346656037ull);
}

TEST(Io, ZeroSetRoundTrip) {
  const auto zs = small_set();
  const json j = io::zero_set_to_json(zs, "abc");
  EXPECT_EQ(j.at("potential_digest"), "abc");
  const auto back = io::zero_set_from_json(json::parse(j.dump()));
  ASSERT_EQ(back.points.size(), zs.points.size());
  for (std::size_t i = 0; i < zs.points.size(); ++i) {
    EXPECT_EQ(back.points[i].k, zs.points[i].k);
    EXPECT_EQ(back.points[i].kind, zs.points[i].kind);
  }
  EXPECT_EQ(back.count, 3);
  EXPECT_EQ(back.region.im_max, 3.0);
  EXPECT_EQ(j.dump(), io::zero_set_to_json(back, "abc").dump());
}

TEST(Io, ZeroSetValidation) {
  const json good = io::zero_set_to_json(small_set(), "abc");
  auto expect_bad = [](json j, const char* what) {
    try {
      io::zero_set_from_json(j);
      ADD_FAILURE() << "accepted: " << what;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(what), std::string::npos) << e.what();
    }
  };
  json j = good;
  j["zeros"][1]["multiplicity"] = 0;
  expect_bad(j, "multiplicity must be positive");
  j = good;
  j["zeros"][0]["kind"] = "resonance";
  expect_bad(j, "does not match");
  j = good;
  j["zeros"][0]["re"] = 0.5;  // eigenvalue off the imaginary axis
  expect_bad(j, "zeros[0]");
  j = good;
  j["zeros"][2]["re"] = 10.0;
  expect_bad(j, "outside the region");
  j = good;
  j["count"] = 4;
  expect_bad(j, "count");
  j = good;
  j["region"] = {1, 0, 0, 1};
  expect_bad(j, "region");
  j = good;
  j["function"] = "tau";
  expect_bad(j, "function");
  j = good;
  j["extra"] = 1;
  expect_bad(j, "unknown field");
}

TEST(Io, ReportJsonFields) {
  IdentityReport r;
  r.name = "x";
  r.threshold = 1e-8;
  r.max_rel_residual = 2e-9;
  r.samples.push_back({cplx{1.0, 2.0}, 2e-9});
  r.diagnostics.emplace_back("d", 0.5);
  r.finish();
  const json j = io::report_to_json(r);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_EQ(j.at("samples")[0].at("k")[1], 2.0);
  EXPECT_EQ(j.at("diagnostics").at("d"), 0.5);
  EXPECT_FALSE(j.contains("skipped"));
  EXPECT_TRUE(io::report_to_json(skipped_report("y", "why")).at("skipped").get<bool>());
}

TEST(Io, FormatUsesSeventeenDigits) {
  EXPECT_EQ(io::fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(io::fmt(2.0), "2");
  for (double v : {M_PI, -1e-300, 12345.678901234567})
    EXPECT_EQ(std::stod(io::fmt(v)), v);
}
