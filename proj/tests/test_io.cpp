#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "diffhank/commands.hpp"
#include "diffhank/io.hpp"

using namespace diffhank;

namespace {

std::string expect_config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  ADD_FAILURE() << "no ConfigError for " << text;
  return {};
}

}  // namespace

TEST(Config, Minimal) {
  const auto cfg = parse_config(R"({"measure": {"atoms": [{"re": -1, "weight_re": 1}]}})");
  ASSERT_EQ(cfg.measure.atoms().size(), 1u);
  EXPECT_EQ(cfg.measure.atoms()[0].location, complex(-1.0, 0.0));
  EXPECT_DOUBLE_EQ(cfg.weight.scale, 1.0);
  EXPECT_DOUBLE_EQ(cfg.weight.alpha, 0.0);
  EXPECT_EQ(cfg.grid.panels, GridSpec{}.panels);
}

TEST(Config, Full) {
  const auto cfg = parse_config(R"({
    "measure": {
      "atoms": [{"re": -1, "im": 2, "weight_re": 0.5, "weight_im": -1}],
      "densities": [
        {"kind": "power_law", "coeff": 2, "exponent": -0.5, "support": [null, 0]},
        {"kind": "sampled", "nodes": [-2, -1, 0], "values": [0, 1, 0]}
      ]
    },
    "weight": {"scale": 0.75, "alpha": -0.25},
    "grid": {"t_min": 1e-3, "t_max": 1e3, "panels": 8, "order": 6},
    "times": [0.5, 1],
    "points": [[1, 0], [2, -1]]
  })");
  EXPECT_EQ(cfg.measure.atoms()[0].weight, complex(0.5, -1.0));
  ASSERT_EQ(cfg.measure.densities().size(), 2u);
  const auto& p = std::get<PowerLawDensity>(cfg.measure.densities()[0]);
  EXPECT_TRUE(p.reaches_infinity());
  EXPECT_TRUE(p.touches_origin());
  EXPECT_DOUBLE_EQ(cfg.weight.alpha, -0.25);
  EXPECT_EQ(cfg.grid.order, 6);
  ASSERT_EQ(cfg.points.size(), 2u);
  EXPECT_EQ(cfg.points[1], complex(2.0, -1.0));
  EXPECT_EQ(cfg.times.size(), 2u);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(expect_config_error(R"({"weight": {"scale": 1, "alpha": 0}})"), "measure");
  EXPECT_EQ(expect_config_error(
                R"({"measure": {"atoms": [{"re": -1, "weight_re": 1}]}, "weight": {"scale": 1}})"),
            "weight.alpha");
  EXPECT_EQ(expect_config_error(R"({"measure": {"atoms": [{"weight_re": 1}]}})"),
            "measure.atoms[0].re");
  EXPECT_EQ(expect_config_error(
                R"({"measure": {"densities": [{"kind": "spline", "nodes": [], "values": []}]}})"),
            "measure.densities[0].kind");
  EXPECT_THROW(parse_config("{not json"), ConfigError);
}

TEST(Config, MissingAlphaMessage) {
  try {
    parse_config(R"({"measure": {"atoms": [{"re": -1, "weight_re": 1}]}, "weight": {"scale": 1}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("weight.alpha"), std::string::npos);
  }
}

TEST(Config, InvalidMeasureRejected) {
  EXPECT_THROW(parse_config(R"({"measure": {"atoms": [{"re": 0, "im": 1, "weight_re": 1}]}})"),
               std::invalid_argument);
}

TEST(Format, Doubles) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  const double x = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Format, ParseComplex) {
  EXPECT_EQ(parse_complex("2+1i"), complex(2.0, 1.0));
  EXPECT_EQ(parse_complex("1"), complex(1.0, 0.0));
  EXPECT_EQ(parse_complex("1e-3-2.5i"), complex(1e-3, -2.5));
  EXPECT_EQ(parse_complex("-1i"), complex(0.0, -1.0));
  EXPECT_THROW(parse_complex("abc"), std::invalid_argument);
}

TEST(Csv, Impulse) {
  Measure m({}, {PowerLawDensity{1.0, 0.0, -kInf, 0.0}});
  EXPECT_EQ(impulse_csv(m, {2.0}), "t,re_h,im_h\n2,0.5,0\n");
}

TEST(Csv, Transfer) {
  Measure a({{complex{-1.0, 0.0}, 1.0}}, {});
  EXPECT_EQ(transfer_csv(a, {complex{1.0, 0.0}}), "s_re,s_im,re_g,im_g\n1,0,0.5,0\n");
  Measure leb({}, {PowerLawDensity{1.0, 0.0, -kInf, 0.0}});
  EXPECT_EQ(transfer_csv(leb, {complex{1.0, 0.0}}), "s_re,s_im,re_g,im_g\n1,0,divergent,divergent\n");
}

TEST(Csv, Spectrum) {
  SingularSpectrum s({2.0, 1.0, 0.25});
  EXPECT_EQ(spectrum_csv(s, 2), "k,sigma\n1,2\n2,1\n");
  EXPECT_EQ(spectrum_csv(s, 10), "k,sigma\n1,2\n2,1\n3,0.25\n");
}

TEST(Json, ReportRoundTrip) {
  Measure m({{complex{-1.0, 0.0}, 1.0}}, {});
  const auto r = classify(m, PowerWeight::glover());
  const auto j = to_json(r);
  const auto back = report_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.bibo.status, r.bibo.status);
  EXPECT_EQ(back.bounded.status, r.bounded.status);
  EXPECT_EQ(back.hilbert_schmidt.status, r.hilbert_schmidt.status);
  EXPECT_EQ(back.nuclear.status, r.nuclear.status);
  EXPECT_EQ(back.nuclear.value, r.nuclear.value);
  EXPECT_EQ(back.weight.alpha, r.weight.alpha);
  EXPECT_EQ(back.notes, r.notes);
}

TEST(Json, DivergentValueIsNull) {
  Measure leb({}, {PowerLawDensity{1.0, 0.0, -kInf, 0.0}});
  const auto r = classify(leb, PowerWeight{});
  const auto j = to_json(r);
  EXPECT_TRUE(j["bibo"]["value"].is_null());
  EXPECT_EQ(j["bibo"]["status"], "fails");
  const auto back = report_from_json(j);
  EXPECT_TRUE(std::isinf(back.bibo.value));
}

TEST(Json, BoundsRoundTrip) {
  ReductionBounds b{3, 0.125, 0.5};
  const auto back = bounds_from_json(json::parse(to_json(b).dump()));
  EXPECT_EQ(back.degree, 3u);
  EXPECT_EQ(back.lower, 0.125);
  EXPECT_EQ(back.upper, 0.5);
}

TEST(Commands, BoundsRejectsLargeDegree) {
  auto cfg = parse_config(
      R"({"measure": {"atoms": [{"re": -1, "weight_re": 1}]}, "grid": {"panels": 2, "order": 4}})");
  EXPECT_THROW(cmd_bounds(cfg, 8), std::invalid_argument);
  EXPECT_NO_THROW(cmd_bounds(cfg, 2));
}

TEST(Commands, AnalyzeTableMentionsEveryCriterion) {
  auto cfg = parse_config(R"({"measure": {"atoms": [{"re": -1, "weight_re": 1}]}})");
  const auto out = cmd_analyze(cfg);
  for (const char* name : {"bibo", "bounded", "hilbert_schmidt", "nuclear"})
    EXPECT_NE(out.secondary.find(name), std::string::npos) << name;
  const auto j = json::parse(out.primary);
  EXPECT_EQ(j["nuclear"]["status"], "holds");
}
