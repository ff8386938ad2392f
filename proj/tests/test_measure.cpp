#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "diffhank/measure.hpp"

using namespace diffhank;

namespace {

Measure lebesgue(double beta = 0.0) { return Measure({}, {PowerLawDensity{1.0, beta, -kInf, 0.0}}); }

bool has_reason(const std::vector<Violation>& v, const std::string& component,
                const std::string& reason) {
  for (const auto& x : v)
    if (x.component == component && x.reason.find(reason) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Measure, Flags) {
  Measure a({{complex{-1.0, 0.0}, 1.0}}, {});
  EXPECT_TRUE(a.is_positive());
  EXPECT_TRUE(a.on_negative_axis());

  Measure off({{complex{-1.0, 2.0}, 1.0}}, {});
  EXPECT_FALSE(off.on_negative_axis());

  Measure signed_atoms({{complex{-1.0, 0.0}, 1.0}, {complex{-2.0, 0.0}, -0.5}}, {});
  EXPECT_FALSE(signed_atoms.is_positive());

  Measure cw({{complex{-1.0, 0.0}, complex{1.0, 1.0}}}, {});
  EXPECT_FALSE(cw.is_positive());
}

TEST(Measure, ValidateAtomOnImaginaryAxis) {
  Measure m({{complex{0.0, 1.0}, 1.0}}, {});
  const auto v = validate(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].component, "atoms[0]");
  EXPECT_EQ(v[0].reason, "location not in open left half-plane");
  EXPECT_THROW(require_valid(m), std::invalid_argument);
}

TEST(Measure, ValidatePowerLawAtOrigin) {
  Measure m({}, {PowerLawDensity{1.0, -1.0, -1.0, 0.0}});
  EXPECT_TRUE(has_reason(validate(m), "densities[0]", "non-integrable at origin"));

  Measure ok({}, {PowerLawDensity{1.0, -0.999, -1.0, 0.0}});
  EXPECT_TRUE(validate(ok).empty());

  // away from the origin any exponent is fine
  Measure away({}, {PowerLawDensity{1.0, -3.0, -2.0, -1.0}});
  EXPECT_TRUE(validate(away).empty());
}

TEST(Measure, ValidateSampled) {
  Measure bad({}, {SampledDensity{{-1.0, -2.0}, {1.0, 1.0}}});
  EXPECT_FALSE(validate(bad).empty());
  Measure mismatch({}, {SampledDensity{{-2.0, -1.0, 0.0}, {1.0, 1.0}}});
  EXPECT_FALSE(validate(mismatch).empty());
  Measure past_origin({}, {SampledDensity{{-1.0, 0.5}, {1.0, 1.0}}});
  EXPECT_FALSE(validate(past_origin).empty());
  Measure good({}, {SampledDensity{{-2.0, -1.0, 0.0}, {0.0, 1.0, 0.0}}});
  EXPECT_TRUE(validate(good).empty());
}

TEST(Measure, BoxMassExample) {
  // (2/3)(2^{3/2} - 1)
  Measure m({}, {PowerLawDensity{1.0, 0.5, -kInf, 0.0}});
  EXPECT_NEAR(box_mass(m, -2.0, -1.0), 1.21895141649746, 1e-12);
}

TEST(Measure, BoxMassAtomsHalfOpen) {
  Measure m({{complex{-1.0, 0.0}, 2.0}, {complex{-3.0, 0.0}, 5.0}}, {});
  EXPECT_DOUBLE_EQ(box_mass(m, -2.0, -1.0), 2.0);
  EXPECT_DOUBLE_EQ(box_mass(m, -1.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(box_mass(m, -3.0, -1.0), 2.0);
  EXPECT_DOUBLE_EQ(box_mass(m, -4.0, 0.0), 7.0);
}

TEST(Measure, BoxMassRejectsOffAxis) {
  Measure m({{complex{-1.0, 1.0}, 1.0}}, {});
  EXPECT_THROW(box_mass(m, -2.0, 0.0), std::invalid_argument);
}

TEST(Measure, BoxMassSampledTrapezoid) {
  // hat function of height 1 on [-2, 0]
  Measure m({}, {SampledDensity{{-2.0, -1.0, 0.0}, {0.0, 1.0, 0.0}}});
  EXPECT_NEAR(box_mass(m, -2.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(box_mass(m, -1.5, -0.5), 0.75, 1e-15);
  EXPECT_NEAR(box_mass(m, -10.0, -3.0), 0.0, 1e-15);
}

// additivity over adjacent boxes
TEST(Measure, BoxMassAdditive) {
  Measure m({{complex{-0.7, 0.0}, 0.3}},
            {PowerLawDensity{2.0, -0.5, -kInf, 0.0}, SampledDensity{{-4.0, -1.0}, {1.0, 3.0}}});
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-6.0, 0.0);
  for (int trial = 0; trial < 200; ++trial) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    const double whole = box_mass(m, a, c);
    const double parts = box_mass(m, a, b) + box_mass(m, b, c);
    EXPECT_NEAR(whole, parts, 1e-12 * (1.0 + whole));
  }
}

TEST(Measure, AbsMomentPowerLaw) {
  // int_0^inf r^beta r^{-q} dr diverges for every q on the full ray
  EXPECT_FALSE(abs_moment(lebesgue(), 1.0).finite);
  EXPECT_FALSE(abs_moment(lebesgue(0.5), 0.5).finite);

  // int_1^inf r^{-3} dr = 1/2
  Measure tail({}, {PowerLawDensity{1.0, -2.0, -kInf, -1.0}});
  const auto m = abs_moment(tail, 1.0);
  ASSERT_TRUE(m.finite);
  EXPECT_NEAR(m.value, 0.5, 1e-15);

  // int_0^1 r^{1/2} r^{-1} dr = 2
  Measure head({}, {PowerLawDensity{1.0, 0.5, -1.0, 0.0}});
  const auto h = abs_moment(head, 1.0);
  ASSERT_TRUE(h.finite);
  EXPECT_NEAR(h.value, 2.0, 1e-15);
  EXPECT_FALSE(abs_moment(head, 1.5).finite);
}

TEST(Measure, AbsMomentAtoms) {
  Measure m({{complex{-2.0, 0.0}, 3.0}, {complex{-1.0, 1.0}, complex{0.0, -4.0}}}, {});
  const auto r = abs_moment(m, 1.0);
  ASSERT_TRUE(r.finite);
  // |Re p| in the denominator, |weight| in the numerator
  EXPECT_NEAR(r.value, 1.5 + 4.0, 1e-14);
}

TEST(Measure, AbsMomentSampledSignChange) {
  // density x+2 on [-3, -1]: int_1^3 |2-r|/r dr = 2 ln(4/3)
  Measure m({}, {SampledDensity{{-3.0, -1.0}, {-1.0, 1.0}}});
  const auto r = abs_moment(m, 1.0);
  ASSERT_TRUE(r.finite);
  EXPECT_NEAR(r.value, 2.0 * std::log(4.0 / 3.0), 1e-14);
  // touching zero with a nonzero value: int 1/r dr diverges at 0
  Measure t({}, {SampledDensity{{-2.0, 0.0}, {-1.0, 1.0}}});
  EXPECT_FALSE(abs_moment(t, 1.0).finite);
  // density vanishing at the origin keeps q=1 finite
  Measure z({}, {SampledDensity{{-2.0, 0.0}, {2.0, 0.0}}});
  const auto rz = abs_moment(z, 1.0);
  ASSERT_TRUE(rz.finite);
  EXPECT_NEAR(rz.value, 2.0, 1e-14);
  EXPECT_THROW(abs_moment(z, 0.0), std::invalid_argument);
}

TEST(Measure, Scaled) {
  Measure m({{complex{-1.0, 0.0}, 2.0}}, {PowerLawDensity{1.0, 0.5, -kInf, 0.0}});
  const auto s = m.scaled(3.0);
  EXPECT_DOUBLE_EQ(box_mass(s, -2.0, -0.5), 3.0 * box_mass(m, -2.0, -0.5));
}
