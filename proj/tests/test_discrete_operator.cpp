#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "diffhank/discrete_operator.hpp"

using namespace diffhank;

namespace {

Measure power_law(double beta) { return Measure({}, {PowerLawDensity{1.0, beta, -kInf, 0.0}}); }

Measure atoms(std::vector<std::pair<double, double>> xs) {
  std::vector<Atom> a;
  for (auto [x, w] : xs) a.push_back({complex{x, 0.0}, w});
  return Measure(a, {});
}

}  // namespace

TEST(Spectrum, Validation) {
  EXPECT_NO_THROW(SingularSpectrum({3.0, 2.0, 2.0, 0.0}));
  EXPECT_THROW(SingularSpectrum({1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(SingularSpectrum({1.0, -1.0}), std::invalid_argument);
}

TEST(Spectrum, NormsAndBounds) {
  SingularSpectrum s({4.0, 3.0, 1.0, 0.5});
  const auto n = norms(s);
  EXPECT_DOUBLE_EQ(n.operator_norm, 4.0);
  EXPECT_DOUBLE_EQ(n.hilbert_schmidt, std::sqrt(16.0 + 9.0 + 1.0 + 0.25));
  EXPECT_DOUBLE_EQ(n.nuclear, 8.5);
  const auto b = reduction_bounds(s, 1);
  EXPECT_DOUBLE_EQ(b.lower, 3.0);
  EXPECT_DOUBLE_EQ(b.upper, 4.5);
  EXPECT_EQ(numerical_rank(s, 0.2), 3u);
  EXPECT_THROW(reduction_bounds(s, 4), std::invalid_argument);
}

TEST(Kernel, SymmetricAndReal) {
  const auto rule = build_rule(1e-4, 1e4, 12, 8);
  const auto k = assemble_kernel(power_law(0.0), PowerWeight{1.0, 0.0}, rule);
  ASSERT_TRUE(k.is_real());
  EXPECT_EQ(k.dim(), 96);
  EXPECT_EQ((k.real - k.real.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Kernel, ComplexAtomsGiveComplexMatrix) {
  Measure m({{complex{-1.0, 1.0}, 1.0}, {complex{-1.0, -1.0}, 1.0}, {complex{-2.0, 3.0}, 0.5}}, {});
  const auto rule = build_rule(1e-4, 1e3, 12, 8);
  const auto k = assemble_kernel(m, PowerWeight{1.0, 0.0}, rule);
  EXPECT_FALSE(k.is_real());
  const auto s = singular_values(k);
  EXPECT_GT(s.largest(), 0.0);
}

TEST(Kernel, RejectsInvalidMeasure) {
  Measure m({{complex{0.5, 0.0}, 1.0}}, {});
  EXPECT_THROW(assemble_kernel(m, PowerWeight{}, build_rule(1e-2, 1e2, 4, 4)),
               std::invalid_argument);
}

// a rank-one kernel: sigma_1 = ||psi_p||^2 and the rest vanish
TEST(Kernel, SingleAtomRankOne) {
  const auto rule = default_rule();
  const auto w = PowerWeight::glover();
  const auto s = singular_values(assemble_kernel(atoms({{-1.0, 1.0}}), w, rule));
  EXPECT_NEAR(s[0], psi_norm_sq(complex{-1.0, 0.0}, w), 1e-10);
  EXPECT_LT(s[1], 1e-12 * s[0]);
}

TEST(Kernel, HilbertNorm) {
  const auto s = singular_values(assemble_kernel(power_law(0.0), PowerWeight{1.0, 0.0}, default_rule()));
  EXPECT_GE(s.largest(), 3.10);
  EXPECT_LE(s.largest(), std::numbers::pi + 1e-6);
}

TEST(Kernel, EigenvaluesOfPositiveMeasureNonnegative) {
  const auto rule = build_rule(1e-6, 1e6, 24, 16);
  const auto ev = eigenvalues(assemble_kernel(atoms({{-0.5, 1.0}, {-2.0, 0.3}, {-7.0, 2.0}}),
                                              PowerWeight{1.0, 0.25}, rule));
  for (double e : ev) EXPECT_GT(e, -1e-12 * ev.front());
  for (std::size_t k = 1; k < ev.size(); ++k) EXPECT_LE(ev[k], ev[k - 1]);
}

TEST(Kernel, TraceMatchesAnalytic) {
  const auto m = atoms({{-0.5, 1.0}, {-2.0, 0.3}});
  const auto w = PowerWeight::glover();
  const auto rule = default_rule();
  const auto tr = trace_oracle(m, w, rule);
  ASSERT_TRUE(tr.analytic.has_value());
  EXPECT_LT(tr.discrepancy, 1e-10);
  const auto s = singular_values(assemble_kernel(m, w, rule));
  EXPECT_NEAR(norms(s).nuclear, *tr.analytic, 1e-9 * *tr.analytic);
}

TEST(Embedding, GramEqualsKernel) {
  const auto m = atoms({{-0.4, 1.0}, {-1.3, 0.5}, {-6.0, 1.7}});
  const auto w = PowerWeight{1.0, 0.1};
  const auto rule = default_rule();
  const auto z = assemble_embedding(m, w, rule);
  const auto k = assemble_kernel(m, w, rule);
  const Eigen::MatrixXd gram = z.values.transpose() * z.values;
  EXPECT_LT((gram - k.real).cwiseAbs().maxCoeff(), 1e-12 * k.real.cwiseAbs().maxCoeff());
}

TEST(Embedding, RequiresPositiveAtoms) {
  const auto rule = build_rule(1e-2, 1e2, 4, 4);
  EXPECT_THROW(assemble_embedding(power_law(0.0), PowerWeight{}, rule), std::invalid_argument);
  EXPECT_THROW(assemble_embedding(atoms({{-1.0, -1.0}}), PowerWeight{}, rule),
               std::invalid_argument);
}

TEST(Sweep, AtomIsStable) {
  const auto g = sigma1_sweep(atoms({{-1.0, 1.0}}), PowerWeight{1.0, 0.0}, GridSpec{}, 2);
  ASSERT_EQ(g.values.size(), 3u);
  for (double v : g.values) EXPECT_NEAR(v, 0.5, 1e-10);
  EXPECT_NEAR(g.power_exponent, 0.0, 1e-10);
}

// a t_min of 1e-6 drops about 1e-6 of int e^{-2t}; widening the range recovers it
TEST(Sweep, TruncationShrinksWithRange) {
  const auto g = sigma1_sweep(atoms({{-1.0, 1.0}}), PowerWeight{1.0, 0.0},
                              GridSpec{1e-6, 1e6, 24, 16}, 2);
  EXPECT_NEAR(g.values[0], 0.5 - 1e-6, 1e-9);
  EXPECT_LT(g.values[0], g.values[1]);
  EXPECT_LT(g.values[1], g.values[2]);
}
