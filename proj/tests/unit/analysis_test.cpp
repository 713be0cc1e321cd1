#include "nu/analysis.hpp"

#include <gtest/gtest.h>

#include "nu/error.hpp"
#include "nu/nu_exact.hpp"
#include "nu/nubar.hpp"
#include "oracles.hpp"

namespace nu {
namespace {

GTEST_TEST(AnalyzeTest, Ring) {
  MagnitudeMatrix m(4);
  for (int k = 0; k < 4; ++k) m.set(k, (k + 1) % 4, 1.0);
  const RobustnessReport r = analyze(m);
  EXPECT_NEAR(r.mu, 1.0, 1e-9);
  EXPECT_NEAR(r.nubar, 1.0, 1e-12);
  EXPECT_NEAR(r.nu_lower.bound, 0.25, 1e-9);
  ASSERT_TRUE(r.nu_exact.has_value());
  EXPECT_EQ(r.nu_exact->method, NuMethod::kRing);
  EXPECT_NEAR(r.nu_exact->value, 0.25, 1e-12);
  EXPECT_TRUE(r.nubar_certified);
  EXPECT_FALSE(r.diagonally_maximal);
}

GTEST_TEST(AnalyzeTest, OracleOption) {
  const MagnitudeMatrix m{{0.2, 0.7, 0.1}, {0.3, 0.1, 0.9}, {0.33, 0.4, 0}};
  EXPECT_FALSE(analyze(m).nu_exact.has_value());
  AnalysisOptions opt;
  opt.oracle = true;
  const RobustnessReport r = analyze(m, opt);
  ASSERT_TRUE(r.nu_exact.has_value());
  EXPECT_EQ(r.nu_exact->method, NuMethod::kOracle);
  EXPECT_LE(r.nu_lower.bound, r.nu_exact->value * (1 + 1e-9));
  EXPECT_LE(r.nu_exact->value, r.nubar * (1 + 1e-9));

  const auto big = testing::random_matrix(6, 3, false);
  const RobustnessReport b = analyze(big, opt);
  ASSERT_TRUE(b.nu_exact.has_value());
  EXPECT_EQ(b.nu_exact->method, NuMethod::kLowerBoundOnly);
  EXPECT_EQ(b.nu_exact->value, b.nu_lower.bound);
}

GTEST_TEST(AnalyzeTest, ClosedFormForTwoByTwo) {
  const RobustnessReport r = analyze(MagnitudeMatrix{{0.5, 1}, {1, 0.5}});
  ASSERT_TRUE(r.nu_exact.has_value());
  EXPECT_NEAR(r.nu_exact->value, 0.75, 1e-15);
  EXPECT_NEAR(r.mu, 1.5, 1e-9);
}

GTEST_TEST(AnalyzeTest, SubsetMaxDefaultsAndLimits) {
  const auto m = testing::random_matrix(14, 8, true);
  const RobustnessReport r = analyze(m);
  EXPECT_LE(r.nu_lower.indices.size(), 12u);
  AnalysisOptions opt;
  opt.subset_max = 15;
  EXPECT_THROW(analyze(m, opt), ValidationError);
}

GTEST_TEST(Grid2x2Test, Corners) {
  const auto records = grid2x2(11);
  ASSERT_EQ(records.size(), 1331u);
  const auto& ones = records.back();
  EXPECT_EQ(ones.x, 1.0);
  EXPECT_NEAR(ones.mu, 2.0, 1e-12);
  EXPECT_EQ(ones.nu, 1.0);
  EXPECT_EQ(ones.nubar, 1.0);
  // (x, w, y) = (0, 1, 0).
  const auto& swap = records[10 * 11];
  EXPECT_EQ(swap.w, 1.0);
  EXPECT_EQ(swap.x + swap.y, 0.0);
  EXPECT_NEAR(swap.mu, 1.0, 1e-12);
  EXPECT_NEAR(swap.nu, 0.5, 1e-15);
  EXPECT_EQ(swap.nubar, 1.0);
  for (const auto& rec : records) {
    if (!rec.ratio_nubar_nu) continue;
    EXPECT_GE(*rec.ratio_nubar_nu, 1.0 - 1e-6);
    EXPECT_LE(*rec.ratio_nubar_nu, 2.0 + 1e-6);
  }
  EXPECT_THROW(grid2x2(1), ValidationError);
}

}  // namespace
}  // namespace nu
