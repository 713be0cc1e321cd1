#include "nu/nubar.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "nu/error.hpp"
#include "nu/spectral.hpp"
#include "oracles.hpp"

namespace nu {
namespace {

MagnitudeMatrix ring(int n) {
  MagnitudeMatrix m(n);
  for (int k = 0; k < n; ++k) m.set(k, (k + 1) % n, 1.0);
  return m;
}

std::vector<int> zero_based(const std::vector<int>& cycle) {
  std::vector<int> out;
  for (int v : cycle) out.push_back(v - 1);
  return out;
}

GTEST_TEST(PhiTest, Conventions) {
  const MagnitudeMatrix m{{2, 1}, {0, 0}};
  EXPECT_EQ(phi(m, ScalingVector({1, 0.5}), 0, 1), 2.0);
  EXPECT_EQ(phi(m, ScalingVector({0, 0.5}), 0, 0), 2.0);
  EXPECT_EQ(phi(m, ScalingVector({0, 0}), 0, 1), 0.0);
  EXPECT_EQ(phi(m, ScalingVector({1, 0}), 0, 1), std::numeric_limits<double>::infinity());
  EXPECT_EQ(phi(m, ScalingVector({1, 0}), 1, 0), 0.0);
  EXPECT_FALSE(relaxed_feasible(m, ScalingVector({1, 0})));
  EXPECT_TRUE(relaxed_feasible(m, ScalingVector({0, 1})));
  // Zero weights on a cycle would hide its product.
  EXPECT_FALSE(relaxed_feasible(ring(3), ScalingVector({0, 0, 0})));
  EXPECT_THROW(ScalingVector({1, -1}), ValidationError);
}

GTEST_TEST(NubarExactTest, Examples) {
  for (int n = 2; n <= 6; ++n) {
    const NubarResult r = nubar_exact(ring(n));
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_EQ(static_cast<int>(r.witness_cycle.size()), n);
    EXPECT_TRUE(r.certified);
  }
  const double x = 0.3;
  const NubarResult two = nubar_exact(MagnitudeMatrix{{0, 1}, {x * x, 0}});
  EXPECT_NEAR(two.value, x, 1e-12);
  EXPECT_EQ(two.witness_cycle, (std::vector<int>{1, 2}));

  const NubarResult upper = nubar_exact(MagnitudeMatrix{{0, 1, 2}, {0, 0, 3}, {0, 0, 0}});
  EXPECT_EQ(upper.value, 0.0);
  EXPECT_TRUE(upper.witness_cycle.empty());
  EXPECT_TRUE(upper.certified);
  EXPECT_FALSE(upper.scaling.strictly_positive());
  EXPECT_EQ(scaled_max(MagnitudeMatrix{{0, 1, 2}, {0, 0, 3}, {0, 0, 0}}, upper.scaling), 0.0);

  const NubarResult diag = nubar_exact(MagnitudeMatrix{{0.2, 0, 0}, {0, 0.9, 0}, {0, 0, 0.4}});
  EXPECT_EQ(diag.value, 0.9);
  EXPECT_EQ(diag.witness_cycle, std::vector<int>{2});
}

GTEST_TEST(NubarExactTest, ScalingAttainsValue) {
  for (const auto& m : testing::random_corpus(100, 6, 41)) {
    const NubarResult r = nubar_exact(m);
    EXPECT_NEAR(scaled_max(m, r.scaling), r.value, 1e-12 * std::max(r.value, 1.0));
    if (r.value > 0.0) {
      EXPECT_NEAR(cycle_geometric_mean(m, r.witness_cycle), r.value, 1e-9 * r.value);
    }
  }
}

GTEST_TEST(NubarExactTest, MatchesCycleEnumeration) {
  for (const auto& m : testing::random_corpus(200, 6, 51)) {
    const testing::CycleMax oracle = testing::brute_force_cycle_max(m);
    const NubarResult r = nubar_exact(m);
    EXPECT_NEAR(r.value, oracle.value, 1e-10 * oracle.value);
    if (r.value > 0.0) {
      bool found = false;
      for (const auto& c : oracle.argmax) found = found || c == zero_based(r.witness_cycle);
      EXPECT_TRUE(found);
    }
  }
}

GTEST_TEST(NubarLpTest, Examples) {
  EXPECT_NEAR(nubar_lp(MagnitudeMatrix::identity(3)).value, 1.0, 1e-12);
  EXPECT_NEAR(nubar_lp(MagnitudeMatrix{{0, 1}, {0.09, 0}}).value, 0.3, 1e-9);
  EXPECT_EQ(nubar_lp(MagnitudeMatrix{{0, 1}, {0, 0}}).value, 0.0);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  MagnitudeMatrix m(5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) m.set(i, j, u(gen));
  }
  EXPECT_NEAR(nubar_lp(m).value, nubar_exact(m).value, 1e-7 * nubar_exact(m).value);
}

GTEST_TEST(NubarLpTest, AgreesWithExact) {
  for (const auto& m : testing::random_corpus(100, 6, 61)) {
    const double exact = nubar_exact(m).value;
    const NubarResult lp = nubar_lp(m);
    EXPECT_NEAR(lp.value, exact, 1e-7 * exact);
    if (lp.value > 0.0) {
      EXPECT_NEAR(cycle_geometric_mean(m, lp.witness_cycle), exact, 1e-7 * exact);
    }
  }
}

GTEST_TEST(NubarExactTest, SimilarityAndHomogeneity) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.05, 20.0);
  for (const auto& m : testing::random_corpus(100, 7, 71)) {
    const NubarResult r = nubar_exact(m);
    std::vector<double> d(m.n());
    for (double& v : d) v = u(gen);
    const double a = u(gen);
    EXPECT_NEAR(nubar_exact(testing::similarity(m, d)).value, r.value, 1e-9 * r.value);
    EXPECT_NEAR(nubar_exact(m.scaled(a)).value, a * r.value, 1e-12 * a * r.value);
  }
}

GTEST_TEST(NubarExactTest, SandwichWithMu) {
  for (const auto& m : testing::random_corpus(100, 7, 81)) {
    const double nubar = nubar_exact(m).value;
    const double lower = nu_lower_bound(m, m.n()).bound;
    const double rho = mu(m);
    EXPECT_LE(lower, nubar * (1 + 1e-9));
    EXPECT_LE(nubar, rho * (1 + 1e-9));
  }
}

GTEST_TEST(CertifyOptimalityTest, Examples) {
  EXPECT_TRUE(certify_optimality(ring(4), ScalingVector::ones(4)));
  EXPECT_FALSE(certify_optimality(MagnitudeMatrix{{0, 1}, {0.09, 0}}, ScalingVector::ones(2)));
  EXPECT_TRUE(certify_optimality(MagnitudeMatrix{{0.5, 0}, {0, 0.2}}, ScalingVector({3, 0.1})));
}

GTEST_TEST(BalancedSolutionTest, Examples) {
  const MagnitudeMatrix two{{0, 1}, {0.09, 0}};
  const NubarResult r = balanced_solution(two);
  EXPECT_NEAR(r.value, 0.3, 1e-12);
  EXPECT_NEAR(r.scaling[0] / r.scaling[1], 0.3, 1e-12);
  EXPECT_TRUE(r.balanced);
  EXPECT_NEAR(phi(two, r.scaling, 0, 1), 0.3, 1e-12);
  EXPECT_NEAR(phi(two, r.scaling, 1, 0), 0.3, 1e-12);

  const NubarResult rr = balanced_solution(ring(5));
  EXPECT_TRUE(rr.balanced);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(rr.scaling[i], 1.0, 1e-12);

  const NubarResult dr = balanced_solution(MagnitudeMatrix{{0.5, 0}, {0, 0.2}});
  EXPECT_TRUE(dr.balanced);
  EXPECT_EQ(dr.scaling.values(), (std::vector<double>{1, 1}));
  EXPECT_EQ(dr.value, 0.5);
}

GTEST_TEST(BalancedSolutionTest, RandomCorpus) {
  for (const auto& m : testing::random_corpus(200, 6, 91)) {
    const NubarResult exact = nubar_exact(m);
    const NubarResult r = balanced_solution(m);
    EXPECT_EQ(r.value, exact.value);
    EXPECT_NEAR(scaled_max(m, r.scaling), r.value, 1e-12 * std::max(r.value, 1.0));
    EXPECT_LE(balance_residual(m, r.scaling), 1e-8);
    EXPECT_TRUE(r.balanced);
    if (r.value > 0.0) EXPECT_TRUE(certify_optimality(m, r.scaling));
  }
}

// A sink fed by a cycle: exact balance is impossible at the sink, the
// returned scaling pushes the feeding arc far below the objective.
GTEST_TEST(BalancedSolutionTest, SinkBelowCycle) {
  const MagnitudeMatrix m{{0, 1, 0}, {1, 0, 1}, {0, 0, 0}};
  const NubarResult r = balanced_solution(m);
  EXPECT_EQ(r.value, 1.0);
  EXPECT_TRUE(r.certified);
  EXPECT_LE(balance_residual(m, r.scaling), 1e-9);
  EXPECT_GT(balance_residual(m, r.scaling), 0.0);
}

}  // namespace
}  // namespace nu
