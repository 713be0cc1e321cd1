#include "nu/nu_exact.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "nu/error.hpp"
#include "nu/nubar.hpp"
#include "nu/spectral.hpp"
#include "oracles.hpp"

namespace nu {
namespace {

MagnitudeMatrix ring(int n) {
  MagnitudeMatrix m(n);
  for (int k = 0; k < n; ++k) m.set(k, (k + 1) % n, 1.0);
  return m;
}

// rho(diag(delta) M).
double witness_rho(const MagnitudeMatrix& m, const std::vector<double>& delta) {
  MagnitudeMatrix dm(m.n());
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) dm.set(i, j, delta[i] * m(i, j));
  }
  return testing::charpoly_spectral_radius(dm);
}

void expect_witness(const MagnitudeMatrix& m, const NuResult& r) {
  ASSERT_EQ(static_cast<int>(r.witness_delta.size()), m.n());
  EXPECT_NEAR(witness_rho(m, r.witness_delta), 1.0, 1e-6);
  const double sum = std::accumulate(r.witness_delta.begin(), r.witness_delta.end(), 0.0);
  EXPECT_NEAR(sum, 1.0 / r.value, 1e-6 / r.value);
}

GTEST_TEST(Nu2x2Test, Examples) {
  const NuResult swap = nu_2x2(MagnitudeMatrix{{0, 1}, {1, 0}});
  EXPECT_NEAR(swap.value, 0.5, 1e-15);
  EXPECT_NEAR(swap.witness_delta[0], 1.0, 1e-15);
  EXPECT_NEAR(swap.witness_delta[1], 1.0, 1e-15);
  EXPECT_EQ(swap.method, NuMethod::kClosedForm2x2);

  const NuResult loop = nu_2x2(MagnitudeMatrix{{1.2, 1}, {1, 0.3}});
  EXPECT_NEAR(loop.value, 1.2, 1e-15);
  expect_witness(MagnitudeMatrix{{1.2, 1}, {1, 0.3}}, loop);

  const MagnitudeMatrix half{{0.5, 1}, {1, 0.5}};
  EXPECT_NEAR(nu_2x2(half).value, 0.75, 1e-15);
  expect_witness(half, nu_2x2(half));
  EXPECT_THROW(nu_2x2(ring(3)), ValidationError);
}

GTEST_TEST(Nu2x2Test, DegenerateCases) {
  const NuResult tri = nu_2x2(MagnitudeMatrix{{0.2, 5}, {0, 0.6}});
  EXPECT_EQ(tri.value, 0.6);
  EXPECT_EQ(tri.witness_delta, (std::vector<double>{0, 1 / 0.6}));
  const NuResult nil = nu_2x2(MagnitudeMatrix{{0, 5}, {0, 0}});
  EXPECT_EQ(nil.value, 0.0);
  EXPECT_FALSE(nil.attained);
  EXPECT_TRUE(nil.witness_delta.empty());
  // x = 1 exactly: the boundary and stationary formulas meet.
  EXPECT_NEAR(nu_2x2(MagnitudeMatrix{{2, 4}, {1, 0.5}}).value, 2.0, 1e-15);
}

GTEST_TEST(Nu2x2Test, UnnormalizedMatchesSimilarityNormalForm) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int k = 0; k < 200; ++k) {
    const MagnitudeMatrix m{{u(gen), u(gen)}, {u(gen), u(gen)}};
    const NuResult r = nu_2x2(m);
    expect_witness(m, r);
    const double d[] = {u(gen), u(gen)};
    const double a = u(gen);
    const MagnitudeMatrix t = testing::similarity(m, {d[0], d[1]}).scaled(a);
    EXPECT_NEAR(nu_2x2(t).value, a * r.value, 1e-12 * a * r.value);
  }
}

GTEST_TEST(NuRingTest, Examples) {
  const std::vector<double> unit4(4, 1.0);
  const NuResult r4 = nu_ring(unit4);
  EXPECT_NEAR(r4.value, 0.25, 1e-15);
  EXPECT_EQ(r4.witness_delta, unit4);
  EXPECT_EQ(r4.method, NuMethod::kRing);
  EXPECT_NEAR(nu_ring(std::vector<double>{1, 1}).value, nu_2x2(ring(2)).value, 1e-15);
  EXPECT_NEAR(nu_ring(std::vector<double>{2, 0.5}).value, 0.5, 1e-15);
  EXPECT_THROW(nu_ring(std::vector<double>{1, 0}), ValidationError);
  EXPECT_THROW(nu_ring(std::vector<double>{}), ValidationError);
}

GTEST_TEST(NuRingTest, MatrixForm) {
  // Ring 1 -> 3 -> 2 -> 1 with gains 2, 3, 4.
  const MagnitudeMatrix m{{0, 0, 2}, {4, 0, 0}, {0, 3, 0}};
  const NuResult r = nu_ring(m);
  EXPECT_NEAR(r.value, std::cbrt(24.0) / 3.0, 1e-14);
  expect_witness(m, r);
  EXPECT_NEAR(r.value, nu_oracle(m).value, 1e-5 * r.value);
  EXPECT_THROW(nu_ring(MagnitudeMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}), ValidationError);
  EXPECT_THROW(nu_ring(MagnitudeMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}), ValidationError);
  EXPECT_THROW(nu_ring(MagnitudeMatrix{{0, 1, 1}, {0, 0, 1}, {1, 0, 0}}), ValidationError);
  EXPECT_THROW(nu_ring(MagnitudeMatrix::identity(2)), ValidationError);
  EXPECT_NEAR(nu_ring(MagnitudeMatrix{{0.7}}).value, 0.7, 1e-15);
}

GTEST_TEST(NuOracleTest, Examples) {
  const NuResult swap = nu_oracle(MagnitudeMatrix{{0, 1}, {1, 0}});
  EXPECT_NEAR(swap.value, 0.5, 1e-5);
  EXPECT_EQ(swap.method, NuMethod::kOracle);
  const MagnitudeMatrix diag{{0.3, 0, 0}, {0, 0.8, 0}, {0, 0, 0.5}};
  EXPECT_NEAR(nu_oracle(diag).value, 0.8, 1e-12);
  EXPECT_THROW(nu_oracle(ring(5)), ValidationError);
  EXPECT_FALSE(nu_oracle(MagnitudeMatrix{{0, 1}, {0, 0}}).attained);
}

GTEST_TEST(NuOracleTest, SandwichAndWitness) {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& m : testing::random_corpus(40, 4, 111)) {
    const NuResult r = nu_oracle(m);
    if (r.value == 0.0) continue;
    expect_witness(m, r);
    const double rho = testing::charpoly_spectral_radius(m);
    EXPECT_LE(nu_lower_bound(m, m.n()).bound, r.value * (1 + 1e-9));
    EXPECT_LE(r.value, nubar_exact(m).value * (1 + 1e-9));
    EXPECT_LE(rho / m.n(), r.value * (1 + 1e-9));
    EXPECT_LE(r.value, rho * (1 + 1e-9));
  }
}

GTEST_TEST(NuOracleTest, InvarianceToResolution) {
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (const auto& m : testing::random_corpus(20, 3, 121)) {
    const double v = nu_oracle(m).value;
    std::vector<double> d(m.n());
    for (double& x : d) x = u(gen);
    const double a = u(gen);
    EXPECT_NEAR(nu_oracle(testing::similarity(m, d)).value, v, 1e-5 * v + 1e-300);
    EXPECT_NEAR(nu_oracle(m.scaled(a)).value, a * v, 1e-5 * a * v + 1e-300);
  }
}

GTEST_TEST(NuOracleTest, MatchesClosedForm) {
  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double e = 1.0 - u(gen);
    const MagnitudeMatrix m{{1.0 - u(gen), 1.0 - u(gen)}, {1.0 - u(gen), e}};
    const double closed = nu_2x2(m).value;
    EXPECT_NEAR(nu_oracle(m).value, closed, 1e-4 * closed);
  }
}

}  // namespace
}  // namespace nu
