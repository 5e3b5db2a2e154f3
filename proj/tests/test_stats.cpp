#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "retint/rng.hpp"
#include "retint/stats.hpp"

namespace st = retint::stats;

TEST(Stats, MeanVariancePopulation) {
  const std::vector<double> x{0.0, 2.0};
  EXPECT_DOUBLE_EQ(st::mean(x), 1.0);
  EXPECT_DOUBLE_EQ(st::variance(x), 1.0);
  EXPECT_DOUBLE_EQ(st::stddev(x), 1.0);
}

TEST(Stats, PearsonExactLinear) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{3, 5, 7, 9, 11};
  const std::vector<double> z{5, 4, 3, 2, 1};
  EXPECT_NEAR(*st::pearson(x, y), 1.0, 1e-14);
  EXPECT_NEAR(*st::pearson(x, z), -1.0, 1e-14);
}

TEST(Stats, PearsonZeroVarianceUndefined) {
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> c{4, 4, 4};
  EXPECT_FALSE(st::pearson(x, c).has_value());
}

TEST(Stats, PearsonHandValue) {
  // x = (1,2,3), y = (1,3,2): cov = 0.5 * 2/3 ... r = 0.5.
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> y{1, 3, 2};
  EXPECT_NEAR(*st::pearson(x, y), 0.5, 1e-14);
}

TEST(Stats, RanksAverageTies) {
  const std::vector<double> x{10, 20, 20, 5};
  const auto r = st::ranks(x);
  EXPECT_EQ(r, (std::vector<double>{2.0, 3.5, 3.5, 1.0}));
}

TEST(Stats, SpearmanMonotone) {
  const std::vector<double> x{1, 2, 3, 4, 5, 6};
  const std::vector<double> y{1, 8, 27, 64, 125, 216};
  EXPECT_NEAR(*st::spearman(x, y), 1.0, 1e-14);
}

TEST(Stats, FitLineExact) {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, 3, 5, 7};
  const auto f = st::fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_stderr, 0.0, 1e-12);
}

TEST(Stats, FitLineStderrMatchesFormula) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> y{0.1, 0.9, 2.2, 2.8, 4.1};
  const auto f = st::fit_line(x, y);
  // Independent evaluation of the textbook formulas.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < 5; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double b = (5 * sxy - sx * sy) / (5 * sxx - sx * sx);
  const double a = (sy - b * sx) / 5;
  double sse = 0;
  for (int i = 0; i < 5; ++i) sse += std::pow(y[i] - a - b * x[i], 2);
  const double se = std::sqrt(sse / 3 / (sxx - sx * sx / 5));
  EXPECT_NEAR(f.slope, b, 1e-12);
  EXPECT_NEAR(f.intercept, a, 1e-12);
  EXPECT_NEAR(f.slope_stderr, se, 1e-12);
}

TEST(Stats, FitLineDegenerate) {
  const std::vector<double> x{1, 1, 1};
  const std::vector<double> y{1, 2, 3};
  EXPECT_THROW(st::fit_line(x, y), retint::DegenerateInput);
  EXPECT_THROW(st::fit_line(std::vector<double>{1}, std::vector<double>{1}), retint::InsufficientData);
}

TEST(Stats, KsIdenticalIsZero) {
  const std::vector<double> a{1, 2, 2, 3, 5};
  EXPECT_EQ(st::ks_two_sample(a, a), 0.0);
}

TEST(Stats, KsDisjointIsOne) {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, 5};
  EXPECT_EQ(st::ks_two_sample(a, b), 1.0);
}

TEST(Stats, KsHandValue) {
  // F_a jumps at 1,2,3,4; F_b at 2.5,3.5. Largest gap at x in [2, 2.5): 0.5.
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{2.5, 3.5};
  EXPECT_DOUBLE_EQ(st::ks_two_sample(a, b), 0.5);
}

TEST(Stats, KsSameLawSmall) {
  retint::Rng r(5);
  std::vector<double> a(20000), b(20000);
  for (auto& v : a) v = r.normal();
  for (auto& v : b) v = r.normal();
  // 99.9% critical value 1.95 * sqrt(2/n).
  EXPECT_LT(st::ks_two_sample(a, b), 1.95 * std::sqrt(2.0 / 20000));
}

TEST(Stats, KsOneSampleUniform) {
  const std::vector<double> x{0.1, 0.4, 0.7};
  // Steps 1/3, 2/3, 1 against F(x) = x: max(1/3-0.1, 0.4-1/3, 2/3-0.4, 0.7-2/3, 1-0.7) = 0.3.
  EXPECT_NEAR(st::ks_one_sample(x, [](double v) { return v; }), 0.3, 1e-14);
}

TEST(Stats, NormalCdf) {
  EXPECT_DOUBLE_EQ(st::normal_cdf(0.0), 0.5);
  EXPECT_NEAR(st::normal_cdf(1.959963984540054), 0.975, 1e-12);
}
