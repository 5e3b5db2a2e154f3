#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "retint/volatility.hpp"

using namespace retint;

TEST(Volatility, LogReturnsIdentities) {
  const double e = std::numbers::e;
  auto r = log_returns(std::vector<double>{1.0, e, e});
  ASSERT_EQ(r.values.size(), 2u);
  EXPECT_NEAR(r.values[0], 1.0, 1e-15);
  EXPECT_EQ(r.values[1], 0.0);
  r = log_returns(std::vector<double>{2, 2, 2, 2});
  EXPECT_EQ(r.values, (std::vector<double>{0, 0, 0}));
}

TEST(Volatility, ZeroDropsBothAdjacentSteps) {
  auto r = log_returns(std::vector<double>{1, 0, 1});
  EXPECT_TRUE(r.values.empty());
  EXPECT_EQ(r.dropped, 2u);
  r = log_returns(std::vector<double>{1, 2, 0, 4, 8});
  EXPECT_EQ(r.dropped, 2u);
  ASSERT_EQ(r.values.size(), 2u);
  EXPECT_NEAR(r.values[0], std::log(2.0), 1e-15);
  EXPECT_NEAR(r.values[1], std::log(2.0), 1e-15);
}

TEST(Volatility, TooShort) {
  EXPECT_THROW(log_returns(std::vector<double>{1.0}), DegenerateInput);
}

TEST(Volatility, NormalizeHandValue) {
  ReturnSeries r;
  r.values = {0.0, -2.0};
  const auto v = normalize_volatility(r);
  EXPECT_DOUBLE_EQ(v.norm_std, 1.0);
  EXPECT_EQ(v.values, (std::vector<double>{0.0, 2.0}));
}

TEST(Volatility, SampleConvention) {
  ReturnSeries r;
  r.values = {0.0, 2.0};
  const auto v = normalize_volatility(r, MomentConvention::sample);
  EXPECT_NEAR(v.norm_std, std::sqrt(2.0), 1e-15);
}

TEST(Volatility, ConstantMagnitudeIsDegenerate) {
  ReturnSeries r;
  r.values = {0.3, -0.3, 0.3, 0.3};
  EXPECT_THROW(normalize_volatility(r), DegenerateSeries);
}

TEST(Volatility, ScaleInvariant) {
  ReturnSeries a, b;
  a.values = {0.1, -0.5, 0.2, 0.05, -0.9, 0.33};
  for (double v : a.values) b.values.push_back(7.0 * v);
  const auto va = normalize_volatility(a), vb = normalize_volatility(b);
  for (std::size_t i = 0; i < va.values.size(); ++i) EXPECT_NEAR(va.values[i], vb.values[i], 1e-13);
}

TEST(Volatility, NormalizedHasUnitSpread) {
  ReturnSeries r;
  for (int i = 0; i < 100; ++i) r.values.push_back(std::sin(i * 0.7) * (1 + i % 5));
  const auto v = normalize_volatility(r);
  double m = 0, m2 = 0;
  for (double x : v.values) {
    m += x;
    m2 += x * x;
  }
  m /= 100;
  m2 /= 100;
  EXPECT_NEAR(m2 - m * m, 1.0, 1e-12);
}

TEST(Volatility, StockColumnsAndFlags) {
  using namespace std::chrono;
  DailySeries s{"T", {}};
  const double vols[] = {100, 200, 100, 400, 400};
  for (int i = 0; i < 5; ++i) {
    s.records.push_back({year{2000} / 1 / (i + 3), static_cast<std::int64_t>(vols[i]), 10.0, std::nullopt});
  }
  const auto v = compute_stock_volatility(s, SeriesKind::volume);
  ASSERT_TRUE(v.nu);
  EXPECT_EQ(v.nu->values.size(), 4u);
  // Constant price: every |R| is zero.
  const auto p = compute_stock_volatility(s, SeriesKind::price);
  EXPECT_TRUE(p.degenerate);
  EXPECT_FALSE(p.nu);
}
