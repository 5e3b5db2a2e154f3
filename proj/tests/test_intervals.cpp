#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "retint/intervals.hpp"
#include "retint/rng.hpp"
#include "retint/stats.hpp"

using namespace retint;

TEST(Intervals, HandCounted) {
  const std::vector<double> nu{0, 3, 0, 0, 3, 3, 0};
  const auto iv = extract_intervals(nu, 2.0);
  EXPECT_EQ(iv.taus, (std::vector<std::int64_t>{3, 1}));
  EXPECT_DOUBLE_EQ(iv.mean_tau, 2.0);
  EXPECT_EQ(iv.first_exceedance, 1);
  EXPECT_EQ(iv.exceedances, 3u);
}

TEST(Intervals, StrictExceedance) {
  const std::vector<double> nu{2, 2, 2};
  EXPECT_TRUE(extract_intervals(nu, 2.0).insufficient());
}

TEST(Intervals, AllBelowInsufficient) {
  const std::vector<double> nu{0.1, 0.5, 1.9};
  const auto iv = extract_intervals(nu, 2.0);
  EXPECT_TRUE(iv.insufficient());
  EXPECT_EQ(iv.first_exceedance, -1);
  const std::vector<double> one{0.1, 5.0, 0.1};
  EXPECT_TRUE(extract_intervals(one, 2.0).insufficient());
}

TEST(Intervals, InvalidThreshold) {
  const std::vector<double> nu{1, 2};
  EXPECT_THROW(extract_intervals(nu, 0.0), ParameterError);
}

TEST(Intervals, GeometricLawForIidExceedances) {
  // Exceedance with probability p per step gives P(tau = k) = p (1-p)^(k-1).
  Rng rng(17);
  const double p = 0.1;
  std::vector<double> nu(400000);
  for (auto& v : nu) v = rng.uniform() < p ? 3.0 : 0.0;
  const auto iv = extract_intervals(nu, 2.0);
  EXPECT_NEAR(iv.mean_tau, 1.0 / p, 0.1);
  std::vector<double> freq(6, 0.0);
  for (auto t : iv.taus) {
    if (t <= 5) freq[static_cast<std::size_t>(t)] += 1.0;
  }
  const double n = static_cast<double>(iv.taus.size());
  for (int k = 1; k <= 5; ++k) {
    const double expect = p * std::pow(1 - p, k - 1);
    EXPECT_NEAR(freq[k] / n, expect, 0.005) << "k=" << k;
  }
}

TEST(Intervals, SingleStockScaling) {
  IntervalSeries iv;
  iv.taus = {3, 1};
  iv.mean_tau = 2.0;
  TaggedIntervals t{"A", iv};
  const auto pooled = pool_scaled(std::span<const TaggedIntervals>(&t, 1), 2.0);
  EXPECT_EQ(pooled.scaled_values(), (std::vector<double>{1.5, 0.5}));
  EXPECT_EQ(pooled.per_stock_means.at("A"), 2.0);
}

TEST(Intervals, PoolingIgnoresMemberOrder) {
  IntervalSeries a, b, none;
  a.taus = {1, 2, 3};
  a.mean_tau = 2.0;
  b.taus = {4, 4};
  b.mean_tau = 4.0;
  std::vector<TaggedIntervals> m1{{"B", b}, {"A", a}, {"C", none}};
  std::vector<TaggedIntervals> m2{{"C", none}, {"A", a}, {"B", b}};
  const auto p1 = pool_scaled(m1, 2.0), p2 = pool_scaled(m2, 2.0);
  EXPECT_EQ(p1.scaled_values(), p2.scaled_values());
  EXPECT_EQ(p1.stocks_skipped, 1u);
  EXPECT_EQ(p1.scaled_values(), (std::vector<double>{0.5, 1.0, 1.5, 1.0, 1.0}));
}

TEST(Intervals, ShufflePermutesExactly) {
  VolatilitySeries v;
  for (int i = 0; i < 1000; ++i) v.values.push_back(std::sqrt(static_cast<double>(i)));
  const auto s1 = shuffle_control(v, 5), s2 = shuffle_control(v, 5), s3 = shuffle_control(v, 6);
  EXPECT_EQ(s1.values, s2.values);
  EXPECT_NE(s1.values, s3.values);
  EXPECT_NE(s1.values, v.values);
  auto sorted = s1.values;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, v.values);
}

TEST(Intervals, ShuffleMakesPersistentIntervalsGeometric) {
  // Blocks of 50 high then 50 low values: intervals are 1 or 51 before
  // shuffling and geometric with p = 1/2 after.
  VolatilitySeries v;
  for (int b = 0; b < 400; ++b) {
    for (int i = 0; i < 50; ++i) v.values.push_back(b % 2 == 0 ? 3.0 : 0.0);
  }
  const auto raw = extract_intervals(v, 2.0);
  EXPECT_EQ(std::count(raw.taus.begin(), raw.taus.end(), 51), 199);
  const auto sh = extract_intervals(shuffle_control(v, 1), 2.0);
  EXPECT_NEAR(sh.mean_tau, 2.0, 0.05);
  const double ones = static_cast<double>(std::count(sh.taus.begin(), sh.taus.end(), 1));
  EXPECT_NEAR(ones / static_cast<double>(sh.taus.size()), 0.5, 0.02);
}
