#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "retint/conditional.hpp"
#include "retint/rng.hpp"
#include "retint/synth.hpp"

using namespace retint;

namespace {

std::vector<IntervalPair> pairs_from(const std::vector<double>& nu, double q) {
  return consecutive_pairs(extract_intervals(nu, q));
}

}  // namespace

TEST(Conditional, GeometricLabels) {
  const auto part = geometric_octiles();
  EXPECT_EQ(part.label(0.3), 2);
  EXPECT_EQ(part.label(5.0), 6);
  EXPECT_EQ(part.label(0.0), 1);
  EXPECT_EQ(part.label(0.2), 2);  // lower edge belongs to the bin
  EXPECT_EQ(part.label(12.8), 8);
  EXPECT_EQ(part.label(1e9), 8);
  EXPECT_DOUBLE_EQ(part.lower(2), 0.2);
  EXPECT_DOUBLE_EQ(part.upper(6), 6.4);
}

TEST(Conditional, PairsStayWithinStock) {
  IntervalSeries a, b;
  a.taus = {1, 3};
  a.mean_tau = 2.0;
  b.taus = {5, 5, 10};
  b.mean_tau = 20.0 / 3.0;
  std::vector<TaggedIntervals> m{{"A", a}, {"B", b}};
  const auto pairs = pooled_pairs(pool_scaled(m, 2.0));
  ASSERT_EQ(pairs.size(), 3u);  // (1,3) from A; (5,5), (5,10) from B
  EXPECT_DOUBLE_EQ(pairs[0].prev, 0.5);
  EXPECT_DOUBLE_EQ(pairs[0].next, 1.5);
  EXPECT_DOUBLE_EQ(pairs[1].prev, 0.75);
  EXPECT_DOUBLE_EQ(pairs[2].next, 1.5);
}

TEST(Conditional, SinglePair) {
  const std::vector<IntervalPair> one{{0.5, 1.5}};
  const auto s = memory_summary(one, geometric_octiles());
  int populated = 0;
  for (const auto& r : s.rows) populated += r.count > 0;
  EXPECT_EQ(populated, 1);
  EXPECT_EQ(s.rows[2].count, 1u);
  EXPECT_DOUBLE_EQ(*s.rows[2].mean_scaled_tau, 1.5);
  EXPECT_FALSE(s.spearman);
}

TEST(Conditional, QuantileOctilesEqualShares) {
  Rng r(4);
  std::vector<IntervalPair> pairs(8000);
  for (auto& p : pairs) p = {r.exponential(1.0), r.exponential(1.0)};
  const auto part = quantile_octiles(pairs);
  const auto s = memory_summary(pairs, part);
  for (const auto& row : s.rows) EXPECT_NEAR(static_cast<double>(row.count), 1000.0, 1.0);
}

TEST(Conditional, QuantileOctilesTiedValuesStayIncreasing) {
  std::vector<IntervalPair> pairs(100, {1.0, 1.0});
  const auto part = quantile_octiles(pairs);
  for (std::size_t i = 1; i < part.boundaries.size(); ++i) EXPECT_GT(part.boundaries[i], part.boundaries[i - 1]);
}

TEST(Conditional, EmptyOctileReported) {
  const std::vector<IntervalPair> pairs{{0.5, 1.0}, {0.5, 2.0}};
  const auto c = conditional_pdf(pairs, geometric_octiles(), 7);
  EXPECT_EQ(c.n_pairs, 0u);
  EXPECT_TRUE(c.low_statistics);
  EXPECT_TRUE(c.pdf.empty());
}

TEST(Conditional, MixtureIdentityExact) {
  Rng r(8);
  std::vector<double> nu(200000);
  double level = 0.0;
  for (auto& v : nu) {
    level = 0.95 * level + 0.3 * r.normal();
    v = std::exp(level + 0.5 * r.normal());
  }
  const auto pairs = pairs_from(nu, 3.0);
  ASSERT_GT(pairs.size(), 1000u);
  std::vector<double> next;
  for (const auto& p : pairs) next.push_back(p.next);
  const auto all = log_bin(next, 8);
  const auto part = geometric_octiles();
  std::vector<double> mix(all.bins(), 0.0);
  for (int k = 1; k <= 8; ++k) {
    const auto c = conditional_pdf(pairs, part, k, all.edges);
    const double w = static_cast<double>(c.n_pairs) / static_cast<double>(pairs.size());
    for (std::size_t i = 0; i < all.bins(); ++i) mix[i] += w * c.pdf.densities[i];
  }
  for (std::size_t i = 0; i < all.bins(); ++i) EXPECT_NEAR(mix[i], all.densities[i], 1e-12 * (1 + all.densities[i]));
}

TEST(Conditional, IidHasNoMemory) {
  Rng r(12);
  std::vector<double> nu(400000);
  for (auto& v : nu) v = r.exponential(1.0);
  const auto pairs = pairs_from(nu, 2.0);
  const auto s = memory_summary(pairs, geometric_octiles());
  // Octiles with enough pairs agree on the mean within 4 standard errors
  // (scaled geometric: sd of tau/<tau> is about 1).
  for (const auto& row : s.rows) {
    if (row.count < 200) continue;
    EXPECT_NEAR(*row.mean_scaled_tau, 1.0, 4.0 / std::sqrt(static_cast<double>(row.count))) << row.octile;
  }
  ASSERT_TRUE(s.spearman);
  EXPECT_LT(std::abs(*s.spearman), 0.8);
}

TEST(Conditional, PersistentSeriesHasMemory) {
  std::vector<IntervalPair> pairs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const auto x = generate_fgn(1 << 15, 0.8, rng);
    std::vector<double> nu(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) nu[i] = std::exp(x[i]);
    const auto p = pairs_from(nu, 4.0);
    pairs.insert(pairs.end(), p.begin(), p.end());
  }
  const auto s = memory_summary(pairs, geometric_octiles());
  ASSERT_TRUE(s.spearman);
  EXPECT_GT(*s.spearman, 0.8);
  EXPECT_GT(*s.rows[5].mean_scaled_tau, *s.rows[1].mean_scaled_tau);
}

TEST(Conditional, ShuffledOctilesCollapse) {
  std::vector<IntervalPair> pairs;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    const auto x = generate_fgn(1 << 15, 0.8, rng);
    VolatilitySeries v;
    for (double xi : x) v.values.push_back(std::exp(xi));
    const auto p = consecutive_pairs(extract_intervals(shuffle_control(v, seed + 100), 2.0));
    pairs.insert(pairs.end(), p.begin(), p.end());
  }
  const auto part = geometric_octiles();
  const auto q2 = octile_members(pairs, part, 2);
  const auto q6 = octile_members(pairs, part, 6);
  ASSERT_GT(q2.size(), 10000u);
  ASSERT_GT(q6.size(), 1000u);
  EXPECT_LT(stats::ks_two_sample(q2, q6), 0.05);
}
