#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "retint/dfa_factors.hpp"
#include "retint/factors.hpp"
#include "retint/rng.hpp"
#include "retint/synth.hpp"

using namespace retint;

namespace {

FactorVector fv(std::string t, std::size_t life, double vol = 1.0, std::optional<double> cap = 1.0, double tv = 1.0) {
  return {std::move(t), life, cap, vol, tv};
}

}  // namespace

TEST(Factors, LifetimeSweepEdges) {
  const auto e = linear_edges(508, 5080, 10);
  ASSERT_EQ(e.size(), 11u);
  EXPECT_DOUBLE_EQ(e.front(), 508.0);
  EXPECT_DOUBLE_EQ(e.back(), 5080.0);
  for (std::size_t i = 1; i < e.size(); ++i) EXPECT_NEAR(e[i] - e[i - 1], 457.2, 1e-9);
}

TEST(Factors, LogEdges) {
  const auto e = log_edges(1.0, 1000.0, 3);
  EXPECT_NEAR(e[1], 10.0, 1e-12);
  EXPECT_NEAR(e[2], 100.0, 1e-10);
  EXPECT_THROW(log_edges(0.0, 1.0, 2), ParameterError);
}

TEST(Factors, OneStockPerBracketedBin) {
  const std::vector<FactorVector> f{fv("A", 100), fv("B", 200), fv("C", 300)};
  const auto b = bin_stocks(f, Factor::lifetime, {50, 150, 250, 350});
  for (const auto& m : b.members) EXPECT_EQ(m.size(), 1u);
  EXPECT_TRUE(b.unbinned.empty());
}

TEST(Factors, InteriorEdgeGoesUp) {
  const std::vector<FactorVector> f{fv("A", 150), fv("B", 400)};
  const auto b = bin_stocks(f, Factor::lifetime, {100, 150, 200});
  EXPECT_TRUE(b.members[0].empty());
  EXPECT_EQ(b.members[1], std::vector<std::string>{"A"});
  EXPECT_EQ(b.unbinned, std::vector<std::string>{"B"});
}

TEST(Factors, UndefinedCapitalization) {
  const std::vector<FactorVector> f{fv("A", 1, 1, std::nullopt), fv("B", 1, 1, 5.0)};
  const auto b = bin_stocks(f, Factor::capitalization, {1.0, 10.0});
  EXPECT_EQ(b.undefined, std::vector<std::string>{"A"});
  EXPECT_EQ(b.members[0], std::vector<std::string>{"B"});
}

TEST(Factors, DefaultEdgesCoverAllStocks) {
  std::vector<FactorVector> f;
  for (int i = 0; i < 50; ++i) f.push_back(fv("S" + std::to_string(i), 400 + 10 * i, std::pow(10.0, 3 + i * 0.05)));
  for (auto fac : {Factor::lifetime, Factor::volume}) {
    const auto b = bin_stocks(f, fac, default_factor_edges(f, fac));
    EXPECT_EQ(b.bins(), default_bin_count(fac));
    EXPECT_TRUE(b.unbinned.empty());
    std::size_t total = 0;
    for (const auto& m : b.members) total += m.size();
    EXPECT_EQ(total, 50u);
  }
}

TEST(Factors, SingleValueGivesOneBin) {
  const std::vector<FactorVector> f{fv("A", 500)};
  const auto e = default_factor_edges(f, Factor::lifetime);
  EXPECT_EQ(e.size(), 2u);
  EXPECT_EQ(bin_stocks(f, Factor::lifetime, e).members[0].size(), 1u);
}

TEST(Factors, EmptyBinHasNoGamma) {
  const std::vector<FactorVector> f{fv("A", 100)};
  const auto b = bin_stocks(f, Factor::lifetime, {50, 150, 250});
  const auto rows = gamma_by_bins(b, {});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].n_stocks, 0u);
  EXPECT_EQ(rows[1].n_intervals, 0u);
  EXPECT_FALSE(rows[1].fit);
}

TEST(Factors, CorrelationIdentityAndExactDependence) {
  std::vector<FactorVector> f;
  Rng r(2);
  for (int i = 0; i < 200; ++i) {
    const double vol = std::pow(10.0, r.normal(5, 1));
    f.push_back(fv("S" + std::to_string(i), 400 + i, vol, std::pow(10.0, r.normal(8, 1)), 12.5 * vol));
  }
  const auto m = factor_correlations(f);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(*m.log_space[i][i], 1.0, 1e-12);
  const auto tv = static_cast<std::size_t>(Factor::trading_value);
  const auto vo = static_cast<std::size_t>(Factor::volume);
  EXPECT_NEAR(*m.log_space[tv][vo], 1.0, 1e-12);
}

TEST(Factors, PlantedBivariateLogNormal) {
  Rng r(99);
  const double rho = 0.7;
  std::vector<FactorVector> f;
  for (int i = 0; i < 10000; ++i) {
    const double z1 = r.normal(), z2 = r.normal();
    const double a = z1, b = rho * z1 + std::sqrt(1 - rho * rho) * z2;
    f.push_back(fv("S" + std::to_string(i), 400 + i % 7, std::pow(10.0, 6 + 0.5 * a), std::pow(10.0, 8 + 0.5 * b),
                   std::pow(10.0, 7 + 0.5 * r.normal())));
  }
  const auto m = factor_correlations(f);
  const auto ca = static_cast<std::size_t>(Factor::capitalization);
  const auto vo = static_cast<std::size_t>(Factor::volume);
  EXPECT_NEAR(*m.log_space[vo][ca], rho, 0.02);
}

TEST(Factors, TooFewCompleteStocks) {
  const std::vector<FactorVector> f{fv("A", 1), fv("B", 2)};
  EXPECT_THROW(factor_correlations(f), InsufficientData);
}

TEST(Factors, ZeroVarianceFactorUndefined) {
  const std::vector<FactorVector> f{fv("A", 5, 1.0), fv("B", 5, 2.0), fv("C", 5, 3.0)};
  const auto m = factor_correlations(f);
  const auto lt = static_cast<std::size_t>(Factor::lifetime);
  const auto vo = static_cast<std::size_t>(Factor::volume);
  EXPECT_FALSE(m.raw[lt][vo]);
  EXPECT_TRUE(m.raw[vo][vo]);
}

TEST(Factors, PlantedSizesRoundTrip) {
  UniformCorpusSpec u;
  u.n_stocks = 2000;
  u.lifetime = 60;
  u.seed = 5;
  const auto sc = synth_uniform_corpus(u);
  const auto f = compute_factors(sc.corpus);
  std::vector<double> lv;
  for (const auto& x : f) lv.push_back(std::log10(x.mean_volume));
  const double d = stats::ks_one_sample(
      lv, [&](double x) { return stats::normal_cdf((x - u.log10_volume_mu) / u.log10_volume_sigma); });
  EXPECT_LT(d, 0.05);
}

TEST(Factors, HomogeneousCorpusHasEqualGammas) {
  UniformCorpusSpec u;
  u.kind = GeneratorKind::cascade;
  u.n_stocks = 200;
  u.lifetime = 4096;
  u.seed = 11;
  const auto sc = synth_uniform_corpus(u);
  const auto f = compute_factors(sc.corpus);
  // Quartiles of mean volume so every bin pools the same number of stocks.
  std::vector<double> v;
  for (const auto& x : f) v.push_back(x.mean_volume);
  std::sort(v.begin(), v.end());
  const std::vector<double> edges{v[0], v[50], v[100], v[150], std::nextafter(v[199], 1e300)};
  const auto b = bin_stocks(f, Factor::volume, edges);
  const auto rows = gamma_by_factor(sc.corpus, b, 2.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_TRUE(rows[i].fit) << i;
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      ASSERT_TRUE(rows[j].fit);
      const double se = std::hypot(rows[i].fit->std_error, rows[j].fit->std_error);
      EXPECT_LT(std::abs(rows[i].fit->gamma - rows[j].fit->gamma), 2.0 * se) << i << " vs " << j;
    }
  }
}

TEST(Factors, IidCorpusAlphaNearHalfEverywhere) {
  UniformCorpusSpec u;
  u.n_stocks = 60;
  u.lifetime = 4000;
  u.seed = 3;
  const auto sc = synth_uniform_corpus(u);
  const auto f = compute_factors(sc.corpus);
  const auto b = bin_stocks(f, Factor::volume, default_factor_edges(f, Factor::volume, 3));
  for (const auto& row : alpha_by_factor(sc.corpus, b)) {
    if (row.count < 5) continue;
    EXPECT_NEAR(*row.mean_alpha, 0.5, 0.05) << row.bin;
  }
}
