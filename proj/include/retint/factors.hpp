#pragma once

// Financial factors (lifetime, capitalization, mean volume, mean trading
// value), stock binning by factor, tail exponent per bin and cross-factor
// correlations.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "retint/error.hpp"
#include "retint/fitting.hpp"
#include "retint/ingest.hpp"
#include "retint/intervals.hpp"
#include "retint/stats.hpp"
#include "retint/volatility.hpp"

namespace retint {

enum class Factor { lifetime, capitalization, volume, trading_value };

inline constexpr std::array<Factor, 4> kAllFactors{Factor::lifetime, Factor::capitalization, Factor::volume,
                                                   Factor::trading_value};

inline std::string_view to_string(Factor f) {
  switch (f) {
    case Factor::lifetime: return "lifetime";
    case Factor::capitalization: return "capitalization";
    case Factor::volume: return "volume";
    case Factor::trading_value: return "trading_value";
  }
  return "?";
}

inline std::optional<Factor> parse_factor(std::string_view s) {
  for (auto f : kAllFactors) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

/// Bin counts used when none are given: 10 lifetime, 8 capitalization,
/// 11 volume and 9 trading-value subsets.
inline std::size_t default_bin_count(Factor f) {
  switch (f) {
    case Factor::lifetime: return 10;
    case Factor::capitalization: return 8;
    case Factor::volume: return 11;
    case Factor::trading_value: return 9;
  }
  return 10;
}

struct FactorVector {
  std::string ticker;
  std::size_t lifetime = 0;
  std::optional<double> mean_capitalization;
  double mean_volume = 0.0;
  double mean_trading_value = 0.0;

  std::optional<double> value(Factor f) const {
    switch (f) {
      case Factor::lifetime: return static_cast<double>(lifetime);
      case Factor::capitalization: return mean_capitalization;
      case Factor::volume: return mean_volume;
      case Factor::trading_value: return mean_trading_value;
    }
    return std::nullopt;
  }
};

inline std::vector<FactorVector> compute_factors(const Corpus& corpus) {
  std::vector<FactorVector> out;
  out.reserve(corpus.stocks.size());
  for (const auto& s : corpus.stocks) {
    const auto st = series_stats(s);
    out.push_back({s.ticker, st.lifetime, st.mean_capitalization, st.mean_volume, st.mean_trading_value});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Binning

struct FactorBinning {
  Factor factor = Factor::lifetime;
  std::vector<double> edges;
  std::vector<std::vector<std::string>> members;  // one list per bin [e_i, e_{i+1})
  std::vector<std::string> unbinned;              // value outside all edges
  std::vector<std::string> undefined;             // factor absent (no shares outstanding)

  std::size_t bins() const { return members.size(); }
};

inline std::vector<double> linear_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw ParameterError("linear edges need bins >= 1 and hi > lo");
  std::vector<double> e(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  e.back() = hi;
  return e;
}

inline std::vector<double> log_edges(double lo, double hi, std::size_t bins) {
  if (bins == 0 || !(lo > 0.0) || !(hi > lo)) throw ParameterError("log edges need bins >= 1 and 0 < lo < hi");
  std::vector<double> e(bins + 1);
  const double r = std::log(hi / lo);
  for (std::size_t i = 0; i <= bins; ++i) {
    e[i] = lo * std::exp(r * static_cast<double>(i) / static_cast<double>(bins));
  }
  e.front() = lo;
  e.back() = hi;
  return e;
}

/// Default edges over the observed range: linear for lifetime, geometric for
/// the size factors. The top edge is nudged up so the largest stock is binned.
inline std::vector<double> default_factor_edges(std::span<const FactorVector> factors, Factor f,
                                                std::optional<std::size_t> bins = std::nullopt) {
  std::size_t n = bins.value_or(default_bin_count(f));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& fv : factors) {
    if (auto v = fv.value(f)) {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  }
  if (!(hi >= lo)) throw InsufficientData(std::string("no stock defines factor ") + std::string(to_string(f)));
  if (hi == lo) {
    // Every stock shares one value: a single bin holds them all.
    n = 1;
    hi = lo + std::max(1.0, std::abs(lo) * 1e-9);
  }
  hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
  return f == Factor::lifetime ? linear_edges(lo, hi, n) : log_edges(lo, hi, n);
}

/// Half-open bins [e_i, e_{i+1}); a value on an interior edge goes up.
inline FactorBinning bin_stocks(std::span<const FactorVector> factors, Factor f, std::vector<double> edges) {
  if (edges.size() < 2) throw ParameterError("need at least two edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ParameterError("factor edges must be strictly increasing");
  }
  FactorBinning b;
  b.factor = f;
  b.edges = std::move(edges);
  b.members.resize(b.edges.size() - 1);
  for (const auto& fv : factors) {
    const auto v = fv.value(f);
    if (!v) {
      b.undefined.push_back(fv.ticker);
      continue;
    }
    if (*v < b.edges.front() || *v >= b.edges.back()) {
      b.unbinned.push_back(fv.ticker);
      continue;
    }
    const auto it = std::upper_bound(b.edges.begin(), b.edges.end(), *v);
    b.members[static_cast<std::size_t>(it - b.edges.begin()) - 1].push_back(fv.ticker);
  }
  return b;
}

// ---------------------------------------------------------------------------
// Tail exponent per bin

struct GammaRow {
  std::size_t bin = 0;
  double lo = 0.0, hi = 0.0;
  std::size_t n_stocks = 0;          // members of the bin
  std::size_t n_pooled_stocks = 0;   // members with at least one interval
  std::size_t n_intervals = 0;
  std::optional<TailFit> fit;        // empty when the fit preconditions fail
};

/// Pools the scaled intervals of each bin's members, log-bins them and fits
/// the power-law tail. `intervals` maps ticker to its interval series.
inline std::vector<GammaRow> gamma_by_bins(const FactorBinning& binning,
                                           const std::map<std::string, IntervalSeries>& intervals,
                                           const FitOptions& fit = {},
                                           int bins_per_decade = kDefaultBinsPerDecade) {
  std::vector<GammaRow> rows;
  for (std::size_t b = 0; b < binning.bins(); ++b) {
    GammaRow row;
    row.bin = b;
    row.lo = binning.edges[b];
    row.hi = binning.edges[b + 1];
    row.n_stocks = binning.members[b].size();
    std::vector<double> pooled;
    for (const auto& t : binning.members[b]) {
      auto it = intervals.find(t);
      if (it == intervals.end() || it->second.insufficient()) continue;
      ++row.n_pooled_stocks;
      const auto s = scaled_taus(it->second);
      pooled.insert(pooled.end(), s.begin(), s.end());
    }
    row.n_intervals = pooled.size();
    if (!pooled.empty()) {
      try {
        row.fit = fit_power_tail(log_bin(pooled, bins_per_decade), fit);
      } catch (const InsufficientData&) {
      }
    }
    rows.push_back(row);
  }
  return rows;
}

/// Intervals at threshold q of every stock's volatility series.
inline std::map<std::string, IntervalSeries> corpus_intervals(std::span<const StockVolatility> vols, double q) {
  std::map<std::string, IntervalSeries> out;
  for (const auto& v : vols) {
    if (v.nu) out.emplace(v.ticker, extract_intervals(*v.nu, q));
  }
  return out;
}

inline std::vector<GammaRow> gamma_by_factor(const Corpus& corpus, const FactorBinning& binning, double q,
                                             SeriesKind kind = SeriesKind::volume, const FitOptions& fit = {}) {
  if (!(q > 0.0)) throw ParameterError("threshold q must be positive");
  const auto vols = corpus_volatility(corpus, kind);
  return gamma_by_bins(binning, corpus_intervals(vols, q), fit);
}

// ---------------------------------------------------------------------------
// Correlations

struct CorrelationMatrix {
  static constexpr std::size_t kN = 4;
  std::array<Factor, kN> factors = kAllFactors;
  /// Size factors log10-transformed, lifetime as is.
  std::array<std::array<std::optional<double>, kN>, kN> log_space{};
  std::array<std::array<std::optional<double>, kN>, kN> raw{};
  std::size_t n_stocks = 0;
};

inline bool is_size_factor(Factor f) { return f != Factor::lifetime; }

/// Pairwise Pearson coefficients over stocks with every factor defined. A
/// zero-variance factor leaves its entries empty.
inline CorrelationMatrix factor_correlations(std::span<const FactorVector> factors) {
  std::vector<const FactorVector*> complete;
  for (const auto& f : factors) {
    if (f.mean_capitalization && *f.mean_capitalization > 0.0 && f.mean_volume > 0.0 && f.mean_trading_value > 0.0) {
      complete.push_back(&f);
    }
  }
  if (complete.size() < 3) throw InsufficientData("correlations need at least 3 stocks with all factors defined");

  CorrelationMatrix m;
  m.n_stocks = complete.size();
  std::array<std::vector<double>, 4> raw, logged;
  for (std::size_t k = 0; k < 4; ++k) {
    for (const auto* fv : complete) {
      const double v = *fv->value(m.factors[k]);
      raw[k].push_back(v);
      logged[k].push_back(is_size_factor(m.factors[k]) ? std::log10(v) : v);
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      m.raw[i][j] = stats::pearson(raw[i], raw[j]);
      m.log_space[i][j] = stats::pearson(logged[i], logged[j]);
    }
  }
  return m;
}

/// Factor pairs plotted against each other by default.
inline const std::vector<std::pair<Factor, Factor>> kDefaultScatterPairs{
    {Factor::trading_value, Factor::capitalization},
    {Factor::volume, Factor::capitalization},
    {Factor::trading_value, Factor::volume},
};

}  // namespace retint
