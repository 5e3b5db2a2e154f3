#pragma once

// DFA exponent of each stock's volatility series, grouped by factor bin.

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "retint/dfa.hpp"
#include "retint/factors.hpp"
#include "retint/parallel.hpp"
#include "retint/volatility.hpp"

namespace retint {

/// alpha per ticker; absent when the series is too short for DFA.
inline std::map<std::string, std::optional<double>> stock_alphas(std::span<const StockVolatility> vols,
                                                                 int order = 1, unsigned jobs = 1) {
  auto alphas = parallel_map(vols.size(), jobs, [&](std::size_t i) -> std::optional<double> {
    if (!vols[i].nu) return std::nullopt;
    try {
      const auto c = dfa(vols[i].nu->values, DfaOptions{order, {}, std::nullopt});
      if (std::isfinite(c.alpha)) return c.alpha;
    } catch (const DegenerateInput&) {
    } catch (const ParameterError&) {
    }
    return std::nullopt;
  });
  std::map<std::string, std::optional<double>> out;
  for (std::size_t i = 0; i < vols.size(); ++i) out.emplace(vols[i].ticker, alphas[i]);
  return out;
}

struct AlphaRow {
  std::size_t bin = 0;
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;  // members with a defined alpha
  std::optional<double> mean_alpha;
  std::optional<double> std_alpha;  // population spread across stocks
};

inline std::vector<AlphaRow> alpha_by_bins(const FactorBinning& binning,
                                           const std::map<std::string, std::optional<double>>& alphas) {
  std::vector<AlphaRow> rows;
  for (std::size_t b = 0; b < binning.bins(); ++b) {
    AlphaRow row;
    row.bin = b;
    row.lo = binning.edges[b];
    row.hi = binning.edges[b + 1];
    std::vector<double> vals;
    for (const auto& t : binning.members[b]) {
      auto it = alphas.find(t);
      if (it != alphas.end() && it->second) vals.push_back(*it->second);
    }
    row.count = vals.size();
    if (!vals.empty()) {
      row.mean_alpha = stats::mean(vals);
      row.std_alpha = stats::stddev(vals);
    }
    rows.push_back(row);
  }
  return rows;
}

/// Mean and spread of alpha per factor bin for one series kind.
inline std::vector<AlphaRow> alpha_by_factor(const Corpus& corpus, const FactorBinning& binning,
                                             SeriesKind kind = SeriesKind::volume, int order = 1,
                                             unsigned jobs = 1) {
  if (corpus.stocks.empty()) throw DegenerateInput("alpha_by_factor needs a non-empty corpus");
  const auto vols = corpus_volatility(corpus, kind, jobs);
  return alpha_by_bins(binning, stock_alphas(vols, order, jobs));
}

}  // namespace retint
