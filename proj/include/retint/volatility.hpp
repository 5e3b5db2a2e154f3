#pragma once

// Log returns and normalized volatility. Applies unchanged to volume and to
// close-price series.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <span>
#include <string_view>
#include <vector>

#include "retint/error.hpp"
#include "retint/ingest.hpp"
#include "retint/parallel.hpp"

namespace retint {

enum class SeriesKind { volume, price };

inline std::string_view to_string(SeriesKind k) {
  return k == SeriesKind::volume ? "volume" : "price";
}

struct ReturnSeries {
  std::vector<double> values;
  std::size_t source_len = 0;
  /// Steps dropped because one endpoint was zero.
  std::size_t dropped = 0;
};

struct VolatilitySeries {
  std::vector<double> values;
  /// Standard deviation of |R| used as the divisor.
  double norm_std = 0.0;
};

enum class MomentConvention {
  population,  // divide by N
  sample,      // divide by N - 1
};

/// R(t) = ln(x[t] / x[t-1]). A step touching a zero on either side is
/// undefined; it is dropped and counted rather than imputed.
inline ReturnSeries log_returns(std::span<const double> x) {
  if (x.size() < 2) throw DegenerateInput("log_returns needs at least two observations");
  ReturnSeries r;
  r.source_len = x.size();
  r.values.reserve(x.size() - 1);
  for (std::size_t t = 1; t < x.size(); ++t) {
    if (x[t] <= 0.0 || x[t - 1] <= 0.0) {
      ++r.dropped;
      continue;
    }
    r.values.push_back(std::log(x[t] / x[t - 1]));
  }
  return r;
}

/// nu(t) = |R(t)| / sqrt(<|R|^2> - <|R|>^2), moments over the defined returns.
inline VolatilitySeries normalize_volatility(const ReturnSeries& r,
                                             MomentConvention conv = MomentConvention::population) {
  const auto n = r.values.size();
  if (n < 2) throw DegenerateInput("normalize_volatility needs at least two returns");

  double m1 = 0.0;
  for (double v : r.values) m1 += std::abs(v);
  m1 /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : r.values) {
    const double d = std::abs(v) - m1;
    ss += d * d;
  }
  const double denom =
      conv == MomentConvention::population ? static_cast<double>(n) : static_cast<double>(n - 1);
  const double sd = std::sqrt(ss / denom);
  if (!(sd > 0.0) || sd <= 1e-14 * m1) {
    throw DegenerateSeries("all absolute returns are equal; volatility cannot be normalized");
  }

  VolatilitySeries out;
  out.norm_std = sd;
  out.values.reserve(n);
  for (double v : r.values) out.values.push_back(std::abs(v) / sd);
  return out;
}

/// Column of a stock series as doubles.
inline std::vector<double> series_column(const DailySeries& s, SeriesKind kind) {
  std::vector<double> out;
  out.reserve(s.records.size());
  for (const auto& r : s.records) {
    out.push_back(kind == SeriesKind::volume ? static_cast<double>(r.volume) : r.close);
  }
  return out;
}

/// Volatility of one stock's volume or price column.
inline VolatilitySeries stock_volatility(const DailySeries& s, SeriesKind kind,
                                         MomentConvention conv = MomentConvention::population) {
  const auto col = series_column(s, kind);
  return normalize_volatility(log_returns(col), conv);
}

struct StockVolatility {
  std::string ticker;
  std::optional<VolatilitySeries> nu;  // empty when degenerate or too short
  std::size_t dropped = 0;
  bool degenerate = false;
};

/// Per-stock volatility, tolerant of unusable stocks (they are flagged, not thrown).
inline StockVolatility compute_stock_volatility(const DailySeries& s, SeriesKind kind,
                                                MomentConvention conv = MomentConvention::population) {
  StockVolatility out;
  out.ticker = s.ticker;
  try {
    const auto col = series_column(s, kind);
    const auto r = log_returns(col);
    out.dropped = r.dropped;
    out.nu = normalize_volatility(r, conv);
  } catch (const DegenerateSeries&) {
    out.degenerate = true;
  } catch (const DegenerateInput&) {
    out.degenerate = true;
  }
  return out;
}

inline std::vector<StockVolatility> corpus_volatility(const Corpus& c, SeriesKind kind, unsigned jobs = 1,
                                                      MomentConvention conv = MomentConvention::population) {
  return parallel_map(c.stocks.size(), jobs,
                      [&](std::size_t i) { return compute_stock_volatility(c.stocks[i], kind, conv); });
}

}  // namespace retint
