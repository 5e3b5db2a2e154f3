#pragma once

// Threshold return intervals, per-stock scaling, pooling and shuffle controls.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "retint/error.hpp"
#include "retint/rng.hpp"
#include "retint/volatility.hpp"

namespace retint {

inline const std::vector<double> kDefaultThresholds{2.0, 2.5, 3.0, 3.5, 4.0};

/// Waiting times between consecutive exceedances of q. Only complete
/// between-exceedance intervals are kept; the stretch before the first
/// exceedance and after the last one is censored and discarded.
struct IntervalSeries {
  double q = 0.0;
  std::vector<std::int64_t> taus;
  double mean_tau = 0.0;
  /// Index of the first exceedance (-1 when there is none).
  std::int64_t first_exceedance = -1;
  std::size_t exceedances = 0;

  /// Fewer than two exceedances; no interval exists.
  bool insufficient() const { return taus.empty(); }
};

inline IntervalSeries extract_intervals(std::span<const double> nu, double q) {
  if (!(q > 0.0)) throw ParameterError("threshold q must be positive");
  IntervalSeries iv;
  iv.q = q;
  std::int64_t prev = -1;
  for (std::size_t t = 0; t < nu.size(); ++t) {
    if (!(nu[t] > q)) continue;
    const auto ti = static_cast<std::int64_t>(t);
    ++iv.exceedances;
    if (prev < 0) {
      iv.first_exceedance = ti;
    } else {
      iv.taus.push_back(ti - prev);
    }
    prev = ti;
  }
  if (!iv.taus.empty()) {
    const double sum = static_cast<double>(std::accumulate(iv.taus.begin(), iv.taus.end(), std::int64_t{0}));
    iv.mean_tau = sum / static_cast<double>(iv.taus.size());
  }
  return iv;
}

inline IntervalSeries extract_intervals(const VolatilitySeries& v, double q) {
  return extract_intervals(v.values, q);
}

/// tau / <tau> for one stock, in sequence order.
inline std::vector<double> scaled_taus(const IntervalSeries& iv) {
  std::vector<double> out;
  out.reserve(iv.taus.size());
  for (auto t : iv.taus) out.push_back(static_cast<double>(t) / iv.mean_tau);
  return out;
}

struct TaggedIntervals {
  std::string ticker;
  IntervalSeries intervals;
};

struct PooledEntry {
  double scaled = 0.0;
  std::string ticker;
  std::size_t position = 0;  // index within the stock's interval sequence
};

/// Scaled intervals pooled across stocks. Each tau is scaled by the mean of
/// its own stock before pooling.
struct PooledIntervals {
  double q = 0.0;
  std::vector<PooledEntry> entries;  // sorted by (ticker, position)
  std::map<std::string, double> per_stock_means;
  std::size_t stocks_skipped = 0;  // members with no interval

  std::vector<double> scaled_values() const {
    std::vector<double> v;
    v.reserve(entries.size());
    for (const auto& e : entries) v.push_back(e.scaled);
    return v;
  }
};

/// Members with no interval are skipped and counted; the remaining output does
/// not depend on the order of `members`.
inline PooledIntervals pool_scaled(std::span<const TaggedIntervals> members, double q) {
  PooledIntervals out;
  out.q = q;
  std::vector<const TaggedIntervals*> order;
  for (const auto& m : members) {
    if (m.intervals.insufficient()) {
      ++out.stocks_skipped;
      continue;
    }
    order.push_back(&m);
  }
  std::sort(order.begin(), order.end(),
            [](const auto* a, const auto* b) { return a->ticker < b->ticker; });
  for (const auto* m : order) {
    out.per_stock_means[m->ticker] = m->intervals.mean_tau;
    const auto& taus = m->intervals.taus;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      out.entries.push_back(
          {static_cast<double>(taus[i]) / m->intervals.mean_tau, m->ticker, i});
    }
  }
  return out;
}

/// Uniform random permutation of the volatility values (Fisher-Yates driven
/// by the given seed). Values are moved, never recomputed.
inline VolatilitySeries shuffle_control(const VolatilitySeries& v, std::uint64_t seed) {
  if (v.values.empty()) throw DegenerateInput("shuffle_control needs a non-empty series");
  VolatilitySeries out = v;
  Rng rng(seed);
  rng.shuffle(std::span<double>(out.values));
  return out;
}

}  // namespace retint
