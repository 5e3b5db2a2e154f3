#pragma once

// Conditional interval statistics P_q(tau | tau0): each interval is classed by
// the size of the interval immediately before it in the same stock.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "retint/error.hpp"
#include "retint/fitting.hpp"
#include "retint/intervals.hpp"
#include "retint/stats.hpp"

namespace retint {

inline constexpr std::size_t kOctiles = 8;
inline constexpr std::size_t kLowStatisticsPairs = 50;

enum class OctileMode {
  geometric,  // fixed bounds 0, 0.2, 0.4, ..., 12.8, inf
  quantile,   // population octiles of the preceding interval
};

inline std::string_view to_string(OctileMode m) {
  return m == OctileMode::geometric ? "geometric" : "quantile";
}

/// Consecutive (tau0, tau) from one stock, both scaled by that stock's mean.
struct IntervalPair {
  double prev = 0.0;
  double next = 0.0;
};

/// Pairs never cross stocks; a stock with k intervals yields k - 1 pairs.
inline std::vector<IntervalPair> consecutive_pairs(const IntervalSeries& iv) {
  std::vector<IntervalPair> out;
  if (iv.taus.size() < 2) return out;
  out.reserve(iv.taus.size() - 1);
  for (std::size_t i = 1; i < iv.taus.size(); ++i) {
    out.push_back({static_cast<double>(iv.taus[i - 1]) / iv.mean_tau,
                   static_cast<double>(iv.taus[i]) / iv.mean_tau});
  }
  return out;
}

/// Pairs of every pooled stock, in pooled (ticker) order.
inline std::vector<IntervalPair> pooled_pairs(const PooledIntervals& pooled) {
  std::vector<IntervalPair> out;
  for (std::size_t i = 1; i < pooled.entries.size(); ++i) {
    const auto& a = pooled.entries[i - 1];
    const auto& b = pooled.entries[i];
    if (a.ticker == b.ticker && b.position == a.position + 1) out.push_back({a.scaled, b.scaled});
  }
  return out;
}

struct OctilePartition {
  OctileMode mode = OctileMode::geometric;
  /// Nine increasing bounds; bin Q_i is [boundaries[i-1], boundaries[i]).
  std::array<double, kOctiles + 1> boundaries{};

  /// Octile label 1..8 for a scaled preceding interval.
  int label(double prev_scaled) const {
    auto it = std::upper_bound(boundaries.begin() + 1, boundaries.end() - 1, prev_scaled);
    return static_cast<int>(it - boundaries.begin());
  }

  double lower(int octile) const { return boundaries[static_cast<std::size_t>(octile) - 1]; }
  double upper(int octile) const { return boundaries[static_cast<std::size_t>(octile)]; }
};

inline OctilePartition geometric_octiles() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {OctileMode::geometric, {0.0, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4, 12.8, inf}};
}

/// Octiles holding equal shares of the preceding intervals. Tied values can
/// collapse two bounds; those are nudged apart so the bounds stay strictly
/// increasing (the squeezed octile is then empty).
inline OctilePartition quantile_octiles(std::span<const IntervalPair> pairs) {
  if (pairs.empty()) throw DegenerateInput("quantile octiles need at least one pair");
  std::vector<double> prev;
  prev.reserve(pairs.size());
  for (const auto& p : pairs) prev.push_back(p.prev);
  std::sort(prev.begin(), prev.end());

  OctilePartition part;
  part.mode = OctileMode::quantile;
  part.boundaries.front() = 0.0;
  part.boundaries.back() = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < kOctiles; ++k) {
    const auto idx = (k * prev.size()) / kOctiles;
    double b = prev[std::min(idx, prev.size() - 1)];
    if (!(b > part.boundaries[k - 1])) b = std::nextafter(part.boundaries[k - 1], 1e300);
    part.boundaries[k] = b;
  }
  return part;
}

inline OctilePartition make_partition(OctileMode mode, std::span<const IntervalPair> pairs) {
  return mode == OctileMode::geometric ? geometric_octiles() : quantile_octiles(pairs);
}

/// Scaled tau of the pairs whose preceding interval falls in `octile`.
inline std::vector<double> octile_members(std::span<const IntervalPair> pairs,
                                          const OctilePartition& part, int octile) {
  std::vector<double> out;
  for (const auto& p : pairs) {
    if (part.label(p.prev) == octile) out.push_back(p.next);
  }
  return out;
}

struct ConditionalPdf {
  int octile = 0;
  double lower = 0.0, upper = 0.0;
  std::size_t n_pairs = 0;
  /// Fewer than 50 pairs; computed anyway.
  bool low_statistics = false;
  BinnedPdf pdf;  // empty when n_pairs == 0
};

/// Conditional density of the scaled tau given the octile of tau0. With
/// `edges` the histogram uses the given bins; otherwise it log-bins its own
/// samples.
inline ConditionalPdf conditional_pdf(std::span<const IntervalPair> pairs, const OctilePartition& part,
                                      int octile, std::optional<std::vector<double>> edges = std::nullopt,
                                      int bins_per_decade = kDefaultBinsPerDecade) {
  if (octile < 1 || octile > static_cast<int>(kOctiles)) throw ParameterError("octile must be in 1..8");
  ConditionalPdf c;
  c.octile = octile;
  c.lower = part.lower(octile);
  c.upper = part.upper(octile);
  const auto members = octile_members(pairs, part, octile);
  c.n_pairs = members.size();
  c.low_statistics = c.n_pairs < kLowStatisticsPairs;
  if (edges) {
    c.pdf = bin_with_edges(members, std::move(*edges));
  } else if (!members.empty()) {
    c.pdf = log_bin(members, bins_per_decade);
  }
  return c;
}

struct MemoryRow {
  int octile = 0;
  std::size_t count = 0;
  std::optional<double> mean_scaled_tau;
};

struct MemorySummary {
  std::array<MemoryRow, kOctiles> rows{};
  /// Rank correlation between octile index and mean scaled tau over populated octiles.
  std::optional<double> spearman;
};

inline MemorySummary memory_summary(std::span<const IntervalPair> pairs, const OctilePartition& part) {
  if (pairs.empty()) throw DegenerateInput("memory summary needs at least one pair");
  MemorySummary s;
  std::array<double, kOctiles> sums{};
  for (const auto& p : pairs) {
    const auto k = static_cast<std::size_t>(part.label(p.prev) - 1);
    sums[k] += p.next;
    ++s.rows[k].count;
  }
  std::vector<double> idx, means;
  for (std::size_t k = 0; k < kOctiles; ++k) {
    s.rows[k].octile = static_cast<int>(k + 1);
    if (s.rows[k].count > 0) {
      const double m = sums[k] / static_cast<double>(s.rows[k].count);
      s.rows[k].mean_scaled_tau = m;
      idx.push_back(static_cast<double>(k + 1));
      means.push_back(m);
    }
  }
  if (idx.size() >= 2) s.spearman = stats::spearman(idx, means);
  return s;
}

}  // namespace retint
