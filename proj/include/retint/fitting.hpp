#pragma once

// Log-binned densities and tail fits.
//
// Bins are geometric with a fixed number per decade. Densities are
// count / (n_total * width), so sum(density * width) == 1 over the binned
// samples. Fits regress on bin centers (geometric mean of the two edges).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "retint/error.hpp"
#include "retint/stats.hpp"

namespace retint {

inline constexpr int kDefaultBinsPerDecade = 8;
inline constexpr double kDefaultTailStart = 1.0;
inline constexpr std::size_t kDefaultMinBinCount = 10;
inline constexpr std::size_t kMinFitBins = 5;

struct BinnedPdf {
  std::vector<double> edges;  // size = bins + 1
  std::vector<double> densities;
  std::vector<std::size_t> counts;
  std::size_t n_total = 0;
  /// Samples that fell outside [edges.front(), edges.back()).
  std::size_t n_outside = 0;
  /// All samples were equal; a single bin holds them.
  bool degenerate = false;

  std::size_t bins() const { return counts.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  double center(std::size_t i) const { return std::sqrt(edges[i] * edges[i + 1]); }
  bool empty() const { return n_total == 0; }
};

/// Geometric edges starting at `lo` with `bins_per_decade` bins per decade and
/// enough bins that the last one contains `hi`.
inline std::vector<double> geometric_edges(double lo, double hi, int bins_per_decade) {
  if (!(lo > 0.0) || !(hi >= lo)) throw ParameterError("geometric edges need 0 < lo <= hi");
  if (bins_per_decade < 1) throw ParameterError("bins_per_decade must be >= 1");
  const double span = std::log10(hi / lo) * bins_per_decade;
  const auto bins = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = lo * std::pow(10.0, static_cast<double>(i) / bins_per_decade);
  }
  edges.front() = lo;
  // Guard against pow rounding below hi.
  if (edges.back() <= hi) edges.back() = std::nextafter(hi, std::numeric_limits<double>::infinity());
  return edges;
}

/// Histogram on fixed half-open edges [e_i, e_{i+1}). Out-of-range samples
/// are counted separately and do not contribute to the normalization.
inline BinnedPdf bin_with_edges(std::span<const double> samples, std::vector<double> edges) {
  if (edges.size() < 2) throw ParameterError("need at least one bin");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ParameterError("bin edges must be strictly increasing");
  }
  BinnedPdf pdf;
  pdf.edges = std::move(edges);
  pdf.counts.assign(pdf.edges.size() - 1, 0);
  pdf.densities.assign(pdf.edges.size() - 1, 0.0);
  for (double x : samples) {
    if (x < pdf.edges.front() || x >= pdf.edges.back()) {
      ++pdf.n_outside;
      continue;
    }
    auto it = std::upper_bound(pdf.edges.begin(), pdf.edges.end(), x);
    ++pdf.counts[static_cast<std::size_t>(it - pdf.edges.begin()) - 1];
    ++pdf.n_total;
  }
  if (pdf.n_total > 0) {
    for (std::size_t i = 0; i < pdf.bins(); ++i) {
      pdf.densities[i] =
          static_cast<double>(pdf.counts[i]) / (static_cast<double>(pdf.n_total) * pdf.width(i));
    }
  }
  return pdf;
}

/// Log-binned density of positive samples, edges spanning [min, max].
inline BinnedPdf log_bin(std::span<const double> samples, int bins_per_decade = kDefaultBinsPerDecade) {
  if (samples.empty()) throw DegenerateInput("log_bin needs at least one sample");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  if (!(*mn > 0.0)) throw DegenerateInput("log_bin samples must be positive");
  auto pdf = bin_with_edges(samples, geometric_edges(*mn, *mx, bins_per_decade));
  pdf.degenerate = (*mn == *mx);
  return pdf;
}

// ---------------------------------------------------------------------------
// Fits

struct FitOptions {
  double x_min = kDefaultTailStart;
  /// Bins with fewer counts than this are left out of the regression.
  std::size_t min_count = kDefaultMinBinCount;
};

struct TailFit {
  double gamma = 0.0;
  double x_min = 0.0;
  double std_error = 0.0;
  std::size_t n_tail = 0;  // bins used
  double r_squared = 0.0;
  /// Largest bin center used; x_max / x_min is the fitted range.
  double x_max = 0.0;

  double decades() const { return std::log10(x_max / x_min); }
};

struct ExpFit {
  double a = 0.0;
  double std_error = 0.0;
  double r_squared = 0.0;
  std::size_t n_bins = 0;
  double x_min = 0.0;
};

namespace detail {

struct FitPoints {
  std::vector<double> x, y;
  double x_max = 0.0;
};

inline FitPoints tail_points(const BinnedPdf& pdf, const FitOptions& opt, bool log_x) {
  FitPoints p;
  for (std::size_t i = 0; i < pdf.bins(); ++i) {
    const double c = pdf.center(i);
    if (c < opt.x_min || pdf.counts[i] == 0 || pdf.counts[i] < opt.min_count) continue;
    if (!(pdf.densities[i] > 0.0)) continue;
    p.x.push_back(log_x ? std::log10(c) : c);
    p.y.push_back(log_x ? std::log10(pdf.densities[i]) : std::log(pdf.densities[i]));
    p.x_max = std::max(p.x_max, c);
  }
  return p;
}

}  // namespace detail

/// Least squares on (log10 center, log10 density) for bins with center >= x_min.
/// gamma = -slope.
inline TailFit fit_power_tail(const BinnedPdf& pdf, const FitOptions& opt = {}) {
  if (!(opt.x_min > 0.0)) throw ParameterError("x_min must be positive");
  const auto pts = detail::tail_points(pdf, opt, true);
  if (pts.x.size() < kMinFitBins) {
    throw InsufficientData("power-law tail fit needs at least 5 populated bins above x_min, got " +
                           std::to_string(pts.x.size()));
  }
  const auto line = stats::fit_line(pts.x, pts.y);
  TailFit f;
  f.gamma = -line.slope;
  f.x_min = opt.x_min;
  f.std_error = line.slope_stderr;
  f.n_tail = pts.x.size();
  f.r_squared = line.r_squared;
  f.x_max = pts.x_max;
  return f;
}

/// Least squares on (center, ln density); a = -slope, must be positive.
/// x_min defaults to 0 (whole histogram) when not given.
inline ExpFit fit_exponential(const BinnedPdf& pdf, const FitOptions& opt = {0.0, kDefaultMinBinCount}) {
  const auto pts = detail::tail_points(pdf, opt, false);
  if (pts.x.size() < kMinFitBins) {
    throw InsufficientData("exponential fit needs at least 5 populated bins, got " +
                           std::to_string(pts.x.size()));
  }
  const auto line = stats::fit_line(pts.x, pts.y);
  if (!(line.slope < 0.0)) {
    throw FitShapeError("fitted exponential rate is not positive; data do not decay");
  }
  ExpFit f;
  f.a = -line.slope;
  f.std_error = line.slope_stderr;
  f.r_squared = line.r_squared;
  f.n_bins = pts.x.size();
  f.x_min = opt.x_min;
  return f;
}

/// Continuous power-law maximum-likelihood (Hill-type) estimate of the density
/// exponent over samples >= x_min: gamma = 1 + n / sum ln(x / x_min).
struct HillEstimate {
  double gamma = 0.0;
  double std_error = 0.0;
  std::size_t n_tail = 0;
};

inline HillEstimate hill_estimator(std::span<const double> samples, double x_min) {
  if (!(x_min > 0.0)) throw ParameterError("x_min must be positive");
  double acc = 0.0;
  std::size_t n = 0;
  for (double x : samples) {
    if (x >= x_min) {
      acc += std::log(x / x_min);
      ++n;
    }
  }
  if (n < 2 || !(acc > 0.0)) throw InsufficientData("Hill estimator needs tail samples above x_min");
  HillEstimate h;
  h.n_tail = n;
  h.gamma = 1.0 + static_cast<double>(n) / acc;
  h.std_error = (h.gamma - 1.0) / std::sqrt(static_cast<double>(n));
  return h;
}

struct SensitivityPoint {
  double x_min = 0.0;
  std::optional<TailFit> fit;  // empty when the range had too few bins
};

/// Power-law fit repeated over a grid of fit-range starts.
inline std::vector<SensitivityPoint> gamma_sensitivity(const BinnedPdf& pdf,
                                                       std::span<const double> x_min_grid,
                                                       std::size_t min_count = kDefaultMinBinCount) {
  std::vector<SensitivityPoint> out;
  for (double xm : x_min_grid) {
    SensitivityPoint p{xm, std::nullopt};
    try {
      p.fit = fit_power_tail(pdf, {xm, min_count});
    } catch (const InsufficientData&) {
    }
    out.push_back(p);
  }
  return out;
}

inline const std::vector<double> kDefaultSensitivityGrid{0.5, 1.0, 2.0, 4.0};

/// Two-sample KS distance between two sets of scaled samples.
inline double collapse_distance(std::span<const double> a, std::span<const double> b) {
  return stats::ks_two_sample(a, b);
}

}  // namespace retint
