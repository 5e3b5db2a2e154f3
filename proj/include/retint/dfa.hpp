#pragma once

// Detrended fluctuation analysis.
//
//   1. profile Y(k) = cumsum(x - mean(x))
//   2. floor(N/n) non-overlapping boxes of length n from the start, and as
//      many again from the end so the remainder is covered
//   3. remove the least-squares polynomial of the given order in every box
//   4. F(n) = sqrt(mean over all boxes of the mean squared residual)
//
// alpha is the least-squares slope of log F(n) against log n.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "retint/error.hpp"
#include "retint/stats.hpp"

namespace retint {

struct DfaOptions {
  int order = 1;
  /// Window sizes; empty selects default_windows(N).
  std::vector<std::size_t> windows;
  /// Inclusive index range into the window list used for the alpha fit;
  /// empty means the whole list.
  std::optional<std::pair<std::size_t, std::size_t>> fit_range;
};

struct DfaCurve {
  std::vector<std::size_t> window_sizes;
  std::vector<double> fluctuations;
  double alpha = 0.0;
  double std_error = 0.0;
  std::pair<std::size_t, std::size_t> fit_range{0, 0};  // window sizes (n_min, n_max)
  int order = 1;

  /// alpha above 1 signals a nonstationary input; reported, not clamped.
  bool nonstationary() const { return alpha > 1.0; }
};

/// About 20 geometrically spaced sizes from max(8, order + 2) to N / 4.
inline std::vector<std::size_t> default_windows(std::size_t n, int order = 1, std::size_t count = 20) {
  const std::size_t lo = std::max<std::size_t>(8, static_cast<std::size_t>(order) + 2);
  const std::size_t hi = n / 4;
  std::vector<std::size_t> w;
  if (hi < lo) return w;
  if (hi == lo || count < 2) return {lo};
  const double ratio = std::pow(static_cast<double>(hi) / static_cast<double>(lo), 1.0 / static_cast<double>(count - 1));
  for (std::size_t i = 0; i < count; ++i) {
    const auto v = static_cast<std::size_t>(std::llround(static_cast<double>(lo) * std::pow(ratio, static_cast<double>(i))));
    const auto c = std::clamp(v, lo, hi);
    if (w.empty() || c > w.back()) w.push_back(c);
  }
  return w;
}

namespace detail {

/// Orthonormal basis of polynomials of degree <= order sampled on 0..n-1,
/// built by modified Gram-Schmidt on centered, scaled monomials.
inline std::vector<std::vector<double>> poly_basis(std::size_t n, int order) {
  std::vector<std::vector<double>> basis;
  const double mid = 0.5 * static_cast<double>(n - 1);
  const double scale = mid > 0.0 ? mid : 1.0;
  for (int d = 0; d <= order; ++d) {
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) v[t] = std::pow((static_cast<double>(t) - mid) / scale, d);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        double dot = 0.0;
        for (std::size_t t = 0; t < n; ++t) dot += v[t] * b[t];
        for (std::size_t t = 0; t < n; ++t) v[t] -= dot * b[t];
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Sum of squared residuals of `box` after projecting out the basis.
inline double detrended_ss(std::span<const double> box, const std::vector<std::vector<double>>& basis,
                           std::vector<double>& resid) {
  resid.assign(box.begin(), box.end());
  for (const auto& b : basis) {
    double dot = 0.0;
    for (std::size_t t = 0; t < resid.size(); ++t) dot += resid[t] * b[t];
    for (std::size_t t = 0; t < resid.size(); ++t) resid[t] -= dot * b[t];
  }
  double ss = 0.0;
  for (double r : resid) ss += r * r;
  return ss;
}

}  // namespace detail

/// F(n) for one window size on a precomputed profile.
inline double dfa_fluctuation(std::span<const double> profile, std::size_t n, int order) {
  const std::size_t N = profile.size();
  const std::size_t boxes = N / n;
  if (boxes == 0) throw DegenerateInput("window larger than the series");
  const auto basis = detail::poly_basis(n, order);
  std::vector<double> resid;
  double total = 0.0;
  for (std::size_t b = 0; b < boxes; ++b) {
    total += detail::detrended_ss(profile.subspan(b * n, n), basis, resid);
    total += detail::detrended_ss(profile.subspan(N - (b + 1) * n, n), basis, resid);
  }
  return std::sqrt(total / static_cast<double>(2 * boxes * n));
}

inline std::vector<double> dfa_profile(std::span<const double> series) {
  const double m = stats::mean(series);
  std::vector<double> y(series.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    acc += series[i] - m;
    y[i] = acc;
  }
  return y;
}

inline DfaCurve dfa(std::span<const double> series, const DfaOptions& opt = {}) {
  if (opt.order < 1) throw ParameterError("DFA order must be >= 1");
  const std::size_t N = series.size();
  auto windows = opt.windows.empty() ? default_windows(N, opt.order) : opt.windows;
  const std::size_t min_window = static_cast<std::size_t>(opt.order) + 2;
  const std::size_t max_window = N / 4;
  auto feasible = [&] {
    return "feasible window range for N=" + std::to_string(N) + ", order " + std::to_string(opt.order) +
           " is [" + std::to_string(min_window) + ", " + std::to_string(max_window) + "]";
  };
  if (windows.empty() || max_window < min_window) {
    throw DegenerateInput("series too short for DFA; " + feasible());
  }
  std::sort(windows.begin(), windows.end());
  windows.erase(std::unique(windows.begin(), windows.end()), windows.end());
  if (windows.front() < min_window || windows.back() > max_window) {
    throw DegenerateInput("requested windows [" + std::to_string(windows.front()) + ", " +
                          std::to_string(windows.back()) + "] out of range; " + feasible());
  }

  const auto profile = dfa_profile(series);
  DfaCurve c;
  c.order = opt.order;
  c.window_sizes = windows;
  c.fluctuations.reserve(windows.size());
  for (auto n : windows) c.fluctuations.push_back(dfa_fluctuation(profile, n, opt.order));

  auto [lo, hi] = opt.fit_range.value_or(std::pair<std::size_t, std::size_t>{0, windows.size() - 1});
  hi = std::min(hi, windows.size() - 1);
  if (lo >= hi) throw ParameterError("DFA fit range must cover at least two windows");
  c.fit_range = {windows[lo], windows[hi]};

  std::vector<double> lx, ly;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (c.fluctuations[i] > 0.0) {
      lx.push_back(std::log10(static_cast<double>(windows[i])));
      ly.push_back(std::log10(c.fluctuations[i]));
    }
  }
  if (lx.size() >= 2) {
    const auto line = stats::fit_line(lx, ly);
    c.alpha = line.slope;
    c.std_error = line.slope_stderr;
  } else {
    c.alpha = std::numeric_limits<double>::quiet_NaN();
  }
  return c;
}

}  // namespace retint
