#pragma once

// Synthetic series and corpora with known statistics.
//
//   iid      independent normal draws
//   fgn      fractional Gaussian noise, exact covariance by circulant embedding
//   cascade  dyadic multiplicative cascade with log-normal multipliers
//
// Random numbers come from retint::Rng (mt19937_64 engine), so a (spec, seed)
// pair always yields the same series.

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "retint/error.hpp"
#include "retint/ingest.hpp"
#include "retint/parallel.hpp"
#include "retint/rng.hpp"

namespace retint {

enum class GeneratorKind { iid, fgn, cascade };

inline std::string_view to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::iid: return "iid";
    case GeneratorKind::fgn: return "fgn";
    case GeneratorKind::cascade: return "cascade";
  }
  return "?";
}

inline std::optional<GeneratorKind> parse_generator_kind(std::string_view s) {
  for (auto k : {GeneratorKind::iid, GeneratorKind::fgn, GeneratorKind::cascade}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::iid;
  std::size_t length = 0;
  std::uint64_t seed = 0;
  // iid: normal(mean, sigma)
  double mean = 0.0;
  double sigma = 1.0;
  // fgn
  double hurst = 0.5;
  // cascade: multipliers exp(cascade_sigma * Z - cascade_sigma^2 / 2), mean one
  double cascade_sigma = 0.4;
  /// 0 picks ceil(log2(length)).
  int cascade_levels = 0;
};

inline void validate(const GeneratorSpec& s) {
  if (s.length < 2) throw ParameterError("generator length must be >= 2");
  switch (s.kind) {
    case GeneratorKind::iid:
      if (!(s.sigma > 0.0)) throw ParameterError("iid sigma must be positive");
      break;
    case GeneratorKind::fgn:
      if (!(s.hurst > 0.0 && s.hurst < 1.0)) throw ParameterError("Hurst exponent must lie in (0, 1)");
      break;
    case GeneratorKind::cascade:
      if (s.cascade_levels < 0) throw ParameterError("cascade levels must be >= 1");
      if (!(s.cascade_sigma >= 0.0)) throw ParameterError("cascade sigma must be non-negative");
      break;
  }
}

// ---------------------------------------------------------------------------
// fGn

/// Autocovariance of unit-variance fractional Gaussian noise at lag k.
inline double fgn_autocovariance(std::size_t k, double hurst) {
  const double h2 = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(std::abs(kk - 1.0), h2));
}

namespace detail {

// FFTW planning is not thread-safe; execution on distinct arrays is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

/// In-place forward DFT.
inline void fft_forward(FftwBuffer& buf, std::size_t n) {
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace detail

/// Circulant-embedding (Davies-Harte) fGn of length n.
inline std::vector<double> generate_fgn(std::size_t n, double hurst, Rng& rng) {
  const std::size_t m = 2 * n;
  detail::FftwBuffer buf(m);
  for (std::size_t k = 0; k <= n; ++k) {
    buf.data[k][0] = fgn_autocovariance(k, hurst);
    buf.data[k][1] = 0.0;
  }
  for (std::size_t k = n + 1; k < m; ++k) {
    buf.data[k][0] = buf.data[m - k][0];
    buf.data[k][1] = 0.0;
  }
  detail::fft_forward(buf, m);

  double lmax = 0.0;
  for (std::size_t k = 0; k < m; ++k) lmax = std::max(lmax, buf.data[k][0]);
  for (std::size_t k = 0; k < m; ++k) {
    double lambda = buf.data[k][0];
    if (lambda < 0.0) {
      if (lambda < -1e-8 * lmax) throw ParameterError("circulant embedding is not non-negative definite");
      lambda = 0.0;
    }
    const double a = std::sqrt(lambda / static_cast<double>(m));
    const double re = rng.normal();
    const double im = rng.normal();
    buf.data[k][0] = a * re;
    buf.data[k][1] = a * im;
  }
  detail::fft_forward(buf, m);

  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = buf.data[k][0];
  return out;
}

// ---------------------------------------------------------------------------
// Cascade

/// Positive dyadic cascade. Each of `levels` generations splits every cell in
/// two and multiplies each half by an independent mean-one log-normal weight.
inline std::vector<double> generate_cascade(std::size_t n, double sigma, int levels, Rng& rng) {
  if (levels <= 0) {
    levels = 1;
    while ((std::size_t{1} << levels) < n) ++levels;
  }
  std::vector<double> w{1.0};
  for (int l = 0; l < levels; ++l) {
    std::vector<double> next(w.size() * 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = w[i / 2] * std::exp(sigma * rng.normal() - 0.5 * sigma * sigma);
    }
    w = std::move(next);
  }
  std::vector<double> out(n);
  const std::size_t stretch = (n + w.size() - 1) / w.size();
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i / stretch];
  return out;
}

inline std::vector<double> generate(const GeneratorSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  switch (spec.kind) {
    case GeneratorKind::iid: {
      std::vector<double> out(spec.length);
      for (auto& v : out) v = rng.normal(spec.mean, spec.sigma);
      return out;
    }
    case GeneratorKind::fgn:
      return generate_fgn(spec.length, spec.hurst, rng);
    case GeneratorKind::cascade:
      return generate_cascade(spec.length, spec.cascade_sigma, spec.cascade_levels, rng);
  }
  throw ParameterError("unknown generator kind");
}

/// |x(t+1) - x(t)|: magnitudes of the increments.
inline std::vector<double> magnitude_series(std::span<const double> x) {
  std::vector<double> out;
  if (x.size() < 2) return out;
  out.reserve(x.size() - 1);
  for (std::size_t t = 1; t < x.size(); ++t) out.push_back(std::abs(x[t] - x[t - 1]));
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic stocks

/// Ground truth for one synthetic stock.
struct StockPlan {
  std::string ticker;
  GeneratorSpec latent;  // latent.length is set to lifetime - 1
  std::size_t lifetime = 0;
  double mean_volume = 1e6;
  double price = 20.0;
  std::optional<std::int64_t> shares_outstanding = 10'000'000;
  /// Magnitude transform m = exp(vol_of_vol * x) for iid and fgn latents.
  double vol_of_vol = 1.0;
  /// Largest absolute log-volume step; sets how far volume strays from its level.
  double max_log_step = 2.0;
};

struct SynthCorpus {
  Corpus corpus;
  std::vector<StockPlan> planted;  // same order as corpus.stocks
};

inline Date synth_start_date() {
  using namespace std::chrono;
  return year{1990} / January / 2;
}

/// `count` consecutive weekdays starting at (or after) `start`.
inline std::vector<Date> business_days(Date start, std::size_t count) {
  using namespace std::chrono;
  std::vector<Date> out;
  out.reserve(count);
  sys_days d{start};
  while (out.size() < count) {
    const weekday wd{d};
    if (wd != Saturday && wd != Sunday) out.emplace_back(d);
    d += days{1};
  }
  return out;
}

namespace detail {

/// Log path whose absolute step at t is step[t] and whose sign always points
/// back toward zero, so |path| never exceeds the largest step.
inline std::vector<double> reverting_path(std::span<const double> step) {
  std::vector<double> path(step.size() + 1, 0.0);
  for (std::size_t t = 0; t < step.size(); ++t) {
    const double dir = path[t] > 0.0 ? -1.0 : 1.0;
    path[t + 1] = path[t] + dir * step[t];
  }
  return path;
}

}  // namespace detail

/// One synthetic stock. The latent series sets the size of each daily
/// log-volume change, |R(t)| proportional to m(t), so the volatility of the
/// resulting volume column reproduces the latent process up to a monotone
/// map. The sign of each change pulls log volume back toward its level.
inline DailySeries synth_stock(const StockPlan& plan) {
  if (plan.lifetime < 3) throw ParameterError("synthetic lifetime must be >= 3");
  if (!(plan.mean_volume > 0.0) || !(plan.price > 0.0)) throw ParameterError("planted sizes must be positive");
  GeneratorSpec spec = plan.latent;
  spec.length = plan.lifetime - 1;
  const auto x = generate(spec);

  std::vector<double> mag(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    mag[t] = spec.kind == GeneratorKind::cascade ? x[t] : std::exp(plan.vol_of_vol * x[t]);
  }
  const double mmax = *std::max_element(mag.begin(), mag.end());
  for (auto& m : mag) m *= plan.max_log_step / mmax;
  const auto vpath = detail::reverting_path(mag);

  double vsum = 0.0;
  for (double l : vpath) vsum += std::exp(l);
  const double vscale = plan.mean_volume * static_cast<double>(vpath.size()) / vsum;

  // Price: an independent small-step reverting walk around the planted level.
  Rng prng(splitmix64(spec.seed ^ 0xC1C1C1C1ULL));
  std::vector<double> pstep(x.size());
  for (auto& s : pstep) s = 0.02 * std::abs(prng.normal());
  const auto ppath = detail::reverting_path(pstep);

  const auto dates = business_days(synth_start_date(), plan.lifetime);
  DailySeries s;
  s.ticker = plan.ticker;
  s.records.reserve(plan.lifetime);
  for (std::size_t t = 0; t < plan.lifetime; ++t) {
    DailyRecord r;
    r.date = dates[t];
    r.volume = std::max<std::int64_t>(1, std::llround(vscale * std::exp(vpath[t])));
    r.close = std::max(1e-4, std::round(plan.price * std::exp(ppath[t]) * 1e4) / 1e4);
    r.shares_outstanding = plan.shares_outstanding;
    s.records.push_back(r);
  }
  return s;
}

inline std::string synth_ticker(std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "S%05zu", i);
  return buf;
}

/// Corpus of `n_stocks` synthetic stocks; `rule(i)` supplies the plan for
/// stock i. Stocks are generated in parallel and returned in ticker order.
inline SynthCorpus synth_corpus(std::size_t n_stocks, const std::function<StockPlan(std::size_t)>& rule,
                                unsigned jobs = 1) {
  if (n_stocks < 1) throw ParameterError("synth_corpus needs at least one stock");
  std::vector<StockPlan> plans;
  plans.reserve(n_stocks);
  for (std::size_t i = 0; i < n_stocks; ++i) {
    plans.push_back(rule(i));
    if (plans.back().ticker.empty()) plans.back().ticker = synth_ticker(i);
    plans.back().latent.length = plans.back().lifetime - 1;
  }
  std::sort(plans.begin(), plans.end(), [](const auto& a, const auto& b) { return a.ticker < b.ticker; });

  SynthCorpus out;
  out.corpus.stocks = parallel_map(plans.size(), jobs, [&](std::size_t i) { return synth_stock(plans[i]); });
  out.corpus.min_lifetime = plans.front().lifetime;
  for (const auto& p : plans) out.corpus.min_lifetime = std::min(out.corpus.min_lifetime, p.lifetime);
  out.planted = std::move(plans);
  return out;
}

/// Parameters for a homogeneous corpus of one latent kind with log-normal
/// planted sizes.
struct UniformCorpusSpec {
  GeneratorKind kind = GeneratorKind::iid;
  std::size_t n_stocks = 100;
  std::size_t lifetime = 5000;
  std::uint64_t seed = 1;
  double hurst = 0.8;
  double cascade_sigma = 0.4;
  double vol_of_vol = 1.0;
  // log10 sizes ~ normal(mu, sigma)
  double log10_volume_mu = 6.0, log10_volume_sigma = 0.5;
  double log10_price_mu = 1.3, log10_price_sigma = 0.4;
  double log10_shares_mu = 7.5, log10_shares_sigma = 0.5;
};

inline StockPlan uniform_plan(const UniformCorpusSpec& u, std::size_t i) {
  Rng rng(derive_seed(u.seed, static_cast<std::uint64_t>(i)));
  StockPlan p;
  p.ticker = synth_ticker(i);
  p.lifetime = u.lifetime;
  p.latent.kind = u.kind;
  p.latent.seed = rng.next_u64();
  p.latent.hurst = u.hurst;
  p.latent.cascade_sigma = u.cascade_sigma;
  p.vol_of_vol = u.vol_of_vol;
  p.mean_volume = std::pow(10.0, rng.normal(u.log10_volume_mu, u.log10_volume_sigma));
  p.price = std::pow(10.0, rng.normal(u.log10_price_mu, u.log10_price_sigma));
  p.shares_outstanding = std::llround(std::pow(10.0, rng.normal(u.log10_shares_mu, u.log10_shares_sigma)));
  return p;
}

inline SynthCorpus synth_uniform_corpus(const UniformCorpusSpec& u, unsigned jobs = 1) {
  return synth_corpus(u.n_stocks, [&](std::size_t i) { return uniform_plan(u, i); }, jobs);
}

}  // namespace retint
