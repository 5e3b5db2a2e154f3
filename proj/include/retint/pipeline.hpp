#pragma once

// Corpus-to-files pipelines behind the command-line tool. Every command
// writes plot-ready TSV files and one report.json into the output directory.
// Nothing written depends on the number of worker threads.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "retint/retint.hpp"

namespace retint {

using json = nlohmann::json;

/// Synthetic data source used in place of a data directory.
struct SynthSource {
  GeneratorKind kind = GeneratorKind::iid;
  std::size_t n_stocks = 100;
  std::size_t length = 5000;
  double hurst = 0.8;
  double cascade_sigma = 0.4;
};

struct RunConfig {
  std::optional<std::filesystem::path> data_dir;
  std::optional<SynthSource> synth;
  SeriesKind series = SeriesKind::volume;
  std::vector<double> thresholds = kDefaultThresholds;
  std::uint64_t seed = 0;
  OctileMode octiles = OctileMode::geometric;
  int bins_per_decade = kDefaultBinsPerDecade;
  double tail_start = kDefaultTailStart;
  /// Overrides the per-factor default bin count.
  std::optional<std::size_t> factor_bins;
  std::filesystem::path out;
  unsigned jobs = 1;
  std::size_t min_lifetime = kDefaultMinLifetime;
  bool strict = false;
  /// Run conditional and DFA on shuffled volatility series.
  bool shuffled = false;
  bool dump_intervals = false;
  bool dump_dfa = false;
  int dfa_order = 1;
};

/// Raised when a command produced nothing usable at all.
class NothingProduced : public InsufficientData {
 public:
  using InsufficientData::InsufficientData;
};

inline void validate(const RunConfig& c) {
  if (c.data_dir.has_value() == c.synth.has_value()) {
    throw ParameterError("exactly one of --data-dir or a synthetic source must be given");
  }
  if (c.thresholds.empty()) throw ParameterError("at least one threshold is required");
  for (double q : c.thresholds) {
    if (!(q > 0.0) || !std::isfinite(q)) throw ParameterError("thresholds must be positive");
  }
  if (c.bins_per_decade < 1) throw ParameterError("bins per decade must be >= 1");
  if (!(c.tail_start > 0.0)) throw ParameterError("tail start must be positive");
  if (c.factor_bins && *c.factor_bins < 1) throw ParameterError("factor bins must be >= 1");
  if (c.out.empty()) throw ParameterError("an output directory is required");
  if (c.dfa_order < 1) throw ParameterError("DFA order must be >= 1");
  if (c.synth) {
    if (c.synth->n_stocks < 1) throw ParameterError("synthetic corpus needs at least one stock");
    if (c.synth->length < 3) throw ParameterError("synthetic length must be >= 3");
    if (c.synth->kind == GeneratorKind::fgn && !(c.synth->hurst > 0.0 && c.synth->hurst < 1.0)) {
      throw ParameterError("Hurst exponent must lie in (0, 1)");
    }
  }
}

/// "2.0", "2.5", "3.25": at least one decimal, otherwise shortest round trip.
inline std::string format_q(double q) {
  if (q == std::floor(q) && std::abs(q) < 1e15) {
    std::ostringstream os;
    os << static_cast<long long>(q) << ".0";
    return os.str();
  }
  return format_double(q);
}

namespace detail {

inline void ensure_dir(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec || !std::filesystem::is_directory(p)) {
    throw ParameterError("cannot create output directory " + p.string());
  }
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ParameterError("cannot write " + p.string());
  return os;
}

inline std::string num(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  return format_double(v);
}

inline void write_pdf_tsv(const std::filesystem::path& p, const BinnedPdf& pdf) {
  auto os = open_out(p);
  os << "bin_center\tdensity\tcount\n";
  for (std::size_t i = 0; i < pdf.bins(); ++i) {
    os << num(pdf.center(i)) << '\t' << num(pdf.densities[i]) << '\t' << pdf.counts[i] << '\n';
  }
}

inline void write_json(const std::filesystem::path& p, const json& j) {
  auto os = open_out(p);
  os << j.dump(2) << '\n';
}

inline json opt_num(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

inline json tail_json(const TailFit& f) {
  return {{"gamma", f.gamma}, {"stderr", f.std_error}, {"r2", f.r_squared},
          {"x_min", f.x_min}, {"x_max", f.x_max}, {"n_tail", f.n_tail}};
}

inline json exp_json(const ExpFit& f) {
  return {{"a", f.a}, {"stderr", f.std_error}, {"r2", f.r_squared}, {"x_min", f.x_min}, {"n_bins", f.n_bins}};
}

template <class F>
json try_fit(F&& f) {
  try {
    return f();
  } catch (const InsufficientData& e) {
    return {{"error", e.what()}};
  } catch (const FitShapeError& e) {
    return {{"error", e.what()}};
  }
}

}  // namespace detail

struct LoadedInput {
  Corpus corpus;
  json summary;
  std::vector<StockPlan> planted;  // synthetic sources only
};

inline UniformCorpusSpec uniform_spec(const SynthSource& s, std::uint64_t seed) {
  UniformCorpusSpec u;
  u.kind = s.kind;
  u.n_stocks = s.n_stocks;
  u.lifetime = s.length;
  u.seed = seed;
  u.hurst = s.hurst;
  u.cascade_sigma = s.cascade_sigma;
  return u;
}

/// Loads or generates the corpus named by the config. An empty corpus is a
/// data error.
inline LoadedInput load_input(const RunConfig& cfg) {
  LoadedInput in;
  if (cfg.data_dir) {
    LoadOptions lo;
    lo.min_lifetime = cfg.min_lifetime;
    lo.strict = cfg.strict;
    lo.jobs = cfg.jobs;
    auto res = load_corpus(*cfg.data_dir, lo);
    const auto& s = res.summary;
    in.summary = {{"source", "directory"},
                  {"files_total", s.files_total},
                  {"accepted", s.accepted},
                  {"rejected_short", s.rejected_short},
                  {"rejected_invalid", s.rejected_invalid},
                  {"rows_total", s.rows_total},
                  {"rows_malformed", s.rows_malformed},
                  {"rows_duplicate", s.rows_duplicate},
                  {"rejected_tickers", s.rejected_tickers},
                  {"min_lifetime", cfg.min_lifetime}};
    in.corpus = std::move(res.corpus);
  } else {
    auto sc = synth_uniform_corpus(uniform_spec(*cfg.synth, cfg.seed), cfg.jobs);
    in.summary = {{"source", "synthetic"},
                  {"kind", to_string(cfg.synth->kind)},
                  {"n_stocks", cfg.synth->n_stocks},
                  {"length", cfg.synth->length},
                  {"min_lifetime", cfg.min_lifetime}};
    in.corpus = filter_lifetime(sc.corpus, cfg.min_lifetime);
    in.planted = std::move(sc.planted);
    in.summary["accepted"] = in.corpus.stocks.size();
  }
  if (in.corpus.stocks.empty()) throw LoadError("no stock passed ingestion");
  return in;
}

inline json config_json(const RunConfig& cfg) {
  return {{"series", to_string(cfg.series)},
          {"thresholds", cfg.thresholds},
          {"seed", cfg.seed},
          {"octiles", to_string(cfg.octiles)},
          {"bins_per_decade", cfg.bins_per_decade},
          {"tail_start", cfg.tail_start},
          {"shuffled", cfg.shuffled},
          {"dfa_order", cfg.dfa_order}};
}

/// Volatility of every stock, shuffled per stock when requested. Each
/// stock's permutation is seeded from the run seed and its ticker only.
inline std::vector<StockVolatility> prepared_volatility(const Corpus& corpus, SeriesKind kind,
                                                        std::uint64_t seed, bool shuffled, unsigned jobs) {
  auto vols = corpus_volatility(corpus, kind, jobs);
  if (shuffled) {
    for (auto& v : vols) {
      if (v.nu) v.nu = shuffle_control(*v.nu, derive_seed(seed, v.ticker));
    }
  }
  return vols;
}

inline json volatility_json(const std::vector<StockVolatility>& vols) {
  std::size_t degenerate = 0, dropped = 0;
  std::vector<std::string> degenerate_tickers;
  for (const auto& v : vols) {
    dropped += v.dropped;
    if (v.degenerate) {
      ++degenerate;
      degenerate_tickers.push_back(v.ticker);
    }
  }
  return {{"stocks", vols.size()},
          {"degenerate", degenerate},
          {"degenerate_tickers", degenerate_tickers},
          {"dropped_returns", dropped}};
}

inline std::vector<TaggedIntervals> tagged_intervals(const std::vector<StockVolatility>& vols, double q) {
  std::vector<TaggedIntervals> out;
  for (const auto& v : vols) {
    if (v.nu) out.push_back({v.ticker, extract_intervals(*v.nu, q)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// intervals

namespace detail {

inline json pooled_fits(std::span<const double> scaled, const RunConfig& cfg, const BinnedPdf& pdf) {
  json j;
  const FitOptions fo{cfg.tail_start, kDefaultMinBinCount};
  j["power_law"] = try_fit([&] { return tail_json(fit_power_tail(pdf, fo)); });
  j["exponential"] = try_fit([&] { return exp_json(fit_exponential(pdf, fo)); });
  j["hill"] = try_fit([&]() -> json {
    const auto h = hill_estimator(scaled, cfg.tail_start);
    return {{"gamma", h.gamma}, {"stderr", h.std_error}, {"n_tail", h.n_tail}};
  });
  json sens = json::array();
  for (const auto& p : gamma_sensitivity(pdf, kDefaultSensitivityGrid, kDefaultMinBinCount)) {
    sens.push_back({{"x_min", p.x_min},
                    {"gamma", p.fit ? json(p.fit->gamma) : json(nullptr)},
                    {"r2", p.fit ? json(p.fit->r_squared) : json(nullptr)}});
  }
  j["gamma_sensitivity"] = sens;
  return j;
}

}  // namespace detail

inline void cmd_intervals(const RunConfig& cfg) {
  validate(cfg);
  detail::ensure_dir(cfg.out);
  const auto in = load_input(cfg);
  const auto vols = prepared_volatility(in.corpus, cfg.series, cfg.seed, false, cfg.jobs);
  const auto shuf = prepared_volatility(in.corpus, cfg.series, cfg.seed, true, cfg.jobs);

  json report;
  report["command"] = "intervals";
  report["config"] = config_json(cfg);
  report["load"] = in.summary;
  report["volatility"] = volatility_json(vols);
  json per_q = json::array();
  std::size_t produced = 0;
  std::ofstream dump;
  if (cfg.dump_intervals) {
    dump = detail::open_out(cfg.out / "intervals.tsv");
    dump << "ticker\tq\ttau\n";
  }

  for (double q : cfg.thresholds) {
    const auto qs = format_q(q);
    json jq{{"q", q}};
    const auto tagged = tagged_intervals(vols, q);
    const auto pooled = pool_scaled(tagged, q);
    jq["stocks_pooled"] = pooled.per_stock_means.size();
    jq["stocks_insufficient"] = pooled.stocks_skipped;
    jq["n_intervals"] = pooled.entries.size();
    if (cfg.dump_intervals) {
      for (const auto& t : tagged) {
        for (auto tau : t.intervals.taus) dump << t.ticker << '\t' << qs << '\t' << tau << '\n';
      }
    }
    if (pooled.entries.empty()) {
      jq["empty"] = true;
      per_q.push_back(jq);
      continue;
    }
    jq["empty"] = false;
    ++produced;

    std::vector<double> raw;
    for (const auto& t : tagged) {
      for (auto tau : t.intervals.taus) raw.push_back(static_cast<double>(tau));
    }
    const auto raw_pdf = log_bin(raw, cfg.bins_per_decade);
    detail::write_pdf_tsv(cfg.out / ("pdf_q" + qs + ".tsv"), raw_pdf);
    jq["mean_tau"] = stats::mean(raw);

    const auto scaled = pooled.scaled_values();
    const auto scaled_pdf = log_bin(scaled, cfg.bins_per_decade);
    detail::write_pdf_tsv(cfg.out / ("pdf_scaled_q" + qs + ".tsv"), scaled_pdf);
    jq["scaled"] = detail::pooled_fits(scaled, cfg, scaled_pdf);

    const auto spooled = pool_scaled(tagged_intervals(shuf, q), q);
    if (spooled.entries.empty()) {
      jq["shuffled"] = {{"empty", true}};
    } else {
      const auto sv = spooled.scaled_values();
      const auto spdf = log_bin(sv, cfg.bins_per_decade);
      detail::write_pdf_tsv(cfg.out / ("pdf_shuffled_q" + qs + ".tsv"), spdf);
      auto js = detail::pooled_fits(sv, cfg, spdf);
      js["empty"] = false;
      js["n_intervals"] = sv.size();
      js["ks_to_unshuffled"] = stats::ks_two_sample(scaled, sv);
      jq["shuffled"] = js;
    }
    per_q.push_back(jq);
  }
  report["thresholds"] = per_q;
  detail::write_json(cfg.out / "report.json", report);
  if (produced == 0) throw NothingProduced("no stock has two exceedances at any threshold");
}

// ---------------------------------------------------------------------------
// conditional

inline void cmd_conditional(const RunConfig& cfg) {
  validate(cfg);
  detail::ensure_dir(cfg.out);
  const auto in = load_input(cfg);
  const auto vols = prepared_volatility(in.corpus, cfg.series, cfg.seed, cfg.shuffled, cfg.jobs);

  json report;
  report["command"] = "conditional";
  report["config"] = config_json(cfg);
  report["load"] = in.summary;
  report["volatility"] = volatility_json(vols);
  json per_q = json::array();
  std::size_t produced = 0;

  for (double q : cfg.thresholds) {
    const auto qs = format_q(q);
    json jq{{"q", q}};
    const auto pooled = pool_scaled(tagged_intervals(vols, q), q);
    const auto pairs = pooled_pairs(pooled);
    jq["n_pairs"] = pairs.size();
    if (pairs.empty()) {
      jq["empty"] = true;
      per_q.push_back(jq);
      continue;
    }
    jq["empty"] = false;
    ++produced;

    const auto part = make_partition(cfg.octiles, pairs);
    jq["boundaries"] = json::array();
    for (double b : part.boundaries) jq["boundaries"].push_back(std::isfinite(b) ? json(b) : json("inf"));

    // One set of edges for all octiles so the curves are directly comparable.
    std::vector<double> next;
    next.reserve(pairs.size());
    for (const auto& p : pairs) next.push_back(p.next);
    const auto edges = log_bin(next, cfg.bins_per_decade).edges;

    json octs = json::array();
    for (int k = 1; k <= static_cast<int>(kOctiles); ++k) {
      const auto c = conditional_pdf(pairs, part, k, edges);
      detail::write_pdf_tsv(cfg.out / ("cond_q" + qs + "_Q" + std::to_string(k) + ".tsv"), c.pdf);
      octs.push_back({{"octile", k},
                      {"lower", c.lower},
                      {"upper", std::isfinite(c.upper) ? json(c.upper) : json("inf")},
                      {"n_pairs", c.n_pairs},
                      {"low_statistics", c.low_statistics}});
    }
    jq["octiles"] = octs;

    const auto mem = memory_summary(pairs, part);
    json rows = json::array();
    for (const auto& r : mem.rows) {
      rows.push_back({{"octile", r.octile}, {"count", r.count}, {"mean_scaled_tau", detail::opt_num(r.mean_scaled_tau)}});
    }
    jq["memory_summary"] = {{"rows", rows}, {"spearman", detail::opt_num(mem.spearman)}};
    per_q.push_back(jq);
  }
  report["thresholds"] = per_q;
  detail::write_json(cfg.out / "report.json", report);
  if (produced == 0) throw NothingProduced("no interval pairs at any threshold");
}

// ---------------------------------------------------------------------------
// factors and dfa

namespace detail {

inline std::optional<FactorBinning> try_binning(std::span<const FactorVector> fv, Factor f,
                                                std::optional<std::size_t> bins, json& err) {
  try {
    return bin_stocks(fv, f, default_factor_edges(fv, f, bins));
  } catch (const InsufficientData& e) {
    err = e.what();
  } catch (const ParameterError& e) {
    err = e.what();
  }
  return std::nullopt;
}

inline json binning_json(const FactorBinning& b) {
  return {{"edges", b.edges}, {"unbinned", b.unbinned}, {"undefined", b.undefined}};
}

}  // namespace detail

inline void cmd_dfa(const RunConfig& cfg) {
  validate(cfg);
  detail::ensure_dir(cfg.out);
  const auto in = load_input(cfg);
  const auto fv = compute_factors(in.corpus);

  json report;
  report["command"] = "dfa";
  report["config"] = config_json(cfg);
  report["load"] = in.summary;

  std::map<SeriesKind, std::map<std::string, std::optional<double>>> alphas;
  json series_j;
  std::size_t defined = 0;
  for (auto kind : {SeriesKind::volume, SeriesKind::price}) {
    const auto vols = prepared_volatility(in.corpus, kind, cfg.seed, cfg.shuffled, cfg.jobs);
    auto a = stock_alphas(vols, cfg.dfa_order, cfg.jobs);
    std::vector<double> vals;
    std::vector<std::string> flagged;
    json per_stock = json::object();
    for (const auto& [t, v] : a) {
      per_stock[t] = detail::opt_num(v);
      if (v) {
        vals.push_back(*v);
        if (*v > 1.0) flagged.push_back(t);
      }
    }
    defined += vals.size();
    json js{{"volatility", volatility_json(vols)},
            {"n_alpha", vals.size()},
            {"alpha_above_one", flagged},
            {"alpha", per_stock}};
    if (!vals.empty()) {
      js["mean_alpha"] = stats::mean(vals);
      js["std_alpha"] = stats::stddev(vals);
    }
    series_j[std::string(to_string(kind))] = js;

    if (cfg.dump_dfa) {
      const auto dir = cfg.out / ("dfa_" + std::string(to_string(kind)));
      detail::ensure_dir(dir);
      for (const auto& v : vols) {
        if (!v.nu) continue;
        try {
          const auto c = dfa(v.nu->values, DfaOptions{cfg.dfa_order, {}, std::nullopt});
          auto os = detail::open_out(dir / (v.ticker + ".tsv"));
          os << "n\tF\n";
          for (std::size_t i = 0; i < c.window_sizes.size(); ++i) {
            os << c.window_sizes[i] << '\t' << detail::num(c.fluctuations[i]) << '\n';
          }
        } catch (const DegenerateInput&) {
        }
      }
    }
    alphas[kind] = std::move(a);
  }
  report["series"] = series_j;

  json by_factor;
  for (auto f : kAllFactors) {
    json err;
    const auto b = detail::try_binning(fv, f, cfg.factor_bins, err);
    const auto name = std::string(to_string(f));
    if (!b) {
      by_factor[name] = {{"error", err}};
      continue;
    }
    auto os = detail::open_out(cfg.out / ("dfa_alpha_by_" + name + ".tsv"));
    os << "series\tbin\tlo\thi\tcount\tmean_alpha\tstd_alpha\n";
    json jf = detail::binning_json(*b);
    for (auto kind : {SeriesKind::volume, SeriesKind::price}) {
      json rows = json::array();
      for (const auto& r : alpha_by_bins(*b, alphas[kind])) {
        os << to_string(kind) << '\t' << r.bin << '\t' << detail::num(r.lo) << '\t' << detail::num(r.hi) << '\t'
           << r.count << '\t' << (r.mean_alpha ? detail::num(*r.mean_alpha) : "nan") << '\t'
           << (r.std_alpha ? detail::num(*r.std_alpha) : "nan") << '\n';
        rows.push_back({{"bin", r.bin},
                        {"lo", r.lo},
                        {"hi", r.hi},
                        {"count", r.count},
                        {"mean_alpha", detail::opt_num(r.mean_alpha)},
                        {"std_alpha", detail::opt_num(r.std_alpha)}});
      }
      jf[std::string(to_string(kind))] = rows;
    }
    by_factor[name] = jf;
  }
  report["alpha_by_factor"] = by_factor;
  detail::write_json(cfg.out / "report.json", report);
  if (defined == 0) throw NothingProduced("no stock is long enough for DFA");
}

inline void cmd_factors(const RunConfig& cfg) {
  validate(cfg);
  detail::ensure_dir(cfg.out);
  const auto in = load_input(cfg);
  const auto fv = compute_factors(in.corpus);
  const auto vols = prepared_volatility(in.corpus, cfg.series, cfg.seed, false, cfg.jobs);

  json report;
  report["command"] = "factors";
  report["config"] = config_json(cfg);
  report["load"] = in.summary;
  report["volatility"] = volatility_json(vols);

  json jfac = json::array();
  for (const auto& f : fv) {
    jfac.push_back({{"ticker", f.ticker},
                    {"lifetime", f.lifetime},
                    {"mean_capitalization", detail::opt_num(f.mean_capitalization)},
                    {"mean_volume", f.mean_volume},
                    {"mean_trading_value", f.mean_trading_value}});
  }
  report["factors"] = jfac;

  std::vector<std::map<std::string, IntervalSeries>> per_q;
  for (double q : cfg.thresholds) per_q.push_back(corpus_intervals(vols, q));

  std::size_t intervals_seen = 0;
  for (const auto& m : per_q) {
    for (const auto& [t, iv] : m) intervals_seen += iv.taus.size();
  }
  json gj;
  const FitOptions fo{cfg.tail_start, kDefaultMinBinCount};
  for (auto f : kAllFactors) {
    json err;
    const auto b = detail::try_binning(fv, f, cfg.factor_bins, err);
    const auto name = std::string(to_string(f));
    if (!b) {
      gj[name] = {{"error", err}};
      continue;
    }
    auto os = detail::open_out(cfg.out / ("gamma_by_" + name + ".tsv"));
    os << "q\tbin\tlo\thi\tn_stocks\tn_intervals\tgamma\tstderr\tr2\tn_tail\n";
    json jf = detail::binning_json(*b);
    json jrows = json::array();
    for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
      const double q = cfg.thresholds[k];
      for (const auto& r : gamma_by_bins(*b, per_q[k], fo, cfg.bins_per_decade)) {
        os << format_q(q) << '\t' << r.bin << '\t' << detail::num(r.lo) << '\t' << detail::num(r.hi) << '\t'
           << r.n_stocks << '\t' << r.n_intervals << '\t';
        if (r.fit) {
          os << detail::num(r.fit->gamma) << '\t' << detail::num(r.fit->std_error) << '\t'
             << detail::num(r.fit->r_squared) << '\t' << r.fit->n_tail << '\n';
        } else {
          os << "nan\tnan\tnan\t0\n";
        }
        jrows.push_back({{"q", q},
                         {"bin", r.bin},
                         {"lo", r.lo},
                         {"hi", r.hi},
                         {"n_stocks", r.n_stocks},
                         {"n_pooled_stocks", r.n_pooled_stocks},
                         {"n_intervals", r.n_intervals},
                         {"fit", r.fit ? detail::tail_json(*r.fit) : json(nullptr)}});
      }
    }
    jf["rows"] = jrows;
    gj[name] = jf;
  }
  report["gamma_by_factor"] = gj;

  try {
    const auto m = factor_correlations(fv);
    json raw, logj;
    for (std::size_t i = 0; i < CorrelationMatrix::kN; ++i) {
      for (std::size_t j = 0; j < CorrelationMatrix::kN; ++j) {
        const auto a = std::string(to_string(m.factors[i]));
        const auto b = std::string(to_string(m.factors[j]));
        raw[a][b] = detail::opt_num(m.raw[i][j]);
        logj[a][b] = detail::opt_num(m.log_space[i][j]);
      }
    }
    report["correlations"] = {{"n_stocks", m.n_stocks}, {"raw", raw}, {"log10_size", logj}};
  } catch (const InsufficientData& e) {
    report["correlations"] = {{"error", e.what()}};
  }

  for (const auto& [a, b] : kDefaultScatterPairs) {
    const auto an = std::string(to_string(a));
    const auto bn = std::string(to_string(b));
    auto os = detail::open_out(cfg.out / ("scatter_" + an + "_vs_" + bn + ".tsv"));
    os << "ticker\t" << an << '\t' << bn << '\n';
    for (const auto& f : fv) {
      const auto va = f.value(a), vb = f.value(b);
      if (va && vb) os << f.ticker << '\t' << detail::num(*va) << '\t' << detail::num(*vb) << '\n';
    }
  }

  detail::write_json(cfg.out / "report.json", report);
  if (intervals_seen == 0) throw NothingProduced("no stock has two exceedances at any threshold");
}

// ---------------------------------------------------------------------------
// synth

inline json planted_json(const std::vector<StockPlan>& plans) {
  json arr = json::array();
  for (const auto& p : plans) {
    json l{{"kind", to_string(p.latent.kind)}, {"seed", p.latent.seed}};
    if (p.latent.kind == GeneratorKind::fgn) l["hurst"] = p.latent.hurst;
    if (p.latent.kind == GeneratorKind::cascade) l["cascade_sigma"] = p.latent.cascade_sigma;
    arr.push_back({{"ticker", p.ticker},
                   {"lifetime", p.lifetime},
                   {"mean_volume", p.mean_volume},
                   {"price", p.price},
                   {"shares_outstanding", p.shares_outstanding ? json(*p.shares_outstanding) : json(nullptr)},
                   {"vol_of_vol", p.vol_of_vol},
                   {"max_log_step", p.max_log_step},
                   {"latent", l}});
  }
  return arr;
}

/// Writes a synthetic corpus in the CSV schema plus planted.json.
inline void cmd_synth(const SynthSource& src, std::uint64_t seed, const std::filesystem::path& out, unsigned jobs) {
  RunConfig probe;
  probe.synth = src;
  probe.out = out;
  validate(probe);
  detail::ensure_dir(out);
  const auto sc = synth_uniform_corpus(uniform_spec(src, seed), jobs);
  write_corpus(sc.corpus, out);
  json j{{"kind", to_string(src.kind)},
         {"n_stocks", src.n_stocks},
         {"length", src.length},
         {"seed", seed},
         {"stocks", planted_json(sc.planted)}};
  detail::write_json(out / "planted.json", j);
}

}  // namespace retint
