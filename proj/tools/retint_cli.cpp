// retint: return-interval analysis of daily volume series.
//
//   retint intervals   --data-dir DIR --out OUT [--thresholds 2,2.5,3]
//   retint conditional --synth-kind fgn --out OUT [--octiles quantile] [--shuffled]
//   retint dfa         --data-dir DIR --out OUT
//   retint factors     --data-dir DIR --out OUT
//   retint synth       --kind cascade --n-stocks 50 --length 5000 --seed 7 --out DIR
//
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 nothing produced.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "retint/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNothing = 4;

struct CommonFlags {
  std::string data_dir;
  std::string synth_kind;
  std::size_t synth_n_stocks = 100;
  std::size_t synth_length = 5000;
  double synth_hurst = 0.8;
  double synth_cascade_sigma = 0.4;
  std::string series = "volume";
  std::vector<double> thresholds = retint::kDefaultThresholds;
  std::uint64_t seed = 0;
  std::string octiles = "geometric";
  int bins_per_decade = retint::kDefaultBinsPerDecade;
  double tail_start = retint::kDefaultTailStart;
  std::size_t factor_bins = 0;
  std::string out;
  unsigned jobs = retint::default_jobs();
  std::size_t min_lifetime = retint::kDefaultMinLifetime;
  bool strict = false;
  bool shuffled = false;
  bool dump_intervals = false;
  bool dump_dfa = false;
  int dfa_order = 1;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  auto* dd = sub->add_option("--data-dir", f.data_dir, "Directory of <TICKER>.csv files");
  auto* sk = sub->add_option("--synth-kind", f.synth_kind, "Generate a synthetic corpus: iid, fgn or cascade");
  dd->excludes(sk);
  sub->add_option("--synth-n-stocks", f.synth_n_stocks, "Synthetic corpus size")->capture_default_str();
  sub->add_option("--synth-length", f.synth_length, "Synthetic lifetime in days")->capture_default_str();
  sub->add_option("--synth-hurst", f.synth_hurst, "Hurst exponent of fgn stocks")->capture_default_str();
  sub->add_option("--synth-cascade-sigma", f.synth_cascade_sigma, "Log-normal width of cascade multipliers")
      ->capture_default_str();
  sub->add_option("--series", f.series, "volume or price")->capture_default_str();
  sub->add_option("--thresholds", f.thresholds, "Comma-separated thresholds q")->delimiter(',');
  sub->add_option("--seed", f.seed, "Seed for shuffles and synthetic data")->capture_default_str();
  sub->add_option("--octiles", f.octiles, "geometric or quantile")->capture_default_str();
  sub->add_option("--bins-per-decade", f.bins_per_decade, "Log-binning resolution")->capture_default_str();
  sub->add_option("--tail-start", f.tail_start, "x_min of the tail fits")->capture_default_str();
  sub->add_option("--factor-bins", f.factor_bins, "Bins per factor (0 = per-factor default)");
  sub->add_option("--out", f.out, "Output directory")->required();
  sub->add_option("--jobs", f.jobs, "Worker threads")->capture_default_str();
  sub->add_option("--min-lifetime", f.min_lifetime, "Minimum lifetime in trading days")->capture_default_str();
  sub->add_flag("--strict", f.strict, "Reject a stock on any malformed or duplicated row");
  sub->add_flag("--shuffled", f.shuffled, "Shuffle each volatility series first (conditional, dfa)");
  sub->add_flag("--dump-intervals", f.dump_intervals, "Write intervals.tsv (intervals)");
  sub->add_flag("--dump-dfa", f.dump_dfa, "Write per-stock F(n) tables (dfa)");
  sub->add_option("--dfa-order", f.dfa_order, "Detrending polynomial order")->capture_default_str();
}

retint::GeneratorKind parse_kind(const std::string& s) {
  auto k = retint::parse_generator_kind(s);
  if (!k) throw retint::ParameterError("unknown generator kind '" + s + "'");
  return *k;
}

retint::RunConfig to_config(const CommonFlags& f) {
  retint::RunConfig c;
  if (!f.data_dir.empty()) c.data_dir = f.data_dir;
  if (!f.synth_kind.empty()) {
    c.synth = retint::SynthSource{parse_kind(f.synth_kind), f.synth_n_stocks, f.synth_length, f.synth_hurst,
                                  f.synth_cascade_sigma};
  }
  if (f.series == "volume") {
    c.series = retint::SeriesKind::volume;
  } else if (f.series == "price") {
    c.series = retint::SeriesKind::price;
  } else {
    throw retint::ParameterError("--series must be volume or price");
  }
  if (f.octiles == "geometric") {
    c.octiles = retint::OctileMode::geometric;
  } else if (f.octiles == "quantile") {
    c.octiles = retint::OctileMode::quantile;
  } else {
    throw retint::ParameterError("--octiles must be geometric or quantile");
  }
  c.thresholds = f.thresholds;
  c.seed = f.seed;
  c.bins_per_decade = f.bins_per_decade;
  c.tail_start = f.tail_start;
  if (f.factor_bins > 0) c.factor_bins = f.factor_bins;
  c.out = f.out;
  c.jobs = f.jobs == 0 ? 1 : f.jobs;
  c.min_lifetime = f.min_lifetime;
  c.strict = f.strict;
  c.shuffled = f.shuffled;
  c.dump_intervals = f.dump_intervals;
  c.dump_dfa = f.dump_dfa;
  c.dfa_order = f.dfa_order;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Return-interval statistics of daily trading volume"};
  app.require_subcommand(1);

  CommonFlags common;
  auto* intervals = app.add_subcommand("intervals", "Raw, scaled and shuffled interval PDFs per threshold");
  auto* conditional = app.add_subcommand("conditional", "Conditional PDFs by octile of the preceding interval");
  auto* dfa = app.add_subcommand("dfa", "DFA exponent per stock, grouped by factor bins");
  auto* factors = app.add_subcommand("factors", "Tail exponent by factor bin, factor scatter and correlations");
  for (auto* s : {intervals, conditional, dfa, factors}) add_common(s, common);

  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus and its planted parameters");
  std::string kind = "iid";
  retint::SynthSource src;
  std::uint64_t seed = 0;
  std::string out;
  unsigned jobs = retint::default_jobs();
  synth->add_option("--kind", kind, "iid, fgn or cascade")->capture_default_str();
  synth->add_option("--n-stocks", src.n_stocks, "Number of stocks")->capture_default_str();
  synth->add_option("--length", src.length, "Lifetime in days")->capture_default_str();
  synth->add_option("--hurst", src.hurst, "Hurst exponent of fgn stocks")->capture_default_str();
  synth->add_option("--cascade-sigma", src.cascade_sigma, "Log-normal width of cascade multipliers")
      ->capture_default_str();
  synth->add_option("--seed", seed, "Master seed")->capture_default_str();
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_option("--jobs", jobs, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (synth->parsed()) {
      src.kind = parse_kind(kind);
      retint::cmd_synth(src, seed, out, jobs == 0 ? 1 : jobs);
    } else {
      const auto cfg = to_config(common);
      if (intervals->parsed()) retint::cmd_intervals(cfg);
      if (conditional->parsed()) retint::cmd_conditional(cfg);
      if (dfa->parsed()) retint::cmd_dfa(cfg);
      if (factors->parsed()) retint::cmd_factors(cfg);
    }
  } catch (const retint::ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const retint::NothingProduced& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNothing;
  } catch (const retint::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
