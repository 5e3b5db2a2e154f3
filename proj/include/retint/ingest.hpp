#pragma once

// Per-stock daily records and the CSV corpus loader.
//
// One file per ticker, `<TICKER>.csv`, header `date,volume,close,shares_outstanding`.
// Consecutive records are treated as successive trading days whatever the
// calendar gap between them.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "retint/error.hpp"
#include "retint/parallel.hpp"

namespace retint {

using Date = std::chrono::year_month_day;

struct DailyRecord {
  Date date;
  std::int64_t volume = 0;
  double close = 0.0;
  std::optional<std::int64_t> shares_outstanding;

  friend bool operator==(const DailyRecord&, const DailyRecord&) = default;
};

struct DailySeries {
  std::string ticker;
  std::vector<DailyRecord> records;

  std::size_t lifetime_days() const { return records.size(); }

  friend bool operator==(const DailySeries&, const DailySeries&) = default;
};

/// Immutable stock universe, ordered by ticker.
struct Corpus {
  std::vector<DailySeries> stocks;
  std::size_t min_lifetime = 0;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

inline constexpr std::size_t kDefaultMinLifetime = 350;
inline constexpr std::string_view kCsvHeader = "date,volume,close,shares_outstanding";

struct LoadOptions {
  std::size_t min_lifetime = kDefaultMinLifetime;
  /// Promote malformed rows and duplicate dates to errors.
  bool strict = false;
  unsigned jobs = 1;
};

struct LoadSummary {
  std::size_t files_total = 0;
  std::size_t accepted = 0;
  std::size_t rejected_short = 0;
  std::size_t rejected_invalid = 0;
  std::size_t rows_total = 0;
  std::size_t rows_malformed = 0;
  std::size_t rows_duplicate = 0;
  std::vector<std::string> rejected_tickers;

  std::size_t rejected() const { return rejected_short + rejected_invalid; }
};

struct LoadResult {
  Corpus corpus;
  LoadSummary summary;
};

// ---------------------------------------------------------------------------
// Dates

inline std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  auto num = [](std::string_view part, auto& out) {
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc{} && p == part.data() + part.size();
  };
  if (!num(s.substr(0, 4), y) || !num(s.substr(5, 2), m) || !num(s.substr(8, 2), d)) {
    return std::nullopt;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

inline std::string format_date(const Date& d) {
  char buf[16];
  const int y = static_cast<int>(d.year());
  const unsigned m = static_cast<unsigned>(d.month());
  const unsigned dd = static_cast<unsigned>(d.day());
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, dd);
  return buf;
}

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// ---------------------------------------------------------------------------
// CSV parsing

namespace detail {

inline std::string_view trim_cr(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_whole(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace detail

/// Parses one data row; empty on any schema violation.
inline std::optional<DailyRecord> parse_row(std::string_view line) {
  line = detail::trim_cr(line);
  std::string_view fields[4];
  std::size_t n = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (n == 4) return std::nullopt;
      fields[n++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (n != 4) return std::nullopt;

  DailyRecord r;
  auto date = parse_date(fields[0]);
  if (!date) return std::nullopt;
  r.date = *date;
  if (!detail::parse_whole(fields[1], r.volume) || r.volume < 0) return std::nullopt;
  if (!detail::parse_whole(fields[2], r.close) || !std::isfinite(r.close) || r.close <= 0.0) {
    return std::nullopt;
  }
  if (!fields[3].empty()) {
    std::int64_t shares = 0;
    if (!detail::parse_whole(fields[3], shares) || shares <= 0) return std::nullopt;
    r.shares_outstanding = shares;
  }
  return r;
}

struct SeriesParse {
  std::optional<DailySeries> series;  // empty when the ticker was rejected
  std::size_t rows = 0;
  std::size_t malformed = 0;
  std::size_t duplicates = 0;
};

/// Parses a whole ticker file. Rows are date-sorted; duplicate dates keep the
/// first occurrence unless strict, in which case the ticker is rejected.
/// A malformed row is skipped (strict: LoadError).
inline SeriesParse parse_series(std::string ticker, std::istream& in, bool strict) {
  SeriesParse out;
  std::string line;
  if (!std::getline(in, line) || detail::trim_cr(line) != kCsvHeader) {
    if (strict) throw LoadError(ticker + ": missing or unexpected CSV header");
    return out;
  }

  DailySeries s;
  s.ticker = std::move(ticker);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim_cr(line).empty()) continue;
    ++out.rows;
    auto rec = parse_row(line);
    if (!rec) {
      if (strict) {
        throw LoadError(s.ticker + ": malformed row at line " + std::to_string(line_no));
      }
      ++out.malformed;
      continue;
    }
    s.records.push_back(*rec);
  }

  std::stable_sort(s.records.begin(), s.records.end(),
                   [](const auto& a, const auto& b) { return a.date < b.date; });
  auto last = std::unique(s.records.begin(), s.records.end(),
                          [](const auto& a, const auto& b) { return a.date == b.date; });
  out.duplicates = static_cast<std::size_t>(s.records.end() - last);
  if (out.duplicates > 0 && strict) return out;
  s.records.erase(last, s.records.end());
  out.series = std::move(s);
  return out;
}

inline void write_series_csv(const DailySeries& s, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& r : s.records) {
    os << format_date(r.date) << ',' << r.volume << ',' << format_double(r.close) << ',';
    if (r.shares_outstanding) os << *r.shares_outstanding;
    os << '\n';
  }
}

/// Writes `<dir>/<TICKER>.csv` for every stock.
inline void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& s : corpus.stocks) {
    std::ofstream os(dir / (s.ticker + ".csv"), std::ios::binary);
    if (!os) throw LoadError("cannot write " + (dir / (s.ticker + ".csv")).string());
    write_series_csv(s, os);
  }
}

// ---------------------------------------------------------------------------
// Corpus loading

inline std::vector<std::filesystem::path> list_csv_files(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::exists(path, ec)) throw LoadError("data path does not exist: " + path.string());
  std::vector<fs::path> files;
  if (fs::is_regular_file(path, ec)) {
    files.push_back(path);
  } else if (fs::is_directory(path, ec)) {
    for (fs::directory_iterator it(path, ec), end; !ec && it != end; it.increment(ec)) {
      if (it->is_regular_file() && it->path().extension() == ".csv") files.push_back(it->path());
    }
    if (ec) throw LoadError("cannot list " + path.string() + ": " + ec.message());
  } else {
    throw LoadError("not a file or directory: " + path.string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline LoadResult load_corpus(const std::filesystem::path& path, const LoadOptions& opt = {}) {
  const auto files = list_csv_files(path);

  auto parsed = parallel_map(files.size(), opt.jobs, [&](std::size_t i) {
    std::ifstream in(files[i], std::ios::binary);
    if (!in) throw LoadError("cannot read " + files[i].string());
    return parse_series(files[i].stem().string(), in, opt.strict);
  });

  LoadResult res;
  res.corpus.min_lifetime = opt.min_lifetime;
  auto& sum = res.summary;
  sum.files_total = files.size();
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    auto& p = parsed[i];
    sum.rows_total += p.rows;
    sum.rows_malformed += p.malformed;
    sum.rows_duplicate += p.duplicates;
    if (!p.series) {
      ++sum.rejected_invalid;
      sum.rejected_tickers.push_back(files[i].stem().string());
    } else if (p.series->lifetime_days() < opt.min_lifetime) {
      ++sum.rejected_short;
      sum.rejected_tickers.push_back(p.series->ticker);
    } else {
      ++sum.accepted;
      res.corpus.stocks.push_back(std::move(*p.series));
    }
  }
  return res;
}

/// Keeps the stocks with lifetime >= min_lifetime.
inline Corpus filter_lifetime(const Corpus& c, std::size_t min_lifetime) {
  Corpus out;
  out.min_lifetime = min_lifetime;
  for (const auto& s : c.stocks) {
    if (s.lifetime_days() >= min_lifetime) out.stocks.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-stock lifetime averages

struct SeriesStats {
  std::size_t lifetime = 0;
  double mean_volume = 0.0;
  double mean_close = 0.0;
  /// Mean of close * volume.
  double mean_trading_value = 0.0;
  /// Mean of close * shares_outstanding over rows that carry shares; absent if none do.
  std::optional<double> mean_capitalization;
};

inline SeriesStats series_stats(const DailySeries& s) {
  if (s.records.empty()) throw DegenerateInput(s.ticker + ": empty series");
  SeriesStats st;
  st.lifetime = s.lifetime_days();
  double vol = 0.0, close = 0.0, value = 0.0, cap = 0.0;
  std::size_t cap_rows = 0;
  for (const auto& r : s.records) {
    const double v = static_cast<double>(r.volume);
    vol += v;
    close += r.close;
    value += r.close * v;
    if (r.shares_outstanding) {
      cap += r.close * static_cast<double>(*r.shares_outstanding);
      ++cap_rows;
    }
  }
  const double n = static_cast<double>(st.lifetime);
  st.mean_volume = vol / n;
  st.mean_close = close / n;
  st.mean_trading_value = value / n;
  if (cap_rows > 0) st.mean_capitalization = cap / static_cast<double>(cap_rows);
  return st;
}

}  // namespace retint
