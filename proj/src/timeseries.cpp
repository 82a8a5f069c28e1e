#include "stargaze/timeseries.hpp"

#include "stargaze/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stargaze::timeseries {

using nlohmann::json;

StarSeries build_weekly_series(const FetchRecord& record, Timestamp cutoff) {
  const Timestamp created = record.meta.created_at;
  if (cutoff < created)
    raise(errc::empty_range, record.meta.full_name + ": cutoff precedes creation");

  const std::size_t weeks =
      static_cast<std::size_t>((cutoff - created) / kSecondsPerWeek) + 1;
  std::vector<std::int64_t> per_week(weeks, 0);
  for (const StarEvent& ev : record.events) {
    // Pre-creation anomalies land in week 0, anything else in its 7-day bin.
    const Timestamp at = std::max(ev.starred_at, created);
    const std::size_t w = static_cast<std::size_t>((at - created) / kSecondsPerWeek);
    if (w < weeks) ++per_week[w];
  }
  std::int64_t running = 0;
  for (auto& v : per_week) {
    running += v;
    v = running;
  }
  return StarSeries{record.meta.full_name, created, record.meta.primary_language,
                    std::move(per_week)};
}

const char* exclusion_rule_name(ExclusionRule rule) noexcept {
  switch (rule) {
    case ExclusionRule::incomplete_history: return "incomplete-history";
    case ExclusionRule::no_language: return "no-language";
    case ExclusionRule::too_short: return "too-short";
  }
  return "unknown";
}

FilterResult filter_dataset(const std::vector<FilterCandidate>& candidates,
                            Timestamp cutoff, int window) {
  if (window < 1) raise(errc::invalid_argument, "window must be positive");
  FilterResult out;
  out.dataset.cutoff = cutoff;
  out.dataset.window = window;
  for (const FilterCandidate& c : candidates) {
    std::optional<ExclusionRule> rule;
    if (!c.complete)
      rule = ExclusionRule::incomplete_history;
    else if (!c.meta.primary_language || c.meta.primary_language->empty())
      rule = ExclusionRule::no_language;
    else if (c.series.weeks() < static_cast<std::size_t>(window))
      rule = ExclusionRule::too_short;
    if (rule) {
      out.excluded.push_back({c.meta.full_name, *rule});
      ++out.rule_counts[static_cast<int>(*rule)];
    } else {
      out.dataset.series.push_back(c.series);
    }
  }
  return out;
}

WindowedSeries window_last(const StarSeries& series, int window) {
  if (window < 1) raise(errc::invalid_argument, "window must be positive");
  const std::size_t weeks = series.weeks();
  const std::size_t w = static_cast<std::size_t>(window);
  if (weeks < w)
    raise(errc::too_short, series.repo + ": series shorter than window");
  const std::size_t start = weeks - w;
  const std::int64_t base = start == 0 ? 0 : series.values[start - 1];
  std::vector<double> gained(w);
  for (std::size_t i = 0; i < w; ++i)
    gained[i] = static_cast<double>(series.values[start + i] - base);
  return WindowedSeries{series.repo, std::move(gained)};
}

std::vector<WindowedSeries> window_dataset(const Dataset& dataset) {
  std::vector<WindowedSeries> out;
  out.reserve(dataset.series.size());
  for (const StarSeries& s : dataset.series)
    out.push_back(window_last(s, dataset.window));
  return out;
}

namespace {

constexpr int kDatasetFormatVersion = 1;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(line.substr(pos));
      return parts;
    }
    parts.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::int64_t parse_count(const std::string& text, const std::string& where) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size())
    raise(errc::format_version_mismatch, where + ": bad integer '" + text + "'");
  return v;
}

} // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io, "cannot write " + path);
  json header = {{"format", "stargaze-dataset"},
                 {"version", kDatasetFormatVersion},
                 {"cutoff", format_iso8601(dataset.cutoff)},
                 {"window", dataset.window}};
  out << header.dump() << '\n';
  for (const StarSeries& s : dataset.series) {
    out << s.repo << '\t' << format_iso8601(s.created_at) << '\t'
        << (s.language ? *s.language : "") << '\t';
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i) out << ',';
      out << s.values[i];
    }
    out << '\n';
  }
  if (!out) raise(errc::io, "short write to " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    raise(errc::format_version_mismatch, path + ": missing header");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "stargaze-dataset")
    raise(errc::format_version_mismatch, path + ": not a dataset file");
  if (header.value("version", -1) != kDatasetFormatVersion)
    raise(errc::format_version_mismatch, path + ": unsupported version");
  Dataset dataset;
  dataset.cutoff = parse_iso8601(header.at("cutoff").get<std::string>());
  dataset.window = header.at("window").get<int>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, '\t');
    if (parts.size() != 4)
      raise(errc::format_version_mismatch, path + ": bad row '" + line + "'");
    StarSeries s;
    s.repo = parts[0];
    s.created_at = parse_iso8601(parts[1]);
    if (!parts[2].empty()) s.language = parts[2];
    for (const std::string& v : split(parts[3], ','))
      s.values.push_back(parse_count(v, path));
    dataset.series.push_back(std::move(s));
  }
  return dataset;
}

} // namespace stargaze::timeseries
