#pragma once

#include "stargaze/types.hpp"

#include <string>
#include <vector>

namespace stargaze::timeseries {

/// Converts a raw fetch record into weekly cumulative counts.
///
/// Week bins are anchored at the repository creation instant (rolling 7-day
/// bins, not calendar weeks) and the trailing partial week is kept as a
/// normal index, so the series length is
///   floor((cutoff - created_at) / 7d) + 1.
/// Events stamped before creation count into week 0.
/// Throws errc::empty_range when cutoff precedes creation.
StarSeries build_weekly_series(const FetchRecord& record, Timestamp cutoff);

enum class ExclusionRule { incomplete_history, no_language, too_short };

const char* exclusion_rule_name(ExclusionRule rule) noexcept;

struct Exclusion {
  std::string repo;
  ExclusionRule rule;
};

struct FilterResult {
  Dataset dataset;
  std::vector<Exclusion> excluded;
  // Per-rule counts, indexed by ExclusionRule. Rules can overlap on one
  // repository; only the first matching rule (in enum order) is charged.
  std::size_t rule_counts[3] = {0, 0, 0};
};

struct FilterCandidate {
  RepoMeta meta;
  StarSeries series;
  bool complete = true;
};

/// Applies the dataset-cleaning rules: drop capped histories, drop repos
/// without a primary language, drop series shorter than the window.
FilterResult filter_dataset(const std::vector<FilterCandidate>& candidates,
                            Timestamp cutoff, int window);

/// Cumulative stars gained over the trailing `window` weeks.
/// gained[i] = values[weeks-window+i] - values[weeks-window-1], with a zero
/// base when the window spans the whole series. Throws errc::too_short.
WindowedSeries window_last(const StarSeries& series, int window);

/// Windows every series in the dataset (dataset invariants guarantee this
/// cannot fail after filtering).
std::vector<WindowedSeries> window_dataset(const Dataset& dataset);

/// Line-delimited dataset persistence; one header line carrying the format
/// version, cutoff and window, then one row per series.
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

} // namespace stargaze::timeseries
