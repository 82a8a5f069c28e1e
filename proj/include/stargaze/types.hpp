#pragma once

#include "stargaze/time.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stargaze {

/// Basic repository metadata as served by the hosting API.
struct RepoMeta {
  std::string full_name; // "owner/name"
  Timestamp created_at = 0;
  std::optional<std::string> primary_language;
  std::int64_t total_stars = 0;

  friend bool operator==(const RepoMeta&, const RepoMeta&) = default;
};

/// One starring action.
struct StarEvent {
  std::string repo;
  Timestamp starred_at = 0;
  std::string user;

  friend bool operator==(const StarEvent&, const StarEvent&) = default;
};

/// Full star history of one repository, as fetched.
/// complete == false exactly when the page cap cut the history short.
struct FetchRecord {
  RepoMeta meta;
  std::vector<StarEvent> events; // ascending by starred_at
  bool complete = true;
  int pages_fetched = 0;
  int clamped_events = 0; // events observed before created_at, clamped

  friend bool operator==(const FetchRecord&, const FetchRecord&) = default;
};

/// Weekly cumulative star counts since repository creation.
/// values[w] counts events with starred_at < created_at + (w+1) weeks.
struct StarSeries {
  std::string repo;
  Timestamp created_at = 0;
  std::optional<std::string> language;
  std::vector<std::int64_t> values;

  std::size_t weeks() const { return values.size(); }

  friend bool operator==(const StarSeries&, const StarSeries&) = default;
};

/// Cleaned collection of series sharing one cutoff and analysis window.
struct Dataset {
  std::vector<StarSeries> series;
  Timestamp cutoff = 0;
  int window = 52;
};

/// Cumulative stars gained inside the analysis window.
/// gained[i] is the gain since the window start, measured at window week i+1.
struct WindowedSeries {
  std::string repo;
  std::vector<double> gained;

  friend bool operator==(const WindowedSeries&, const WindowedSeries&) = default;
};

/// One held-out prediction with its relative squared error.
struct Prediction {
  std::string repo;
  double predicted = 0.0;
  double actual = 0.0;
  double rse = 0.0;
};

} // namespace stargaze
