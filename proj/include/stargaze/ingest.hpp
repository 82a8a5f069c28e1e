#pragma once

#include "stargaze/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace stargaze::ingest {

struct ClientConfig {
  std::string base_url;    // empty: $STARGAZE_API_URL or the public API
  std::string auth_token;  // empty: $STARGAZE_TOKEN or unauthenticated
  int page_size = 100;
  int page_cap = 400;
  int max_retries = 3;        // transport retries (exponential backoff)
  int retry_base_ms = 2000;   // first backoff delay
  int parallelism = 4;        // fetch_many concurrency bound
  bool read_env = true;       // resolve unset fields from the environment
};

/// HTTP client for the hosting API. Safe to share across threads; page
/// requests for a single repository are always sequential.
class Client {
public:
  explicit Client(ClientConfig config = {});
  ~Client();

  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  /// Current repository metadata. Validates the name ("owner/name") before
  /// any network call. Throws errc::not_found, errc::rate_limited,
  /// errc::transport.
  RepoMeta fetch_repo_meta(const std::string& full_name) const;

  /// Complete star history, paging until exhaustion or the page cap.
  /// A capped history is not an error: the record comes back with
  /// complete == false. Events are sorted and pre-creation timestamps are
  /// clamped to created_at (counted in clamped_events).
  FetchRecord fetch_star_events(const std::string& full_name) const;

  /// The n most-starred public repositories, stars non-increasing, no
  /// duplicates.
  std::vector<RepoMeta> search_top_repos(int n) const;

  /// Fetches several histories under the configured parallelism bound.
  /// Results keep input order.
  std::vector<FetchRecord> fetch_many(const std::vector<std::string>& names) const;

  const ClientConfig& config() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// True when the name looks like "owner/name" (exactly one separator,
/// non-empty parts).
bool valid_full_name(const std::string& full_name);

/// Line-delimited raw-event persistence: one JSON header line carrying the
/// format version and record fields, then one tab-separated line per event.
/// load(persist(r)) == r on every field.
void persist_fetch(const FetchRecord& record, const std::string& path);
FetchRecord load_fetch(const std::string& path);

} // namespace stargaze::ingest
