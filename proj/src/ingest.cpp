#include "stargaze/ingest.hpp"

#include "stargaze/error.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace stargaze::ingest {

using nlohmann::json;

bool valid_full_name(const std::string& full_name) {
  const std::size_t slash = full_name.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == full_name.size())
    return false;
  return full_name.find('/', slash + 1) == std::string::npos;
}

namespace {

constexpr int kEventsFormatVersion = 1;
constexpr long long kMaxRateLimitSleepSec = 3600;

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

RepoMeta parse_meta(const json& doc, const std::string& requested) {
  RepoMeta meta;
  meta.full_name = doc.value("full_name", requested);
  meta.created_at = parse_iso8601(doc.at("created_at").get<std::string>());
  if (doc.contains("language") && doc["language"].is_string())
    meta.primary_language = doc["language"].get<std::string>();
  meta.total_stars = doc.value("stargazers_count", 0LL);
  return meta;
}

} // namespace

struct Client::Impl {
  ClientConfig config;

  explicit Impl(ClientConfig cfg) : config(std::move(cfg)) {
    if (config.read_env) {
      if (config.base_url.empty())
        config.base_url = env_or("STARGAZE_API_URL", "https://api.github.com");
      if (config.auth_token.empty())
        config.auth_token = env_or("STARGAZE_TOKEN", "");
    } else if (config.base_url.empty()) {
      config.base_url = "https://api.github.com";
    }
  }

  httplib::Headers headers(const char* accept) const {
    httplib::Headers h{{"User-Agent", "stargaze/1.0"}, {"Accept", accept}};
    if (!config.auth_token.empty())
      h.emplace("Authorization", "Bearer " + config.auth_token);
    return h;
  }

  // One GET with the retry policy: transport failures and 5xx get
  // max_retries exponential-backoff attempts; a rate-limit response gets a
  // single sleep until the advertised reset, then fails if still limited.
  json get_json(const std::string& path, const char* accept) const {
    bool slept_for_rate_limit = false;
    int attempt = 0;
    for (;;) {
      httplib::Client http(config.base_url);
      http.set_connection_timeout(10, 0);
      http.set_read_timeout(60, 0);
      auto res = http.Get(path, headers(accept));

      if (!res || res->status >= 500) {
        if (attempt < config.max_retries) {
          std::this_thread::sleep_for(std::chrono::milliseconds(
              static_cast<long long>(config.retry_base_ms) << attempt));
          ++attempt;
          continue;
        }
        raise(errc::transport,
              path + ": " + (res ? "HTTP " + std::to_string(res->status)
                                 : httplib::to_string(res.error())));
      }

      const bool limited =
          (res->status == 403 || res->status == 429) &&
          (res->get_header_value("X-RateLimit-Remaining") == "0" ||
           res->has_header("Retry-After"));
      if (limited) {
        long long wait_sec = 0;
        if (res->has_header("Retry-After")) {
          wait_sec = std::atoll(res->get_header_value("Retry-After").c_str());
        } else {
          const long long reset =
              std::atoll(res->get_header_value("X-RateLimit-Reset").c_str());
          const long long now = std::chrono::duration_cast<std::chrono::seconds>(
                                    std::chrono::system_clock::now().time_since_epoch())
                                    .count();
          wait_sec = reset - now;
        }
        wait_sec = std::clamp(wait_sec, 0LL, kMaxRateLimitSleepSec);
        if (!slept_for_rate_limit) {
          std::this_thread::sleep_for(std::chrono::seconds(wait_sec + 1));
          slept_for_rate_limit = true;
          continue;
        }
        const std::string auth_hint =
            config.auth_token.empty() ? " (unauthenticated: lower limit applies)" : "";
        raise(errc::rate_limited, path + ": rate limited, reset in " +
                                      std::to_string(wait_sec) + "s" + auth_hint);
      }

      if (res->status == 404) raise(errc::not_found, path + ": not found");
      if (res->status < 200 || res->status >= 300)
        raise(errc::transport, path + ": HTTP " + std::to_string(res->status));

      json doc = json::parse(res->body, nullptr, false);
      if (doc.is_discarded())
        raise(errc::transport, path + ": unparsable response body");
      return doc;
    }
  }
};

Client::Client(ClientConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Client::~Client() = default;

const ClientConfig& Client::config() const { return impl_->config; }

RepoMeta Client::fetch_repo_meta(const std::string& full_name) const {
  if (!valid_full_name(full_name))
    raise(errc::not_found, "malformed repository name '" + full_name + "'");
  const json doc =
      impl_->get_json("/repos/" + full_name, "application/vnd.github+json");
  return parse_meta(doc, full_name);
}

FetchRecord Client::fetch_star_events(const std::string& full_name) const {
  FetchRecord record;
  record.meta = fetch_repo_meta(full_name);

  const int page_size = impl_->config.page_size;
  bool exhausted = false;
  for (int page = 1; page <= impl_->config.page_cap; ++page) {
    const json doc = impl_->get_json(
        "/repos/" + full_name + "/stargazers?per_page=" +
            std::to_string(page_size) + "&page=" + std::to_string(page),
        "application/vnd.github.v3.star+json");
    if (!doc.is_array())
      raise(errc::transport, full_name + ": unexpected stargazers payload");
    record.pages_fetched = page;
    for (const json& item : doc) {
      StarEvent ev;
      ev.repo = record.meta.full_name;
      ev.starred_at = parse_iso8601(item.at("starred_at").get<std::string>());
      ev.user = item.at("user").at("login").get<std::string>();
      record.events.push_back(std::move(ev));
    }
    if (static_cast<int>(doc.size()) < page_size) {
      exhausted = true;
      break;
    }
  }
  record.complete = exhausted;

  for (StarEvent& ev : record.events) {
    if (ev.starred_at < record.meta.created_at) {
      ev.starred_at = record.meta.created_at;
      ++record.clamped_events;
    }
  }
  std::stable_sort(record.events.begin(), record.events.end(),
                   [](const StarEvent& a, const StarEvent& b) {
                     return a.starred_at < b.starred_at;
                   });
  return record;
}

std::vector<RepoMeta> Client::search_top_repos(int n) const {
  if (n < 1) raise(errc::invalid_argument, "search_top_repos: n must be >= 1");
  const int page_size = impl_->config.page_size;
  std::vector<RepoMeta> out;
  std::vector<std::string> seen;
  for (int page = 1; static_cast<int>(out.size()) < n; ++page) {
    const json doc = impl_->get_json(
        "/search/repositories?q=stars:%3E1&sort=stars&order=desc&per_page=" +
            std::to_string(page_size) + "&page=" + std::to_string(page),
        "application/vnd.github+json");
    const json& items = doc.at("items");
    for (const json& item : items) {
      RepoMeta meta = parse_meta(item, item.value("full_name", ""));
      if (std::find(seen.begin(), seen.end(), meta.full_name) != seen.end())
        continue;
      seen.push_back(meta.full_name);
      out.push_back(std::move(meta));
      if (static_cast<int>(out.size()) == n) break;
    }
    if (static_cast<int>(items.size()) < page_size) break; // index exhausted
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RepoMeta& a, const RepoMeta& b) {
                     return a.total_stars > b.total_stars;
                   });
  if (static_cast<int>(out.size()) > n) out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<FetchRecord> Client::fetch_many(const std::vector<std::string>& names) const {
  const std::size_t n = names.size();
  std::vector<FetchRecord> records(n);
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::max(1, impl_->config.parallelism);
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    threads.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += std::min(workers, n)) {
        try {
          records[i] = fetch_star_events(names[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e); // first failure in input order
  return records;
}

namespace {

void check_field(const std::string& value, const std::string& path) {
  if (value.find('\t') != std::string::npos ||
      value.find('\n') != std::string::npos)
    raise(errc::io, path + ": field contains separator characters");
}

} // namespace

void persist_fetch(const FetchRecord& record, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io, "cannot write " + path);
  json header = {{"format", "stargaze-events"},
                 {"version", kEventsFormatVersion},
                 {"repo", record.meta.full_name},
                 {"created_at", format_iso8601(record.meta.created_at)},
                 {"language", record.meta.primary_language
                                  ? json(*record.meta.primary_language)
                                  : json(nullptr)},
                 {"total_stars", record.meta.total_stars},
                 {"complete", record.complete},
                 {"pages_fetched", record.pages_fetched},
                 {"clamped_events", record.clamped_events}};
  out << header.dump() << '\n';
  for (const StarEvent& ev : record.events) {
    check_field(ev.repo, path);
    check_field(ev.user, path);
    out << ev.repo << '\t' << format_iso8601(ev.starred_at) << '\t' << ev.user
        << '\n';
  }
  if (!out) raise(errc::io, "short write to " + path);
}

FetchRecord load_fetch(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line))
    raise(errc::format_version_mismatch, path + ": missing header");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "stargaze-events")
    raise(errc::format_version_mismatch, path + ": not a raw-events file");
  if (header.value("version", -1) != kEventsFormatVersion)
    raise(errc::format_version_mismatch, path + ": unsupported version");

  FetchRecord record;
  record.meta.full_name = header.at("repo").get<std::string>();
  record.meta.created_at = parse_iso8601(header.at("created_at").get<std::string>());
  if (header.contains("language") && header["language"].is_string())
    record.meta.primary_language = header["language"].get<std::string>();
  record.meta.total_stars = header.at("total_stars").get<std::int64_t>();
  record.complete = header.at("complete").get<bool>();
  record.pages_fetched = header.at("pages_fetched").get<int>();
  record.clamped_events = header.at("clamped_events").get<int>();

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? std::string::npos
                                                   : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      raise(errc::format_version_mismatch, path + ": bad event line");
    StarEvent ev;
    ev.repo = line.substr(0, t1);
    ev.starred_at = parse_iso8601(line.substr(t1 + 1, t2 - t1 - 1));
    ev.user = line.substr(t2 + 1);
    record.events.push_back(std::move(ev));
  }
  return record;
}

} // namespace stargaze::ingest
