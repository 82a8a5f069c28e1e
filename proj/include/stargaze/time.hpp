#pragma once

#include <cstdint>
#include <string>

namespace stargaze {

/// UTC timestamps are plain epoch seconds; the ingestion API serves whole
/// seconds so nothing finer is ever needed.
using Timestamp = std::int64_t;

constexpr std::int64_t kSecondsPerDay = 86400;
constexpr std::int64_t kSecondsPerWeek = 7 * kSecondsPerDay;

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (strict, UTC only). Throws errc::invalid_argument.
Timestamp parse_iso8601(const std::string& text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ". Inverse of parse_iso8601.
std::string format_iso8601(Timestamp t);

} // namespace stargaze
