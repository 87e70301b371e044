#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace inspectkit {

using Timestamp = std::chrono::sys_seconds;

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(Timestamp t);

/// Accepts `YYYY-MM-DDTHH:MM:SS` followed by optional fractional seconds and
/// either `Z` or a `+HH:MM` / `-HH:MM` offset. Fractions are truncated.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Calendar year of a UTC timestamp.
int utc_year(Timestamp t);

Timestamp now_utc();

}  // namespace inspectkit
