#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace gridworth {

/// A point in time on the UTC timeline, second resolution.
using Instant = std::chrono::sys_seconds;

/// Parse an RFC 3339 UTC timestamp: "YYYY-MM-DDThh:mm[:ss]" followed by
/// "Z", "z", "+00:00" or "-00:00". Non-UTC offsets are rejected; inputs are
/// expected on the UTC timeline.
/// Throws ParseError on malformed input.
Instant parse_rfc3339_utc(std::string_view text);

/// Format as "YYYY-MM-DDThh:mm:ssZ".
std::string format_rfc3339_utc(Instant t);

/// Parse a "YYYY-MM" month key into (year, month). Throws ParseError.
std::pair<int, int> parse_year_month(std::string_view text);

} // namespace gridworth
