#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace stixdesk {

/// All timestamps are UTC with millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Source of "now"; injected so tests can drive expiry deterministically.
using Clock = std::function<Timestamp()>;

Timestamp system_now();

/// RFC 3339 in UTC with exactly three fractional digits: 2021-03-04T05:06:07.089Z
std::string format_timestamp(Timestamp ts);

/// Accepts `YYYY-MM-DDTHH:MM:SS[.fraction]Z`. Fractions beyond milliseconds are truncated.
/// Returns nullopt for anything else, including non-UTC offsets.
std::optional<Timestamp> parse_timestamp(std::string_view text);

inline std::int64_t to_epoch_ms(Timestamp ts) { return ts.time_since_epoch().count(); }
inline Timestamp from_epoch_ms(std::int64_t ms) { return Timestamp{std::chrono::milliseconds{ms}}; }

}  // namespace stixdesk
