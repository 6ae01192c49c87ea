#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "gridworth/time.hpp"

namespace gridworth {

/// A civil time in some timezone, second resolution.
using LocalTime = std::chrono::local_seconds;

/// IANA timezone backed by the system TZif database (RFC 8536), found under
/// $TZDIR or /usr/share/zoneinfo. Only UTC->local conversion is provided;
/// that is all hour classification needs.
class TimeZone {
public:
    /// Load a zone by IANA name (e.g. "America/Los_Angeles").
    /// Throws CalendarError for unknown or malformed identifiers.
    static TimeZone load(const std::string& iana_name);

    /// A fixed zero-offset zone named "UTC"; independent of the tz database.
    static TimeZone utc();

    /// Offset from UTC in effect at instant t (positive east of Greenwich).
    std::chrono::seconds utc_offset(Instant t) const;

    /// true if daylight saving time is in effect at t.
    bool is_dst(Instant t) const;

    LocalTime to_local(Instant t) const {
        return LocalTime{(t + utc_offset(t)).time_since_epoch()};
    }

    const std::string& name() const { return name_; }

private:
    struct OffsetType {
        std::int32_t utc_offset_s = 0;
        bool is_dst = false;
    };

    TimeZone() = default;
    std::size_t type_index_at(Instant t) const;

    std::string name_;
    std::vector<std::int64_t> transitions_; // UTC seconds, sorted ascending
    std::vector<std::uint8_t> transition_type_;
    std::vector<OffsetType> types_;
    std::size_t first_type_ = 0; // in effect before the first transition
};

} // namespace gridworth
