#include "gridworth/timezone.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "gridworth/errors.hpp"

namespace gridworth {

namespace {

struct Cursor {
    const std::vector<unsigned char>& data;
    std::size_t pos = 0;

    void require(std::size_t n, const std::string& zone) const {
        if (pos + n > data.size())
            throw CalendarError("malformed tz database entry for '" + zone + "'");
    }
    std::uint32_t u32(const std::string& zone) {
        require(4, zone);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v = (v << 8) | data[pos++];
        return v;
    }
    std::int64_t i64(const std::string& zone) {
        require(8, zone);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v = (v << 8) | data[pos++];
        return static_cast<std::int64_t>(v);
    }
    std::int32_t i32(const std::string& zone) { return static_cast<std::int32_t>(u32(zone)); }
    std::uint8_t u8(const std::string& zone) {
        require(1, zone);
        return data[pos++];
    }
    void skip(std::size_t n, const std::string& zone) {
        require(n, zone);
        pos += n;
    }
};

struct TzifCounts {
    std::uint32_t isutcnt, isstdcnt, leapcnt, timecnt, typecnt, charcnt;
};

char read_header(Cursor& c, const std::string& zone, TzifCounts& counts) {
    c.require(4, zone);
    if (!(c.data[c.pos] == 'T' && c.data[c.pos + 1] == 'Z' && c.data[c.pos + 2] == 'i' &&
          c.data[c.pos + 3] == 'f'))
        throw CalendarError("'" + zone + "' is not a tz database entry");
    c.pos += 4;
    const char version = static_cast<char>(c.u8(zone));
    c.skip(15, zone);
    counts.isutcnt = c.u32(zone);
    counts.isstdcnt = c.u32(zone);
    counts.leapcnt = c.u32(zone);
    counts.timecnt = c.u32(zone);
    counts.typecnt = c.u32(zone);
    counts.charcnt = c.u32(zone);
    return version;
}

std::filesystem::path tz_database_root() {
    if (const char* dir = std::getenv("TZDIR"); dir && *dir)
        return dir;
    return "/usr/share/zoneinfo";
}

bool valid_zone_name(const std::string& name) {
    if (name.empty() || name.front() == '/' || name.find("..") != std::string::npos)
        return false;
    return name.find('\\') == std::string::npos;
}

} // namespace

TimeZone TimeZone::utc() {
    TimeZone tz;
    tz.name_ = "UTC";
    tz.types_.push_back({0, false});
    return tz;
}

TimeZone TimeZone::load(const std::string& iana_name) {
    if (!valid_zone_name(iana_name))
        throw CalendarError("unknown timezone identifier '" + iana_name + "'");

    const auto path = tz_database_root() / iana_name;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (iana_name == "UTC" || iana_name == "Etc/UTC")
            return utc(); // usable even without a tz database on disk
        throw CalendarError("unknown timezone identifier '" + iana_name + "'");
    }
    std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

    Cursor c{raw};
    TzifCounts counts{};
    const char version = read_header(c, iana_name, counts);

    const bool wide = version >= '2';
    if (wide) {
        // Skip the legacy 32-bit block, then read the 64-bit block's header.
        c.skip(counts.timecnt * 5u + counts.typecnt * 6u + counts.charcnt + counts.leapcnt * 8u +
                   counts.isstdcnt + counts.isutcnt,
               iana_name);
        read_header(c, iana_name, counts);
    }
    if (counts.typecnt == 0)
        throw CalendarError("tz database entry for '" + iana_name + "' has no offset types");

    TimeZone tz;
    tz.name_ = iana_name;
    tz.transitions_.reserve(counts.timecnt);
    for (std::uint32_t i = 0; i < counts.timecnt; ++i)
        tz.transitions_.push_back(wide ? c.i64(iana_name) : c.i32(iana_name));
    tz.transition_type_.reserve(counts.timecnt);
    for (std::uint32_t i = 0; i < counts.timecnt; ++i) {
        const std::uint8_t idx = c.u8(iana_name);
        if (idx >= counts.typecnt)
            throw CalendarError("malformed tz database entry for '" + iana_name + "'");
        tz.transition_type_.push_back(idx);
    }
    tz.types_.reserve(counts.typecnt);
    for (std::uint32_t i = 0; i < counts.typecnt; ++i) {
        OffsetType t;
        t.utc_offset_s = c.i32(iana_name);
        t.is_dst = c.u8(iana_name) != 0;
        c.u8(iana_name); // designation index, unused
        tz.types_.push_back(t);
    }
    // Designations, leap seconds, and std/ut indicators are not needed.

    // Type in effect before the first transition: first standard-time type.
    tz.first_type_ = 0;
    for (std::size_t i = 0; i < tz.types_.size(); ++i) {
        if (!tz.types_[i].is_dst) {
            tz.first_type_ = i;
            break;
        }
    }
    return tz;
}

std::size_t TimeZone::type_index_at(Instant t) const {
    if (transitions_.empty())
        return first_type_;
    const std::int64_t sec = t.time_since_epoch().count();
    auto it = std::upper_bound(transitions_.begin(), transitions_.end(), sec);
    if (it == transitions_.begin())
        return first_type_;
    return transition_type_[static_cast<std::size_t>(it - transitions_.begin()) - 1];
}

std::chrono::seconds TimeZone::utc_offset(Instant t) const {
    return std::chrono::seconds{types_[type_index_at(t)].utc_offset_s};
}

bool TimeZone::is_dst(Instant t) const {
    return types_[type_index_at(t)].is_dst;
}

} // namespace gridworth
