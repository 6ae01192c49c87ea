#include "gridworth/time.hpp"

#include <charconv>
#include <cstdio>

#include "gridworth/errors.hpp"

namespace gridworth {

namespace {

// Parses exactly `width` digits starting at text[pos]; advances pos.
int parse_digits(std::string_view text, std::size_t& pos, int width, const char* what) {
    if (pos + width > text.size())
        throw ParseError(std::string("truncated timestamp, expected ") + what);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, value);
    if (ec != std::errc{} || ptr != text.data() + pos + width)
        throw ParseError(std::string("invalid ") + what + " in timestamp");
    pos += width;
    return value;
}

void expect_char(std::string_view text, std::size_t& pos, char c) {
    if (pos >= text.size() || text[pos] != c)
        throw ParseError(std::string("expected '") + c + "' in timestamp");
    ++pos;
}

} // namespace

Instant parse_rfc3339_utc(std::string_view text) {
    using namespace std::chrono;

    std::size_t pos = 0;
    const int y = parse_digits(text, pos, 4, "year");
    expect_char(text, pos, '-');
    const int mo = parse_digits(text, pos, 2, "month");
    expect_char(text, pos, '-');
    const int d = parse_digits(text, pos, 2, "day");
    if (pos >= text.size() || (text[pos] != 'T' && text[pos] != 't'))
        throw ParseError("expected 'T' separator in timestamp");
    ++pos;
    const int h = parse_digits(text, pos, 2, "hour");
    expect_char(text, pos, ':');
    const int mi = parse_digits(text, pos, 2, "minute");
    int s = 0;
    if (pos < text.size() && text[pos] == ':') {
        ++pos;
        s = parse_digits(text, pos, 2, "second");
    }

    // Offset: Z or a literal zero offset.
    if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
        ++pos;
    } else {
        std::string_view rest = text.substr(pos);
        if (rest == "+00:00" || rest == "-00:00" || rest == "+0000" || rest == "-0000")
            pos = text.size();
        else
            throw ParseError("timestamp must be UTC ('Z' or zero offset)");
    }
    if (pos != text.size())
        throw ParseError("trailing characters after timestamp");

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        throw ParseError("invalid calendar date in timestamp");
    if (h > 23 || mi > 59 || s > 60)
        throw ParseError("invalid time of day in timestamp");

    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_rfc3339_utc(Instant t) {
    using namespace std::chrono;
    const auto dp = floor<days>(t);
    const year_month_day ymd{dp};
    const hh_mm_ss<seconds> tod{t - dp};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()),
                  static_cast<int>(tod.hours().count() % 24),
                  static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

std::pair<int, int> parse_year_month(std::string_view text) {
    std::size_t pos = 0;
    const int y = parse_digits(text, pos, 4, "year");
    expect_char(text, pos, '-');
    const int m = parse_digits(text, pos, 2, "month");
    if (pos != text.size())
        throw ParseError("trailing characters after year-month");
    if (m < 1 || m > 12)
        throw ParseError("month out of range in year-month");
    return {y, m};
}

} // namespace gridworth
