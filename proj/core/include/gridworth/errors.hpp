#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gridworth {

/// Base class for all gridworth errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data. Carries the 1-based line number when the source is line-oriented.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& cause)
        : Error("line " + std::to_string(line) + ": " + cause), line_(line), cause_(cause) {}
    explicit ParseError(const std::string& cause) : Error(cause), line_(0), cause_(cause) {}

    std::size_t line() const { return line_; }
    const std::string& cause() const { return cause_; }

private:
    std::size_t line_;
    std::string cause_;
};

/// Invalid or incomplete rate schedule.
class ScheduleError : public Error {
public:
    using Error::Error;
};

/// Calendar construction/classification failure (e.g. unknown timezone identifier).
class CalendarError : public Error {
public:
    using Error::Error;
};

/// Not enough peak-hour history to estimate a month's demand impact.
class InsufficientHistoryError : public Error {
public:
    using Error::Error;
};

/// Requested statistic has no underlying data (distinct from a zero-valued result).
class NoDataError : public Error {
public:
    using Error::Error;
};

} // namespace gridworth
