#pragma once

#include <cstdint>
#include <compare>
#include <optional>
#include <string>

namespace solarfc {

/// Calendar date-time at hour resolution, local standard time (no DST).
struct Timestamp {
    int year = 1970;
    int month = 1;  // 1-12
    int day = 1;    // 1-31
    int hour = 0;   // 0-23

    auto operator<=>(const Timestamp&) const = default;

    /// Days since 1970-01-01 of the calendar day (proleptic Gregorian).
    std::int64_t day_number() const;

    /// Hours since 1970-01-01T00.
    std::int64_t hour_number() const { return day_number() * 24 + hour; }

    /// 1..366
    int day_of_year() const;

    /// Parse "YYYY-MM-DDThh:00" (minutes, if present, must be zero).
    static std::optional<Timestamp> parse(const std::string& text);

    /// From hours since epoch (inverse of hour_number).
    static Timestamp from_hour_number(std::int64_t h);

    std::string to_string() const;  // ISO-8601, "YYYY-MM-DDThh:00"
};

}  // namespace solarfc
