#pragma once
// Calendar dates as ISO-8601 day precision. Day arithmetic goes through
// std::chrono::sys_days, so leap years are handled by the standard library.

#include <chrono>
#include <compare>
#include <optional>
#include <string>

#include "laser/common.hpp"

namespace laser {

struct Date {
    int year = 0;
    unsigned month = 1;
    unsigned day = 1;

    auto operator<=>(const Date&) const = default;

    long days_since_epoch() const {
        std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
        return std::chrono::sys_days{ymd}.time_since_epoch().count();
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
        return std::string(buf);
    }
};

inline Date parse_date(const std::string& s) {
    auto parts = split(s, '-');
    if (parts.size() != 3 || parts[0].size() != 4 || parts[1].size() != 2 || parts[2].size() != 2)
        throw DataError("invalid date '" + s + "' (expected YYYY-MM-DD)");
    Date d;
    d.year = static_cast<int>(parse_int(parts[0], "year"));
    d.month = static_cast<unsigned>(parse_int(parts[1], "month"));
    d.day = static_cast<unsigned>(parse_int(parts[2], "day"));
    std::chrono::year_month_day ymd{std::chrono::year{d.year}, std::chrono::month{d.month},
                                    std::chrono::day{d.day}};
    if (!ymd.ok()) throw DataError("invalid calendar date '" + s + "'");
    return d;
}

// Signed number of calendar days from a to b.
inline long days_between(const Date& a, const Date& b) {
    return b.days_since_epoch() - a.days_since_epoch();
}

// Closed interval [start, end]; an absent end means "still ongoing" and is
// substituted with a reference date where a concrete end is needed.
struct TimeInterval {
    Date start;
    std::optional<Date> end;

    Date end_or(const Date& reference) const { return end ? *end : reference; }
};

}  // namespace laser
