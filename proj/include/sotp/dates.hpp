#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sotp {

/// Calendar date. A bare year ("2019") is accepted as a low-precision date
/// and keeps `year_only` set; arithmetic treats it as July 1 of that year.
struct Date {
    int year = 0;
    int month = 1;
    int day = 1;
    bool year_only = false;

    static std::optional<Date> try_parse(std::string_view text);
    static Date parse(std::string_view text);  // throws Error(validation)

    /// July-1 substitution for year-only dates; identity otherwise.
    Date normalized() const;

    std::string to_string() const;  // YYYY-MM-DD, or YYYY when year_only

    bool operator==(const Date& other) const = default;
};

/// Ordering for date arithmetic; compares normalized() tuples.
bool date_before(const Date& a, const Date& b);
bool date_on_or_after(const Date& a, const Date& b);

/// Calendar-month shift with end-of-month clamping (2025-03-31 minus one
/// month is 2025-02-28).
Date add_months(const Date& d, int delta);

bool is_leap_year(int year);
int days_in_month(int year, int month);

/// UTC wall-clock instant with second precision.
struct Timestamp {
    std::int64_t unix_seconds = 0;

    static std::optional<Timestamp> try_parse_iso8601(std::string_view text);
    static Timestamp parse_iso8601(std::string_view text);

    std::string to_iso8601() const;  // YYYY-MM-DDTHH:MM:SSZ
    Date utc_date() const;

    bool operator==(const Timestamp&) const = default;
    auto operator<=>(const Timestamp&) const = default;
};

/// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

}  // namespace sotp
