#include "sotp/dates.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>

#include "sotp/error.hpp"

namespace sotp {

namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[month - 1];
}

std::optional<Date> Date::try_parse(std::string_view text) {
    if (all_digits(text) && text.size() == 4) {
        Date d;
        parse_int(text, d.year);
        d.month = 1;
        d.day = 1;
        d.year_only = true;
        return d;
    }
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    Date d;
    if (!parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month) ||
        !parse_int(text.substr(8, 2), d.day))
        return std::nullopt;
    if (d.month < 1 || d.month > 12) return std::nullopt;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
    return d;
}

Date Date::parse(std::string_view text) {
    auto d = try_parse(text);
    if (!d)
        throw Error(ErrorKind::validation,
                    fmt::format("invalid date '{}': expected YYYY-MM-DD or YYYY", text));
    return *d;
}

Date Date::normalized() const {
    if (!year_only) return *this;
    return Date{year, 7, 1, false};
}

std::string Date::to_string() const {
    if (year_only) return fmt::format("{:04d}", year);
    return fmt::format("{:04d}-{:02d}-{:02d}", year, month, day);
}

bool date_before(const Date& a, const Date& b) {
    Date x = a.normalized(), y = b.normalized();
    if (x.year != y.year) return x.year < y.year;
    if (x.month != y.month) return x.month < y.month;
    return x.day < y.day;
}

bool date_on_or_after(const Date& a, const Date& b) { return !date_before(a, b); }

Date add_months(const Date& d, int delta) {
    Date base = d.normalized();
    int months = base.year * 12 + (base.month - 1) + delta;
    Date out;
    out.year = months / 12;
    out.month = months % 12 + 1;
    if (out.month < 1) {  // C++ integer division truncates toward zero
        out.month += 12;
        out.year -= 1;
    }
    out.day = std::min(base.day, days_in_month(out.year, out.month));
    return out;
}

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    year = static_cast<int>(y + (month <= 2));
}

std::optional<Timestamp> Timestamp::try_parse_iso8601(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS followed by Z, +hh:mm, -hh:mm, +hhmm or -hhmm.
    if (text.size() < 20) return std::nullopt;
    auto date = Date::try_parse(text.substr(0, 10));
    if (!date || date->year_only) return std::nullopt;
    if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
    if (text[13] != ':' || text[16] != ':') return std::nullopt;
    int hh, mm, ss;
    if (!parse_int(text.substr(11, 2), hh) || !parse_int(text.substr(14, 2), mm) ||
        !parse_int(text.substr(17, 2), ss))
        return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;

    std::string_view zone = text.substr(19);
    int offset_minutes = 0;
    if (zone == "Z") {
        // UTC
    } else if ((zone[0] == '+' || zone[0] == '-') &&
               (zone.size() == 6 || zone.size() == 5)) {
        int oh, om;
        std::string_view hpart = zone.substr(1, 2);
        std::string_view mpart = zone.size() == 6 ? zone.substr(4, 2) : zone.substr(3, 2);
        if (zone.size() == 6 && zone[3] != ':') return std::nullopt;
        if (!parse_int(hpart, oh) || !parse_int(mpart, om)) return std::nullopt;
        offset_minutes = oh * 60 + om;
        if (zone[0] == '-') offset_minutes = -offset_minutes;
    } else {
        return std::nullopt;
    }

    std::int64_t days = days_from_civil(date->year, date->month, date->day);
    Timestamp t;
    t.unix_seconds = days * 86400 + hh * 3600 + mm * 60 + ss - offset_minutes * 60;
    return t;
}

Timestamp Timestamp::parse_iso8601(std::string_view text) {
    auto t = try_parse_iso8601(text);
    if (!t)
        throw Error(ErrorKind::validation, fmt::format("invalid ISO-8601 timestamp '{}'", text));
    return *t;
}

std::string Timestamp::to_iso8601() const {
    std::int64_t days = unix_seconds / 86400;
    std::int64_t rem = unix_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", y, m, d, rem / 3600,
                       rem % 3600 / 60, rem % 60);
}

Date Timestamp::utc_date() const {
    std::int64_t days = unix_seconds / 86400;
    if (unix_seconds % 86400 < 0) days -= 1;
    Date date;
    civil_from_days(days, date.year, date.month, date.day);
    return date;
}

}  // namespace sotp
