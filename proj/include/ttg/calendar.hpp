#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace ttg {

inline constexpr int kMinutesPerDay = 1440;

/// Calendar date as days since 1970-01-01.
struct Date {
    std::int32_t days = 0;

    friend constexpr auto operator<=>(Date, Date) = default;
    constexpr Date operator+(int n) const { return Date{days + n}; }
    constexpr int operator-(Date other) const { return days - other.days; }
};

/// Naive local timestamp as minutes since 1970-01-01T00:00.
struct DateTime {
    std::int64_t minutes = 0;

    friend constexpr auto operator<=>(DateTime, DateTime) = default;
    constexpr DateTime operator+(std::int64_t m) const { return DateTime{minutes + m}; }
    constexpr std::int64_t operator-(DateTime other) const { return minutes - other.minutes; }

    constexpr Date date() const {
        auto d = minutes >= 0 ? minutes / kMinutesPerDay : -((-minutes + kMinutesPerDay - 1) / kMinutesPerDay);
        return Date{static_cast<std::int32_t>(d)};
    }
    constexpr int minute_of_day() const {
        auto m = minutes % kMinutesPerDay;
        return static_cast<int>(m < 0 ? m + kMinutesPerDay : m);
    }
};

constexpr DateTime at(Date d, int minute_of_day) {
    return DateTime{static_cast<std::int64_t>(d.days) * kMinutesPerDay + minute_of_day};
}

inline std::optional<Date> make_date(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) return std::nullopt;
    return Date{static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count())};
}

/// Parses "YYYY-MM-DD".
inline std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (text[i] < '0' || text[i] > '9') return std::nullopt;
    }
    y = (text[0] - '0') * 1000 + (text[1] - '0') * 100 + (text[2] - '0') * 10 + (text[3] - '0');
    m = static_cast<unsigned>((text[5] - '0') * 10 + (text[6] - '0'));
    d = static_cast<unsigned>((text[8] - '0') * 10 + (text[9] - '0'));
    return make_date(y, m, d);
}

/// Parses "YYYY-MM-DDTHH:MM" (a trailing ":SS" is accepted when it is ":00").
inline std::optional<DateTime> parse_datetime(std::string_view text) {
    if (text.size() == 19) {
        if (text.substr(16) != ":00") return std::nullopt;
        text = text.substr(0, 16);
    }
    if (text.size() != 16 || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') return std::nullopt;
    auto date = parse_date(text.substr(0, 10));
    if (!date) return std::nullopt;
    for (std::size_t i : {11u, 12u, 14u, 15u}) {
        if (text[i] < '0' || text[i] > '9') return std::nullopt;
    }
    int hh = (text[11] - '0') * 10 + (text[12] - '0');
    int mm = (text[14] - '0') * 10 + (text[15] - '0');
    if (hh > 23 || mm > 59) return std::nullopt;
    return at(*date, hh * 60 + mm);
}

inline std::string format_date(Date d) {
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{d.days}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

inline std::string format_clock(int minute_of_day) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d:%02d", minute_of_day / 60, minute_of_day % 60);
    return buf;
}

inline std::string format_datetime(DateTime t) {
    return format_date(t.date()) + "T" + format_clock(t.minute_of_day());
}

}  // namespace ttg
