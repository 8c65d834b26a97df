#pragma once

#include <cstdint>
#include <vector>

#include "ttg/calendar.hpp"
#include "ttg/error.hpp"
#include "ttg/schema/types.hpp"

namespace ttg {

/// Red-eye: departure clock in [depart_from, 24:00) or [00:00, depart_until], or
/// arrival clock in [arrive_from, arrive_until].
struct RedEyeRule {
    int depart_from = 21 * 60;
    int depart_until = 4 * 60 + 59;
    int arrive_from = 1 * 60;
    int arrive_until = 5 * 60 + 59;

    bool operator()(DateTime departure, DateTime arrival) const {
        int d = departure.minute_of_day();
        int a = arrival.minute_of_day();
        return d >= depart_from || d <= depart_until || (a >= arrive_from && a <= arrive_until);
    }
};

/// Everything about the time discretisation and the soft-window penalty that the
/// model builder and the feasibility checker must agree on.
struct PlanningRules {
    int slot_minutes = 60;
    int evening_start = 22 * 60;  // evening window [evening_start, evening_end), wrapping midnight
    int evening_end = 7 * 60;
    int min_sleep_minutes = 360;
    Cents window_penalty_per_minute = 100;
    RedEyeRule red_eye;

    void validate() const {
        if (slot_minutes <= 0 || kMinutesPerDay % slot_minutes != 0)
            throw Error(ErrorKind::invalid_argument, "slot length must divide 1440 minutes", "slot_minutes");
        if (evening_start < 0 || evening_start >= kMinutesPerDay || evening_end < 0 || evening_end > kMinutesPerDay ||
            evening_start == evening_end)
            throw Error(ErrorKind::invalid_argument, "evening window must be a non-empty clock interval", "evening");
        if (min_sleep_minutes < 0) throw Error(ErrorKind::invalid_argument, "negative sleep", "min_sleep_minutes");
        if (window_penalty_per_minute < 0)
            throw Error(ErrorKind::invalid_argument, "negative penalty", "window_penalty_per_minute");
    }

    /// Minimum sleep slots per night (L).
    int sleep_slots() const { return (min_sleep_minutes + slot_minutes - 1) / slot_minutes; }

    /// Absolute slot containing `t`.
    std::int64_t slot_floor(DateTime t) const { return floor_div(t.minutes, slot_minutes); }
    /// First absolute slot starting at or after `t`.
    std::int64_t slot_ceil(DateTime t) const { return -floor_div(-t.minutes, slot_minutes); }
    DateTime slot_start(std::int64_t slot) const { return DateTime{slot * slot_minutes}; }

    /// Absolute slots of the evening window that starts on `night`.
    std::vector<std::int64_t> evening_slots(Date night) const {
        DateTime from = at(night, evening_start);
        DateTime to = evening_end > evening_start ? at(night, evening_end) : at(night + 1, evening_end);
        std::vector<std::int64_t> out;
        for (std::int64_t s = slot_ceil(from); slot_start(s) < to; ++s) out.push_back(s);
        return out;
    }

    /// Absolute slot where a hotel stay starts (check-in) and the first slot it no
    /// longer covers (check-out).
    std::int64_t stay_first_slot(const HotelOffer& h, Date check_in) const { return slot_ceil(at(check_in, h.checkin)); }
    std::int64_t stay_end_slot(const HotelOffer& h, Date check_out) const {
        return slot_floor(at(check_out, h.checkout));
    }

private:
    static std::int64_t floor_div(std::int64_t a, std::int64_t b) {
        std::int64_t q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    }
};

/// Minutes from midnight of the segment date, used by departure and arrival windows.
inline int clock_from_segment_date(const Segment& seg, DateTime t) {
    return static_cast<int>(t - at(seg.date, 0));
}

inline const TimeWindow* window_for(const std::optional<std::vector<TimeWindow>>& windows, int segment) {
    if (!windows) return nullptr;
    for (const auto& w : *windows)
        if (w.segment == segment) return &w;
    return nullptr;
}

/// Soft-window penalty of taking `f` for its segment under `request`.
inline Cents soft_window_penalty(const FlightOffer& f, const TravelRequest& request, const PlanningRules& rules) {
    if (f.segment < 0 || f.segment >= static_cast<int>(request.segments.size())) return 0;
    const auto& seg = request.segments[static_cast<std::size_t>(f.segment)];
    Cents minutes = 0;
    if (const auto* w = window_for(request.airline.departure_window, f.segment); w && w->soft)
        minutes += w->distance(clock_from_segment_date(seg, f.departure));
    if (const auto* w = window_for(request.airline.arrival_window, f.segment); w && w->soft)
        minutes += w->distance(clock_from_segment_date(seg, f.arrival));
    return minutes * rules.window_penalty_per_minute;
}

}  // namespace ttg
