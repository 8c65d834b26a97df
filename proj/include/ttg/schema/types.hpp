#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttg/calendar.hpp"

namespace ttg {

/// Money is integer cents everywhere.
using Cents = std::int64_t;

inline constexpr int kSchemaVersion = 1;

enum class CabinClass { basic_economy, coach, business, first };

inline constexpr std::string_view to_string(CabinClass c) {
    switch (c) {
        case CabinClass::basic_economy: return "basic_economy";
        case CabinClass::coach: return "coach";
        case CabinClass::business: return "business";
        case CabinClass::first: return "first";
    }
    return "coach";
}

inline std::optional<CabinClass> parse_cabin(std::string_view s) {
    if (s == "basic_economy") return CabinClass::basic_economy;
    if (s == "coach") return CabinClass::coach;
    if (s == "business") return CabinClass::business;
    if (s == "first") return CabinClass::first;
    return std::nullopt;
}

/// 0 for basic economy up to 3 for first.
inline constexpr int cabin_rank(CabinClass c) { return static_cast<int>(c); }

enum class ObjectiveKind { min_cost, better_hotel, better_flight };

inline constexpr std::string_view to_string(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::min_cost: return "min_cost";
        case ObjectiveKind::better_hotel: return "better_hotel";
        case ObjectiveKind::better_flight: return "better_flight";
    }
    return "min_cost";
}

inline std::optional<ObjectiveKind> parse_objective_kind(std::string_view s) {
    if (s == "min_cost") return ObjectiveKind::min_cost;
    if (s == "better_hotel") return ObjectiveKind::better_hotel;
    if (s == "better_flight") return ObjectiveKind::better_flight;
    return std::nullopt;
}

inline constexpr ObjectiveKind kAllObjectives[] = {ObjectiveKind::min_cost, ObjectiveKind::better_hotel,
                                                   ObjectiveKind::better_flight};

struct Segment {
    std::string origin;
    std::string destination;
    Date date;

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct PriceRange {
    Cents min = 0;
    Cents max = 0;

    bool contains(Cents v) const { return v >= min && v <= max; }
    friend bool operator==(const PriceRange&, const PriceRange&) = default;
};

/// Window on a segment's departure (or arrival) clock time. Minutes are counted
/// from midnight of the segment date, so arrival windows may exceed 1440.
struct TimeWindow {
    int segment = 0;
    int earliest = 0;
    int latest = 0;
    bool soft = true;

    int distance(int minute) const {
        if (minute < earliest) return earliest - minute;
        if (minute > latest) return minute - latest;
        return 0;
    }
    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Sets are kept sorted and unique so that member-wise equality is set equality.
using CodeSet = std::vector<std::string>;

inline void normalize_set(CodeSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline bool set_contains(const CodeSet& s, std::string_view v) {
    return std::binary_search(s.begin(), s.end(), v);
}

struct AirlineConstraints {
    std::optional<PriceRange> price_range;
    std::optional<std::vector<TimeWindow>> departure_window;
    std::optional<std::vector<TimeWindow>> arrival_window;
    std::optional<CabinClass> cabin_class;
    std::optional<bool> refundable;
    std::optional<bool> non_stop;
    std::optional<CodeSet> plane_type;
    std::optional<CodeSet> preferred_airlines;
    std::optional<CodeSet> avoided_airlines;
    std::optional<bool> must_not_basic_economy;
    std::optional<bool> avoid_red_eye;
    std::optional<bool> no_mixed_cabin;

    int count() const {
        return int(price_range.has_value()) + int(departure_window.has_value()) + int(arrival_window.has_value()) +
               int(cabin_class.has_value()) + int(refundable.has_value()) + int(non_stop.has_value()) +
               int(plane_type.has_value()) + int(preferred_airlines.has_value()) +
               int(avoided_airlines.has_value()) + int(must_not_basic_economy.has_value()) +
               int(avoid_red_eye.has_value()) + int(no_mixed_cabin.has_value());
    }
    friend bool operator==(const AirlineConstraints&, const AirlineConstraints&) = default;
};

inline constexpr std::string_view kAirlineFields[] = {
    "price_range", "departure_window", "arrival_window",     "cabin_class",           "refundable",    "non_stop",
    "plane_type",  "preferred_airlines", "avoided_airlines", "must_not_basic_economy", "avoid_red_eye", "no_mixed_cabin",
};

struct HotelConstraints {
    std::optional<PriceRange> price_range;
    std::optional<int> rating_min;
    std::optional<CodeSet> preferred_brands;
    std::optional<CodeSet> avoided_brands;

    int count() const {
        return int(price_range.has_value()) + int(rating_min.has_value()) + int(preferred_brands.has_value()) +
               int(avoided_brands.has_value());
    }
    friend bool operator==(const HotelConstraints&, const HotelConstraints&) = default;
};

inline constexpr std::string_view kHotelFields[] = {"price_range", "rating_min", "preferred_brands", "avoided_brands"};

struct BudgetConstraints {
    std::optional<Cents> total_budget;
    std::optional<Cents> flight_total_budget;
    std::optional<Cents> hotel_total_budget;
    std::optional<Cents> hotel_daily_budget;

    friend bool operator==(const BudgetConstraints&, const BudgetConstraints&) = default;
};

inline constexpr std::string_view kBudgetFields[] = {"total_budget", "flight_total_budget", "hotel_total_budget",
                                                     "hotel_daily_budget"};

/// A run of consecutive away-nights spent in one city, between the arrival of
/// segment `after_segment` and the departure of the next segment.
struct StayBlock {
    int after_segment = 0;
    std::string city;
    Date check_in;
    Date check_out;

    int nights() const { return check_out - check_in; }
};

struct TravelRequest {
    std::string request_id;
    std::vector<Segment> segments;
    AirlineConstraints airline;
    HotelConstraints hotel;
    BudgetConstraints budget;

    const std::string& home() const { return segments.front().origin; }
    bool is_round_trip() const { return segments.back().destination == segments.front().origin; }

    /// Distinct cities visited, including home.
    std::vector<std::string> cities() const {
        std::vector<std::string> out;
        auto add = [&](const std::string& c) {
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        };
        for (const auto& s : segments) {
            add(s.origin);
            add(s.destination);
        }
        return out;
    }
    int city_count() const { return static_cast<int>(cities().size()); }

    std::vector<StayBlock> stay_blocks() const {
        std::vector<StayBlock> out;
        for (std::size_t k = 0; k + 1 < segments.size(); ++k) {
            if (segments[k + 1].date > segments[k].date) {
                out.push_back({static_cast<int>(k), segments[k].destination, segments[k].date, segments[k + 1].date});
            }
        }
        return out;
    }

    friend bool operator==(const TravelRequest&, const TravelRequest&) = default;
};

struct FlightOffer {
    std::string id;
    int segment = 0;
    std::string airline;
    std::string flight_number;
    CabinClass cabin = CabinClass::coach;
    Cents price = 0;
    DateTime departure;
    DateTime arrival;
    bool non_stop = true;
    std::string aircraft;
    bool refundable = false;
    bool is_basic_economy = false;
    bool is_red_eye = false;
    bool is_mixed_cabin = false;

    friend bool operator==(const FlightOffer&, const FlightOffer&) = default;
};

struct HotelOffer {
    std::string id;
    std::string city;
    std::string name;
    std::string brand;
    int rating = 3;
    Cents nightly_price = 0;
    int checkin = 15 * 60;   // earliest check-in, minutes of day
    int checkout = 11 * 60;  // latest check-out, minutes of day
    Date available_from;     // first night that may be booked
    Date available_to;       // last allowed check-out date

    bool available(Date check_in, Date check_out) const {
        return available_from <= check_in && check_out <= available_to;
    }
    friend bool operator==(const HotelOffer&, const HotelOffer&) = default;
};

struct Inventory {
    std::vector<FlightOffer> flights;
    std::vector<HotelOffer> hotels;

    const FlightOffer* find_flight(std::string_view id) const {
        for (const auto& f : flights)
            if (f.id == id) return &f;
        return nullptr;
    }
    const HotelOffer* find_hotel(std::string_view id) const {
        for (const auto& h : hotels)
            if (h.id == id) return &h;
        return nullptr;
    }
    friend bool operator==(const Inventory&, const Inventory&) = default;
};

struct HotelStay {
    std::string hotel_id;
    Date check_in;
    Date check_out;

    friend bool operator==(const HotelStay&, const HotelStay&) = default;
};

struct Itinerary {
    std::vector<std::string> chosen_flights;
    std::vector<HotelStay> hotel_stays;
    Cents flight_cost = 0;
    Cents hotel_cost = 0;
    Cents total_cost = 0;
    ObjectiveKind objective_kind = ObjectiveKind::min_cost;
    std::int64_t objective_value = 0;

    friend bool operator==(const Itinerary&, const Itinerary&) = default;
};

struct Violation {
    std::string field;
    std::string detail;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ConstraintReport {
    bool feasible = true;
    std::vector<Violation> violations;

    bool has_violation(std::string_view field) const {
        return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.field == field; });
    }
    friend bool operator==(const ConstraintReport&, const ConstraintReport&) = default;
};

}  // namespace ttg
