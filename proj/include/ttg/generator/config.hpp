#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttg/calendar.hpp"
#include "ttg/error.hpp"
#include "ttg/generator/airports.hpp"
#include "ttg/generator/price_model.hpp"
#include "ttg/schema/types.hpp"

namespace ttg {

struct IntRange {
    int lo = 0;
    int hi = 0;

    friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// Sampling parameters for generated requests and inventories.
///
/// Optional fields are chosen in one of two modes. With count weights set, the
/// number of airline (hotel) constraints is drawn from the weights and that
/// many fields are picked without replacement, proportionally to the per-field
/// presence values. With empty count weights each field is an independent
/// Bernoulli draw with its presence value as probability.
struct GeneratorConfig {
    std::uint64_t rng_seed = 0;
    std::vector<Airport> city_pool = default_airports();
    double p_one_way = 0.04;
    double p_three_cities = 2786.0 / 21784.0;

    std::map<int, double> airline_count_weights = {{4, 4974}, {5, 9777}, {6, 5555}, {7, 1299}, {8, 173}};
    std::map<int, double> hotel_count_weights = {{2, 3345}, {3, 10438}, {4, 8001}};
    std::map<std::string, double> airline_presence = {
        {"price_range", 0.5},         {"departure_window", 0.7},   {"arrival_window", 0.35},
        {"cabin_class", 0.4},         {"refundable", 0.35},        {"non_stop", 0.5},
        {"plane_type", 0.2},          {"preferred_airlines", 0.35}, {"avoided_airlines", 0.25},
        {"must_not_basic_economy", 0.75}, {"avoid_red_eye", 0.7},  {"no_mixed_cabin", 0.3},
    };
    std::map<std::string, double> hotel_presence = {
        {"price_range", 0.85}, {"rating_min", 0.9}, {"preferred_brands", 0.6}, {"avoided_brands", 0.45}};
    std::map<std::string, double> budget_presence = {
        {"total_budget", 0.5}, {"flight_total_budget", 0.3}, {"hotel_total_budget", 0.3}, {"hotel_daily_budget", 0.5}};

    double p_true = 0.85;         // a present boolean constraint is `true`
    double p_window_hard = 0.0;   // a window is hard rather than soft
    IntRange flights_per_segment{20, 60};
    IntRange hotels_per_city{10, 30};
    IntRange stay_nights{1, 4};
    Date start_from = *parse_date("2025-03-01");
    Date start_to = *parse_date("2025-11-30");
    Cents flight_price_floor = 3000;
    Cents hotel_price_floor = 4000;
    PriceModel price_model = default_price_model();

    void validate() const {
        auto bad = [](const std::string& field, const std::string& what) {
            throw Error(ErrorKind::config_error, what, field);
        };
        auto prob = [&](double p, const std::string& field) {
            if (!(p >= 0.0 && p <= 1.0)) bad(field, "probability must be in [0, 1]");
        };
        if (city_pool.size() < 3) bad("city_pool", "need at least three cities");
        for (const auto& a : city_pool)
            if (a.code.size() != 3) bad("city_pool", "bad airport code " + a.code);
        prob(p_one_way, "p_one_way");
        prob(p_three_cities, "p_three_cities");
        prob(p_true, "p_true");
        prob(p_window_hard, "p_window_hard");
        auto presence = [&](const std::map<std::string, double>& m, const char* group, const auto& fields) {
            for (const auto& [k, v] : m) {
                bool known = false;
                for (auto f : fields) known = known || f == k;
                if (!known) bad(std::string(group) + "." + k, "unknown field");
                prob(v, std::string(group) + "." + k);
            }
        };
        presence(airline_presence, "airline_presence", kAirlineFields);
        presence(hotel_presence, "hotel_presence", kHotelFields);
        presence(budget_presence, "budget_presence", kBudgetFields);
        auto counts = [&](const std::map<int, double>& m, const char* field, int max) {
            for (const auto& [k, v] : m) {
                if (k < 0 || k > max) bad(field, "count " + std::to_string(k) + " out of range");
                if (!(v >= 0.0)) bad(field, "weights must be non-negative");
            }
        };
        counts(airline_count_weights, "airline_count_weights", 12);
        counts(hotel_count_weights, "hotel_count_weights", 4);
        auto range = [&](const IntRange& r, const char* field) {
            if (r.lo < 1 || r.hi < r.lo) bad(field, "need 1 <= lo <= hi");
        };
        range(flights_per_segment, "flights_per_segment");
        range(hotels_per_city, "hotels_per_city");
        range(stay_nights, "stay_nights");
        if (start_to < start_from) bad("start_to", "empty start-date range");
        if (flight_price_floor <= 0 || hotel_price_floor <= 0) bad("price_floor", "floors must be positive");
        price_model.validate();
    }
};

namespace detail {

inline nlohmann::json range_to_json(const IntRange& r) { return nlohmann::json::array({r.lo, r.hi}); }

inline IntRange range_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::config_error, "expected [lo, hi]");
    return {j[0].get<int>(), j[1].get<int>()};
}

inline nlohmann::json counts_to_json(const std::map<int, double>& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : m) j[std::to_string(k)] = v;
    return j;
}

inline std::map<int, double> counts_from_json(const nlohmann::json& j) {
    std::map<int, double> m;
    for (const auto& [k, v] : j.items()) m[std::stoi(k)] = v.get<double>();
    return m;
}

}  // namespace detail

inline nlohmann::json to_json(const GeneratorConfig& c) {
    nlohmann::json pool = nlohmann::json::array();
    for (const auto& a : c.city_pool) pool.push_back({{"code", a.code}, {"city", a.city}, {"lat", a.lat}, {"lon", a.lon}});
    return {{"rng_seed", c.rng_seed},
            {"city_pool", pool},
            {"p_one_way", c.p_one_way},
            {"p_three_cities", c.p_three_cities},
            {"airline_count_weights", detail::counts_to_json(c.airline_count_weights)},
            {"hotel_count_weights", detail::counts_to_json(c.hotel_count_weights)},
            {"airline_presence", c.airline_presence},
            {"hotel_presence", c.hotel_presence},
            {"budget_presence", c.budget_presence},
            {"p_true", c.p_true},
            {"p_window_hard", c.p_window_hard},
            {"flights_per_segment", detail::range_to_json(c.flights_per_segment)},
            {"hotels_per_city", detail::range_to_json(c.hotels_per_city)},
            {"stay_nights", detail::range_to_json(c.stay_nights)},
            {"start_from", format_date(c.start_from)},
            {"start_to", format_date(c.start_to)},
            {"flight_price_floor", c.flight_price_floor},
            {"hotel_price_floor", c.hotel_price_floor},
            {"price_model", to_json(c.price_model)}};
}

/// Applies a partial JSON object on top of `base`. Unknown keys are rejected.
inline GeneratorConfig apply_overrides(GeneratorConfig base, const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::config_error, "expected an object", "config");
    auto& c = base;
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "rng_seed") c.rng_seed = v.get<std::uint64_t>();
            else if (key == "city_pool") {
                c.city_pool.clear();
                for (const auto& a : v) {
                    if (a.is_string()) {
                        auto code = a.get<std::string>();
                        const Airport* known = find_airport(default_airports(), code);
                        if (!known) throw Error(ErrorKind::config_error, "unknown airport " + code + " without coordinates", "city_pool");
                        c.city_pool.push_back(*known);
                    } else {
                        c.city_pool.push_back({a.at("code").get<std::string>(), a.value("city", std::string()),
                                               a.at("lat").get<double>(), a.at("lon").get<double>()});
                    }
                }
            } else if (key == "p_one_way") c.p_one_way = v.get<double>();
            else if (key == "p_three_cities") c.p_three_cities = v.get<double>();
            else if (key == "airline_count_weights") c.airline_count_weights = detail::counts_from_json(v);
            else if (key == "hotel_count_weights") c.hotel_count_weights = detail::counts_from_json(v);
            else if (key == "airline_presence") {
                for (const auto& [f, p] : v.items()) c.airline_presence[f] = p.get<double>();
            } else if (key == "hotel_presence") {
                for (const auto& [f, p] : v.items()) c.hotel_presence[f] = p.get<double>();
            } else if (key == "budget_presence") {
                for (const auto& [f, p] : v.items()) c.budget_presence[f] = p.get<double>();
            } else if (key == "p_true") c.p_true = v.get<double>();
            else if (key == "p_window_hard") c.p_window_hard = v.get<double>();
            else if (key == "flights_per_segment") c.flights_per_segment = detail::range_from_json(v);
            else if (key == "hotels_per_city") c.hotels_per_city = detail::range_from_json(v);
            else if (key == "stay_nights") c.stay_nights = detail::range_from_json(v);
            else if (key == "start_from" || key == "start_to") {
                auto d = parse_date(v.get<std::string>());
                if (!d) throw Error(ErrorKind::config_error, "expected YYYY-MM-DD", key);
                (key == "start_from" ? c.start_from : c.start_to) = *d;
            } else if (key == "flight_price_floor") c.flight_price_floor = v.get<Cents>();
            else if (key == "hotel_price_floor") c.hotel_price_floor = v.get<Cents>();
            else if (key == "price_model") c.price_model = price_model_from_json(v);
            else throw Error(ErrorKind::config_error, "unknown field", key);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::config_error, e.what(), key);
        }
    }
    c.validate();
    return base;
}

/// Sets every presence probability to `p`; with p = 0 no optional field is drawn.
inline void set_all_presence(GeneratorConfig& c, double p) {
    for (auto* m : {&c.airline_presence, &c.hotel_presence, &c.budget_presence})
        for (auto& [k, v] : *m) v = p;
}

}  // namespace ttg
