#pragma once

#include <initializer_list>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ttg/error.hpp"
#include "ttg/schema/rules.hpp"
#include "ttg/schema/types.hpp"

namespace ttg {

using json = nlohmann::json;

namespace detail {

/// Walks a JSON object while tracking the field path, rejecting unknown keys.
class FieldReader {
public:
    FieldReader(const json& obj, std::string path, std::initializer_list<std::string_view> allowed)
        : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) fail(path_.empty() ? "$" : path_, "expected an object");
        for (const auto& [key, value] : obj_.items()) {
            bool known = false;
            for (auto a : allowed) known = known || a == key;
            if (!known) fail(join(key), "unknown field");
        }
    }

    bool has(std::string_view key) const { return obj_.contains(key); }
    const json& raw(std::string_view key) const { return obj_.at(std::string(key)); }
    std::string join(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

    const json& require(std::string_view key) const {
        if (!has(key)) fail(join(key), "required field missing");
        return raw(key);
    }

    std::string string(std::string_view key) const {
        const auto& v = require(key);
        if (!v.is_string()) fail(join(key), "expected a string");
        return v.get<std::string>();
    }
    std::int64_t integer(std::string_view key) const { return as_integer(require(key), join(key)); }
    bool boolean(std::string_view key) const {
        const auto& v = require(key);
        if (!v.is_boolean()) fail(join(key), "expected a boolean");
        return v.get<bool>();
    }

    std::optional<std::int64_t> opt_integer(std::string_view key) const {
        if (!has(key)) return std::nullopt;
        return integer(key);
    }
    std::optional<bool> opt_boolean(std::string_view key) const {
        if (!has(key)) return std::nullopt;
        return boolean(key);
    }

    static std::int64_t as_integer(const json& v, const std::string& path) {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        return v.get<std::int64_t>();
    }

    [[noreturn]] static void fail(const std::string& path, const std::string& msg) {
        throw Error(ErrorKind::schema_violation, msg, path);
    }

private:
    const json& obj_;
    std::string path_;
};

inline bool valid_city_code(std::string_view c) {
    if (c.size() != 3) return false;
    for (char ch : c)
        if (ch < 'A' || ch > 'Z') return false;
    return true;
}

inline Date read_date(const FieldReader& r, std::string_view key) {
    auto s = r.string(key);
    auto d = parse_date(s);
    if (!d) FieldReader::fail(r.join(key), "expected a YYYY-MM-DD date");
    return *d;
}

inline DateTime read_datetime(const FieldReader& r, std::string_view key) {
    auto s = r.string(key);
    auto d = parse_datetime(s);
    if (!d) FieldReader::fail(r.join(key), "expected a YYYY-MM-DDTHH:MM timestamp");
    return *d;
}

inline CodeSet read_set(const json& v, const std::string& path) {
    if (!v.is_array()) FieldReader::fail(path, "expected an array of strings");
    CodeSet out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) FieldReader::fail(path + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(v[i].get<std::string>());
    }
    if (out.empty()) FieldReader::fail(path, "set must not be empty");
    normalize_set(out);
    return out;
}

inline PriceRange read_range(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) FieldReader::fail(path, "expected [min, max]");
    PriceRange r{FieldReader::as_integer(v[0], path + "[0]"), FieldReader::as_integer(v[1], path + "[1]")};
    return r;
}

inline std::vector<TimeWindow> read_windows(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) FieldReader::fail(path, "expected a non-empty array of windows");
    std::vector<TimeWindow> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        FieldReader r(v[i], path + "[" + std::to_string(i) + "]", {"segment", "earliest", "latest", "soft"});
        TimeWindow w;
        w.segment = static_cast<int>(r.integer("segment"));
        w.earliest = static_cast<int>(r.integer("earliest"));
        w.latest = static_cast<int>(r.integer("latest"));
        w.soft = r.has("soft") ? r.boolean("soft") : true;
        out.push_back(w);
    }
    std::sort(out.begin(), out.end(), [](const TimeWindow& a, const TimeWindow& b) { return a.segment < b.segment; });
    return out;
}

inline void check_schema_version(const FieldReader& r) {
    if (r.has("schema_version") && r.integer("schema_version") != kSchemaVersion)
        FieldReader::fail(r.join("schema_version"), "unsupported schema version");
}

inline json range_json(const PriceRange& r) { return json::array({r.min, r.max}); }

inline json windows_json(const std::vector<TimeWindow>& ws) {
    json arr = json::array();
    for (const auto& w : ws)
        arr.push_back({{"segment", w.segment}, {"earliest", w.earliest}, {"latest", w.latest}, {"soft", w.soft}});
    return arr;
}

}  // namespace detail

/// Checks every TravelRequest invariant; throws SchemaViolation naming the field.
inline void validate(const TravelRequest& req) {
    using detail::FieldReader;
    if (req.segments.empty()) FieldReader::fail("segments", "at least one segment is required");
    for (std::size_t k = 0; k < req.segments.size(); ++k) {
        const auto& s = req.segments[k];
        std::string p = "segments[" + std::to_string(k) + "]";
        if (!detail::valid_city_code(s.origin)) FieldReader::fail(p + ".origin", "expected a 3-letter uppercase code");
        if (!detail::valid_city_code(s.destination))
            FieldReader::fail(p + ".destination", "expected a 3-letter uppercase code");
        if (s.origin == s.destination) FieldReader::fail(p + ".destination", "origin and destination coincide");
        if (k > 0) {
            const auto& prev = req.segments[k - 1];
            if (prev.destination != s.origin) FieldReader::fail(p + ".origin", "segments do not chain");
            if (s.date < prev.date) FieldReader::fail(p + ".date", "segment dates must be non-decreasing");
        }
    }
    const int n_seg = static_cast<int>(req.segments.size());
    const auto& a = req.airline;
    if (a.price_range && (a.price_range->min < 0 || a.price_range->min > a.price_range->max))
        FieldReader::fail("airline_constraints.price_range", "need 0 <= min <= max");
    auto check_windows = [&](const std::optional<std::vector<TimeWindow>>& ws, const std::string& path, int max_clock) {
        if (!ws) return;
        if (ws->empty()) FieldReader::fail(path, "window list must not be empty");
        for (std::size_t i = 0; i < ws->size(); ++i) {
            const auto& w = (*ws)[i];
            std::string p = path + "[" + std::to_string(i) + "]";
            if (w.segment < 0 || w.segment >= n_seg) FieldReader::fail(p + ".segment", "segment index out of range");
            if (i > 0 && (*ws)[i - 1].segment == w.segment) FieldReader::fail(p + ".segment", "duplicate segment window");
            if (w.earliest < 0 || w.latest > max_clock || w.earliest > w.latest)
                FieldReader::fail(p, "need 0 <= earliest <= latest <= " + std::to_string(max_clock));
        }
    };
    check_windows(a.departure_window, "airline_constraints.departure_window", kMinutesPerDay - 1);
    check_windows(a.arrival_window, "airline_constraints.arrival_window", 2 * kMinutesPerDay - 1);
    auto check_set = [](const std::optional<CodeSet>& s, const std::string& path) {
        if (s && s->empty()) FieldReader::fail(path, "set must not be empty");
    };
    check_set(a.plane_type, "airline_constraints.plane_type");
    check_set(a.preferred_airlines, "airline_constraints.preferred_airlines");
    check_set(a.avoided_airlines, "airline_constraints.avoided_airlines");
    if (a.preferred_airlines && a.avoided_airlines) {
        for (const auto& c : *a.preferred_airlines)
            if (set_contains(*a.avoided_airlines, c))
                FieldReader::fail("airline_constraints.avoided_airlines", "airline " + c + " is both preferred and avoided");
    }
    const auto& h = req.hotel;
    if (h.price_range && (h.price_range->min < 0 || h.price_range->min > h.price_range->max))
        FieldReader::fail("hotel_constraints.price_range", "need 0 <= min <= max");
    if (h.rating_min && (*h.rating_min < 1 || *h.rating_min > 5))
        FieldReader::fail("hotel_constraints.rating_min", "rating must be in 1..5");
    check_set(h.preferred_brands, "hotel_constraints.preferred_brands");
    check_set(h.avoided_brands, "hotel_constraints.avoided_brands");
    if (h.preferred_brands && h.avoided_brands) {
        for (const auto& b : *h.preferred_brands)
            if (set_contains(*h.avoided_brands, b))
                FieldReader::fail("hotel_constraints.avoided_brands", "brand " + b + " is both preferred and avoided");
    }
    auto positive = [](const std::optional<Cents>& v, const char* path) {
        if (v && *v <= 0) FieldReader::fail(path, "budget must be positive");
    };
    positive(req.budget.total_budget, "budget.total_budget");
    positive(req.budget.flight_total_budget, "budget.flight_total_budget");
    positive(req.budget.hotel_total_budget, "budget.hotel_total_budget");
    positive(req.budget.hotel_daily_budget, "budget.hotel_daily_budget");
}

inline TravelRequest request_from_json(const json& j) {
    using detail::FieldReader;
    FieldReader root(j, "",
                     {"schema_version", "request_id", "segments", "airline_constraints", "hotel_constraints", "budget"});
    detail::check_schema_version(root);
    TravelRequest req;
    if (root.has("request_id")) req.request_id = root.string("request_id");
    const auto& segs = root.require("segments");
    if (!segs.is_array()) FieldReader::fail("segments", "expected an array");
    for (std::size_t k = 0; k < segs.size(); ++k) {
        FieldReader r(segs[k], "segments[" + std::to_string(k) + "]", {"origin", "destination", "date"});
        req.segments.push_back({r.string("origin"), r.string("destination"), detail::read_date(r, "date")});
    }
    if (root.has("airline_constraints")) {
        FieldReader r(root.raw("airline_constraints"), "airline_constraints",
                      {"price_range", "departure_window", "arrival_window", "cabin_class", "refundable", "non_stop",
                       "plane_type", "preferred_airlines", "avoided_airlines", "must_not_basic_economy", "avoid_red_eye",
                       "no_mixed_cabin"});
        auto& a = req.airline;
        if (r.has("price_range")) a.price_range = detail::read_range(r.raw("price_range"), r.join("price_range"));
        if (r.has("departure_window"))
            a.departure_window = detail::read_windows(r.raw("departure_window"), r.join("departure_window"));
        if (r.has("arrival_window"))
            a.arrival_window = detail::read_windows(r.raw("arrival_window"), r.join("arrival_window"));
        if (r.has("cabin_class")) {
            auto c = parse_cabin(r.string("cabin_class"));
            if (!c) FieldReader::fail(r.join("cabin_class"), "unknown cabin class");
            a.cabin_class = c;
        }
        a.refundable = r.opt_boolean("refundable");
        a.non_stop = r.opt_boolean("non_stop");
        if (r.has("plane_type")) a.plane_type = detail::read_set(r.raw("plane_type"), r.join("plane_type"));
        if (r.has("preferred_airlines"))
            a.preferred_airlines = detail::read_set(r.raw("preferred_airlines"), r.join("preferred_airlines"));
        if (r.has("avoided_airlines"))
            a.avoided_airlines = detail::read_set(r.raw("avoided_airlines"), r.join("avoided_airlines"));
        a.must_not_basic_economy = r.opt_boolean("must_not_basic_economy");
        a.avoid_red_eye = r.opt_boolean("avoid_red_eye");
        a.no_mixed_cabin = r.opt_boolean("no_mixed_cabin");
    }
    if (root.has("hotel_constraints")) {
        FieldReader r(root.raw("hotel_constraints"), "hotel_constraints",
                      {"price_range", "rating_min", "preferred_brands", "avoided_brands"});
        auto& h = req.hotel;
        if (r.has("price_range")) h.price_range = detail::read_range(r.raw("price_range"), r.join("price_range"));
        if (auto v = r.opt_integer("rating_min")) h.rating_min = static_cast<int>(*v);
        if (r.has("preferred_brands"))
            h.preferred_brands = detail::read_set(r.raw("preferred_brands"), r.join("preferred_brands"));
        if (r.has("avoided_brands"))
            h.avoided_brands = detail::read_set(r.raw("avoided_brands"), r.join("avoided_brands"));
    }
    if (root.has("budget")) {
        FieldReader r(root.raw("budget"), "budget",
                      {"total_budget", "flight_total_budget", "hotel_total_budget", "hotel_daily_budget"});
        req.budget.total_budget = r.opt_integer("total_budget");
        req.budget.flight_total_budget = r.opt_integer("flight_total_budget");
        req.budget.hotel_total_budget = r.opt_integer("hotel_total_budget");
        req.budget.hotel_daily_budget = r.opt_integer("hotel_daily_budget");
    }
    validate(req);
    return req;
}

inline json to_json(const TravelRequest& req) {
    json segs = json::array();
    for (const auto& s : req.segments)
        segs.push_back({{"origin", s.origin}, {"destination", s.destination}, {"date", format_date(s.date)}});
    json a = json::object();
    const auto& ac = req.airline;
    if (ac.price_range) a["price_range"] = detail::range_json(*ac.price_range);
    if (ac.departure_window) a["departure_window"] = detail::windows_json(*ac.departure_window);
    if (ac.arrival_window) a["arrival_window"] = detail::windows_json(*ac.arrival_window);
    if (ac.cabin_class) a["cabin_class"] = std::string(to_string(*ac.cabin_class));
    if (ac.refundable) a["refundable"] = *ac.refundable;
    if (ac.non_stop) a["non_stop"] = *ac.non_stop;
    if (ac.plane_type) a["plane_type"] = *ac.plane_type;
    if (ac.preferred_airlines) a["preferred_airlines"] = *ac.preferred_airlines;
    if (ac.avoided_airlines) a["avoided_airlines"] = *ac.avoided_airlines;
    if (ac.must_not_basic_economy) a["must_not_basic_economy"] = *ac.must_not_basic_economy;
    if (ac.avoid_red_eye) a["avoid_red_eye"] = *ac.avoid_red_eye;
    if (ac.no_mixed_cabin) a["no_mixed_cabin"] = *ac.no_mixed_cabin;
    json h = json::object();
    const auto& hc = req.hotel;
    if (hc.price_range) h["price_range"] = detail::range_json(*hc.price_range);
    if (hc.rating_min) h["rating_min"] = *hc.rating_min;
    if (hc.preferred_brands) h["preferred_brands"] = *hc.preferred_brands;
    if (hc.avoided_brands) h["avoided_brands"] = *hc.avoided_brands;
    json b = json::object();
    const auto& bc = req.budget;
    if (bc.total_budget) b["total_budget"] = *bc.total_budget;
    if (bc.flight_total_budget) b["flight_total_budget"] = *bc.flight_total_budget;
    if (bc.hotel_total_budget) b["hotel_total_budget"] = *bc.hotel_total_budget;
    if (bc.hotel_daily_budget) b["hotel_daily_budget"] = *bc.hotel_daily_budget;
    return json{{"schema_version", kSchemaVersion},
                {"request_id", req.request_id},
                {"segments", segs},
                {"airline_constraints", a},
                {"hotel_constraints", h},
                {"budget", b}};
}

inline json parse_json_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::malformed_json, e.what());
    }
}

/// Parses and validates a request document.
inline TravelRequest parse_request(std::string_view json_text) { return request_from_json(parse_json_text(json_text)); }

inline std::string serialize(const TravelRequest& req) { return to_json(req).dump(); }

/// Validates offer-level invariants of an inventory against a request (segment
/// indices) and the red-eye rule.
inline void validate(const Inventory& inv, const TravelRequest* request = nullptr, const RedEyeRule& red_eye = {}) {
    using detail::FieldReader;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < inv.flights.size(); ++i) {
        const auto& f = inv.flights[i];
        std::string p = "flights[" + std::to_string(i) + "]";
        if (f.id.empty() || !ids.insert(f.id).second) FieldReader::fail(p + ".id", "ids must be unique and non-empty");
        if (!(f.departure < f.arrival)) FieldReader::fail(p + ".arrival", "arrival must follow departure");
        if (f.price <= 0) FieldReader::fail(p + ".price", "price must be positive");
        if (f.segment < 0 || (request && f.segment >= static_cast<int>(request->segments.size())))
            FieldReader::fail(p + ".segment", "segment index out of range");
        if (f.is_red_eye != red_eye(f.departure, f.arrival))
            FieldReader::fail(p + ".is_red_eye", "flag disagrees with departure/arrival times");
    }
    for (std::size_t i = 0; i < inv.hotels.size(); ++i) {
        const auto& h = inv.hotels[i];
        std::string p = "hotels[" + std::to_string(i) + "]";
        if (h.id.empty() || !ids.insert(h.id).second) FieldReader::fail(p + ".id", "ids must be unique and non-empty");
        if (!detail::valid_city_code(h.city)) FieldReader::fail(p + ".city", "expected a 3-letter uppercase code");
        if (h.rating < 1 || h.rating > 5) FieldReader::fail(p + ".rating", "rating must be in 1..5");
        if (h.nightly_price <= 0) FieldReader::fail(p + ".nightly_price", "price must be positive");
        if (h.checkin < 0 || h.checkin >= kMinutesPerDay || h.checkout < 0 || h.checkout >= kMinutesPerDay)
            FieldReader::fail(p, "check-in/out must be clock minutes");
        if (h.available_to < h.available_from) FieldReader::fail(p + ".available_to", "empty availability");
    }
}

inline Inventory inventory_from_json(const json& j, const TravelRequest* request = nullptr) {
    using detail::FieldReader;
    FieldReader root(j, "", {"schema_version", "flights", "hotels"});
    detail::check_schema_version(root);
    Inventory inv;
    const auto& flights = root.require("flights");
    if (!flights.is_array()) FieldReader::fail("flights", "expected an array");
    for (std::size_t i = 0; i < flights.size(); ++i) {
        FieldReader r(flights[i], "flights[" + std::to_string(i) + "]",
                      {"id", "segment", "airline", "flight_number", "cabin", "price", "departure", "arrival", "non_stop",
                       "aircraft", "refundable", "is_basic_economy", "is_red_eye", "is_mixed_cabin"});
        FlightOffer f;
        f.id = r.string("id");
        f.segment = static_cast<int>(r.integer("segment"));
        f.airline = r.string("airline");
        f.flight_number = r.string("flight_number");
        auto c = parse_cabin(r.string("cabin"));
        if (!c) FieldReader::fail(r.join("cabin"), "unknown cabin class");
        f.cabin = *c;
        f.price = r.integer("price");
        f.departure = detail::read_datetime(r, "departure");
        f.arrival = detail::read_datetime(r, "arrival");
        f.non_stop = r.boolean("non_stop");
        f.aircraft = r.string("aircraft");
        f.refundable = r.boolean("refundable");
        f.is_basic_economy = r.boolean("is_basic_economy");
        f.is_red_eye = r.boolean("is_red_eye");
        f.is_mixed_cabin = r.boolean("is_mixed_cabin");
        inv.flights.push_back(std::move(f));
    }
    const auto& hotels = root.require("hotels");
    if (!hotels.is_array()) FieldReader::fail("hotels", "expected an array");
    for (std::size_t i = 0; i < hotels.size(); ++i) {
        FieldReader r(hotels[i], "hotels[" + std::to_string(i) + "]",
                      {"id", "city", "name", "brand", "rating", "nightly_price", "checkin", "checkout", "available_from",
                       "available_to"});
        HotelOffer h;
        h.id = r.string("id");
        h.city = r.string("city");
        h.name = r.has("name") ? r.string("name") : h.id;
        h.brand = r.string("brand");
        h.rating = static_cast<int>(r.integer("rating"));
        h.nightly_price = r.integer("nightly_price");
        h.checkin = static_cast<int>(r.integer("checkin"));
        h.checkout = static_cast<int>(r.integer("checkout"));
        h.available_from = detail::read_date(r, "available_from");
        h.available_to = detail::read_date(r, "available_to");
        inv.hotels.push_back(std::move(h));
    }
    validate(inv, request);
    return inv;
}

inline Inventory parse_inventory(std::string_view json_text, const TravelRequest* request = nullptr) {
    return inventory_from_json(parse_json_text(json_text), request);
}

inline json to_json(const FlightOffer& f) {
    return {{"id", f.id},
            {"segment", f.segment},
            {"airline", f.airline},
            {"flight_number", f.flight_number},
            {"cabin", std::string(to_string(f.cabin))},
            {"price", f.price},
            {"departure", format_datetime(f.departure)},
            {"arrival", format_datetime(f.arrival)},
            {"non_stop", f.non_stop},
            {"aircraft", f.aircraft},
            {"refundable", f.refundable},
            {"is_basic_economy", f.is_basic_economy},
            {"is_red_eye", f.is_red_eye},
            {"is_mixed_cabin", f.is_mixed_cabin}};
}

inline json to_json(const HotelOffer& h) {
    return {{"id", h.id},
            {"city", h.city},
            {"name", h.name},
            {"brand", h.brand},
            {"rating", h.rating},
            {"nightly_price", h.nightly_price},
            {"checkin", h.checkin},
            {"checkout", h.checkout},
            {"available_from", format_date(h.available_from)},
            {"available_to", format_date(h.available_to)}};
}

inline json to_json(const Inventory& inv) {
    json flights = json::array();
    for (const auto& f : inv.flights) flights.push_back(to_json(f));
    json hotels = json::array();
    for (const auto& h : inv.hotels) hotels.push_back(to_json(h));
    return {{"schema_version", kSchemaVersion}, {"flights", flights}, {"hotels", hotels}};
}

inline std::string serialize(const Inventory& inv) { return to_json(inv).dump(); }

inline json to_json(const Itinerary& it) {
    json stays = json::array();
    for (const auto& s : it.hotel_stays)
        stays.push_back({{"hotel", s.hotel_id},
                         {"check_in", format_date(s.check_in)},
                         {"check_out", format_date(s.check_out)}});
    return {{"schema_version", kSchemaVersion},
            {"chosen_flights", it.chosen_flights},
            {"hotel_stays", stays},
            {"flight_cost", it.flight_cost},
            {"hotel_cost", it.hotel_cost},
            {"total_cost", it.total_cost},
            {"objective_kind", std::string(to_string(it.objective_kind))},
            {"objective_value", it.objective_value}};
}

inline Itinerary itinerary_from_json(const json& j) {
    using detail::FieldReader;
    FieldReader root(j, "",
                     {"schema_version", "chosen_flights", "hotel_stays", "flight_cost", "hotel_cost", "total_cost",
                      "objective_kind", "objective_value"});
    detail::check_schema_version(root);
    Itinerary it;
    const auto& flights = root.require("chosen_flights");
    if (!flights.is_array()) FieldReader::fail("chosen_flights", "expected an array");
    for (std::size_t i = 0; i < flights.size(); ++i) {
        if (!flights[i].is_string()) FieldReader::fail("chosen_flights[" + std::to_string(i) + "]", "expected a string");
        it.chosen_flights.push_back(flights[i].get<std::string>());
    }
    const auto& stays = root.require("hotel_stays");
    if (!stays.is_array()) FieldReader::fail("hotel_stays", "expected an array");
    for (std::size_t i = 0; i < stays.size(); ++i) {
        FieldReader r(stays[i], "hotel_stays[" + std::to_string(i) + "]", {"hotel", "check_in", "check_out"});
        it.hotel_stays.push_back({r.string("hotel"), detail::read_date(r, "check_in"), detail::read_date(r, "check_out")});
    }
    it.flight_cost = root.integer("flight_cost");
    it.hotel_cost = root.integer("hotel_cost");
    it.total_cost = root.integer("total_cost");
    if (root.has("objective_kind")) {
        auto k = parse_objective_kind(root.string("objective_kind"));
        if (!k) FieldReader::fail("objective_kind", "unknown objective kind");
        it.objective_kind = *k;
    }
    if (root.has("objective_value")) it.objective_value = root.integer("objective_value");
    if (it.total_cost != it.flight_cost + it.hotel_cost)
        FieldReader::fail("total_cost", "total_cost must equal flight_cost + hotel_cost");
    return it;
}

inline Itinerary parse_itinerary(std::string_view json_text) { return itinerary_from_json(parse_json_text(json_text)); }

inline std::string serialize(const Itinerary& it) { return to_json(it).dump(); }

/// One line of a generated dataset.
struct DatasetRecord {
    TravelRequest request;
    Inventory inventory;
};

inline std::string serialize(const DatasetRecord& rec) {
    return json{{"request", to_json(rec.request)}, {"inventory", to_json(rec.inventory)}}.dump();
}

inline DatasetRecord parse_dataset_record(std::string_view line) {
    auto j = parse_json_text(line);
    detail::FieldReader root(j, "", {"request", "inventory"});
    DatasetRecord rec;
    rec.request = request_from_json(root.require("request"));
    rec.inventory = inventory_from_json(root.require("inventory"), &rec.request);
    return rec;
}

}  // namespace ttg
