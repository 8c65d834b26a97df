#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/tokenizer.hpp>
#include <json.hpp>

#include "ttg/calendar.hpp"
#include "ttg/error.hpp"
#include "ttg/generator/airports.hpp"
#include "ttg/schema/types.hpp"

namespace ttg {

struct LogNormal {
    double mu = 0.0;
    double sigma = 0.0;

    double median() const { return std::exp(mu); }
    friend bool operator==(const LogNormal&, const LogNormal&) = default;
};

struct Normal {
    double mean = 0.0;
    double sd = 0.0;

    friend bool operator==(const Normal&, const Normal&) = default;
};

inline constexpr std::array<CabinClass, 4> kCabins = {CabinClass::basic_economy, CabinClass::coach, CabinClass::business,
                                                      CabinClass::first};
inline constexpr std::array<DistanceBucket, 3> kBuckets = {DistanceBucket::short_haul, DistanceBucket::medium_haul,
                                                           DistanceBucket::long_haul};

/// Frequencies keyed by label, kept normalised to sum 1.
using Marginal = std::map<std::string, double>;

inline void normalize(Marginal& m) {
    double total = 0.0;
    for (const auto& [k, v] : m) total += v;
    if (total <= 0.0) return;
    for (auto& [k, v] : m) v /= total;
}

inline void normalize(std::vector<double>& h) {
    double total = std::accumulate(h.begin(), h.end(), 0.0);
    if (total <= 0.0) return;
    for (auto& v : h) v /= total;
}

/// Price and attribute distributions behind generated inventories. Fares are in
/// cents; durations in minutes of local clock time.
struct PriceModel {
    std::map<std::pair<CabinClass, DistanceBucket>, LogNormal> fare;
    std::map<DistanceBucket, Normal> duration;
    std::array<LogNormal, 5> hotel_nightly;  // by star rating 1..5
    std::array<double, 5> rating_weights{};
    Marginal airlines;
    Marginal brands;
    Marginal aircraft;
    std::map<CabinClass, double> cabins;
    std::vector<double> departure_hours;  // 24 bins
    std::optional<Date> date_anchor;
    std::vector<double> date_factors;  // multiplicative, tiled modulo their span

    LogNormal fare_for(CabinClass c, DistanceBucket b) const { return fare.at({c, b}); }

    double date_factor(Date d) const {
        if (!date_anchor || date_factors.empty()) return 1.0;
        auto span = static_cast<std::int64_t>(date_factors.size());
        std::int64_t i = ((d - *date_anchor) % span + span) % span;
        return date_factors[static_cast<std::size_t>(i)];
    }

    void validate() const {
        auto bad = [](const std::string& what) { throw Error(ErrorKind::config_error, what, "price_model"); };
        auto finite_ln = [&](const LogNormal& l, const std::string& what) {
            if (!std::isfinite(l.mu) || !std::isfinite(l.sigma) || l.sigma < 0) bad(what + " is not a finite distribution");
        };
        for (auto c : kCabins)
            for (auto b : kBuckets) {
                auto it = fare.find({c, b});
                if (it == fare.end()) bad("missing fare for " + std::string(to_string(c)) + "/" + std::string(to_string(b)));
                finite_ln(it->second, "fare");
            }
        for (auto b : kBuckets) {
            auto it = duration.find(b);
            if (it == duration.end() || !std::isfinite(it->second.mean) || it->second.mean <= 0 || it->second.sd < 0)
                bad("missing or invalid duration for " + std::string(to_string(b)));
        }
        for (const auto& h : hotel_nightly) finite_ln(h, "hotel price");
        auto sums_to_one = [&](double s, const std::string& what) {
            if (std::abs(s - 1.0) > 1e-6) bad(what + " must sum to 1");
        };
        sums_to_one(std::accumulate(rating_weights.begin(), rating_weights.end(), 0.0), "rating weights");
        for (const Marginal* m : {&airlines, &brands, &aircraft}) {
            double s = 0.0;
            for (const auto& [k, v] : *m) {
                if (v < 0 || !std::isfinite(v)) bad("negative frequency for " + k);
                s += v;
            }
            sums_to_one(s, "marginal");
        }
        double cs = 0.0;
        for (const auto& [k, v] : cabins) cs += v;
        sums_to_one(cs, "cabin weights");
        if (departure_hours.size() != 24) bad("departure histogram needs 24 bins");
        sums_to_one(std::accumulate(departure_hours.begin(), departure_hours.end(), 0.0), "departure histogram");
        for (double f : date_factors)
            if (!std::isfinite(f) || f <= 0) bad("date factors must be positive");
        if (!date_factors.empty() && !date_anchor) bad("date factors need an anchor date");
    }
};

inline PriceModel default_price_model() {
    PriceModel m;
    const std::array<double, 3> coach = {18000, 26000, 36000};
    const std::map<CabinClass, double> mult = {
        {CabinClass::basic_economy, 0.7}, {CabinClass::coach, 1.0}, {CabinClass::business, 3.0}, {CabinClass::first, 4.5}};
    for (auto c : kCabins)
        for (std::size_t b = 0; b < kBuckets.size(); ++b)
            m.fare[{c, kBuckets[b]}] = {std::log(coach[b] * mult.at(c)), 0.35};
    m.duration[DistanceBucket::short_haul] = {110, 25};
    m.duration[DistanceBucket::medium_haul] = {200, 35};
    m.duration[DistanceBucket::long_haul] = {330, 40};
    const std::array<double, 5> nightly = {7000, 10000, 15000, 22000, 38000};
    for (std::size_t s = 0; s < 5; ++s) m.hotel_nightly[s] = {std::log(nightly[s]), 0.3};
    m.rating_weights = {0.05, 0.15, 0.35, 0.30, 0.15};
    m.airlines = {{"AA", 0.22}, {"DL", 0.21}, {"UA", 0.19}, {"B6", 0.09},
                  {"AS", 0.08}, {"NK", 0.09}, {"F9", 0.07}, {"SY", 0.05}};
    m.brands = {{"Hilton", 0.2},  {"Marriott", 0.22}, {"Hyatt", 0.12},   {"IHG", 0.14},
                {"Wyndham", 0.1}, {"Choice", 0.1},    {"BestWestern", 0.07}, {"Accor", 0.05}};
    m.aircraft = {{"A319", 0.08}, {"A320", 0.18}, {"A321", 0.14}, {"B737", 0.12}, {"B738", 0.17},
                  {"B739", 0.08}, {"B752", 0.05}, {"B789", 0.04}, {"E175", 0.09}, {"CRJ9", 0.05}};
    m.cabins = {{CabinClass::basic_economy, 0.2}, {CabinClass::coach, 0.6}, {CabinClass::business, 0.15},
                {CabinClass::first, 0.05}};
    m.departure_hours = {0.2, 0.1, 0.1, 0.1, 0.3, 1.5, 5.5, 7.5, 7.5, 6.5, 6.0, 6.0,
                         6.0, 6.0, 6.0, 6.0, 6.0, 6.0, 5.5, 5.0, 4.0, 2.5, 1.5, 0.6};
    normalize(m.departure_hours);
    return m;
}

namespace detail {

inline nlohmann::json marginal_json(const Marginal& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j;
}

inline Marginal marginal_from(const nlohmann::json& j) {
    Marginal m;
    for (const auto& [k, v] : j.items()) m[k] = v.get<double>();
    return m;
}

inline std::optional<DistanceBucket> parse_bucket(std::string_view s) {
    for (auto b : kBuckets)
        if (to_string(b) == s) return b;
    return std::nullopt;
}

}  // namespace detail

inline nlohmann::json to_json(const PriceModel& m) {
    using nlohmann::json;
    json fares = json::object();
    for (const auto& [key, ln] : m.fare)
        fares[std::string(to_string(key.first))][std::string(to_string(key.second))] = {{"mu", ln.mu}, {"sigma", ln.sigma}};
    json dur = json::object();
    for (const auto& [b, n] : m.duration) dur[std::string(to_string(b))] = {{"mean", n.mean}, {"sd", n.sd}};
    json hotel = json::array();
    for (const auto& ln : m.hotel_nightly) hotel.push_back({{"mu", ln.mu}, {"sigma", ln.sigma}});
    json cabins = json::object();
    for (const auto& [c, v] : m.cabins) cabins[std::string(to_string(c))] = v;
    json j = {{"fare", fares},
              {"duration", dur},
              {"hotel_nightly", hotel},
              {"rating_weights", m.rating_weights},
              {"airlines", detail::marginal_json(m.airlines)},
              {"brands", detail::marginal_json(m.brands)},
              {"aircraft", detail::marginal_json(m.aircraft)},
              {"cabins", cabins},
              {"departure_hours", m.departure_hours}};
    if (m.date_anchor) {
        j["date_anchor"] = format_date(*m.date_anchor);
        j["date_factors"] = m.date_factors;
    }
    return j;
}

inline PriceModel price_model_from_json(const nlohmann::json& j) {
    PriceModel m = default_price_model();
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "fare") {
                for (const auto& [c, per] : value.items()) {
                    auto cabin = parse_cabin(c);
                    if (!cabin) throw Error(ErrorKind::config_error, "unknown cabin " + c, "price_model.fare");
                    for (const auto& [b, ln] : per.items()) {
                        auto bucket = detail::parse_bucket(b);
                        if (!bucket) throw Error(ErrorKind::config_error, "unknown bucket " + b, "price_model.fare");
                        m.fare[{*cabin, *bucket}] = {ln.at("mu").get<double>(), ln.at("sigma").get<double>()};
                    }
                }
            } else if (key == "duration") {
                for (const auto& [b, n] : value.items()) {
                    auto bucket = detail::parse_bucket(b);
                    if (!bucket) throw Error(ErrorKind::config_error, "unknown bucket " + b, "price_model.duration");
                    m.duration[*bucket] = {n.at("mean").get<double>(), n.at("sd").get<double>()};
                }
            } else if (key == "hotel_nightly") {
                if (!value.is_array() || value.size() != 5)
                    throw Error(ErrorKind::config_error, "expected 5 entries", "price_model.hotel_nightly");
                for (std::size_t s = 0; s < 5; ++s)
                    m.hotel_nightly[s] = {value[s].at("mu").get<double>(), value[s].at("sigma").get<double>()};
            } else if (key == "rating_weights") {
                m.rating_weights = value.get<std::array<double, 5>>();
            } else if (key == "airlines") {
                m.airlines = detail::marginal_from(value);
            } else if (key == "brands") {
                m.brands = detail::marginal_from(value);
            } else if (key == "aircraft") {
                m.aircraft = detail::marginal_from(value);
            } else if (key == "cabins") {
                m.cabins.clear();
                for (const auto& [c, v] : value.items()) {
                    auto cabin = parse_cabin(c);
                    if (!cabin) throw Error(ErrorKind::config_error, "unknown cabin " + c, "price_model.cabins");
                    m.cabins[*cabin] = v.get<double>();
                }
            } else if (key == "departure_hours") {
                m.departure_hours = value.get<std::vector<double>>();
            } else if (key == "date_anchor") {
                m.date_anchor = parse_date(value.get<std::string>());
                if (!m.date_anchor) throw Error(ErrorKind::config_error, "bad date", "price_model.date_anchor");
            } else if (key == "date_factors") {
                m.date_factors = value.get<std::vector<double>>();
            } else {
                throw Error(ErrorKind::config_error, "unknown field", "price_model." + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::config_error, e.what(), "price_model");
    }
    m.validate();
    return m;
}

struct BucketStats {
    CabinClass cabin = CabinClass::coach;
    DistanceBucket bucket = DistanceBucket::short_haul;
    std::size_t rows = 0;
    double log_mean = 0.0;
    double log_sd = 0.0;
};

struct IngestSummary {
    std::size_t rows = 0;
    std::size_t used = 0;
    std::size_t skipped = 0;
    std::vector<BucketStats> buckets;
};

struct IngestResult {
    PriceModel model;
    IngestSummary summary;
};

inline nlohmann::json to_json(const IngestSummary& s) {
    nlohmann::json buckets = nlohmann::json::array();
    for (const auto& b : s.buckets)
        buckets.push_back({{"cabin", to_string(b.cabin)},
                           {"bucket", to_string(b.bucket)},
                           {"rows", b.rows},
                           {"log_mean", b.log_mean},
                           {"log_sd", b.log_sd}});
    return {{"rows", s.rows}, {"used", s.used}, {"skipped", s.skipped}, {"buckets", buckets}};
}

namespace detail {

using CsvRow = std::vector<std::string>;

inline CsvRow split_csv(const std::string& line) {
    boost::tokenizer<boost::escaped_list_separator<char>> tok(line);
    return CsvRow(tok.begin(), tok.end());
}

/// First and last legs of a "||"-joined multi-leg field.
inline std::string first_leg(const std::string& s) { return s.substr(0, s.find("||")); }
inline std::string last_leg(const std::string& s) {
    auto p = s.rfind("||");
    return p == std::string::npos ? s : s.substr(p + 2);
}

/// Local time and UTC offset (minutes) of "YYYY-MM-DDTHH:MM[:SS[.fff]][+-HH:MM]".
inline std::optional<std::pair<DateTime, int>> parse_csv_time(const std::string& s) {
    if (s.size() < 16) return std::nullopt;
    auto local = parse_datetime(s.substr(0, 16));
    if (!local) return std::nullopt;
    int offset = 0;
    auto tail = s.substr(16);
    auto sign = tail.find_first_of("+-");
    if (sign != std::string::npos && tail.size() >= sign + 6) {
        try {
            int hh = std::stoi(tail.substr(sign + 1, 2));
            int mm = std::stoi(tail.substr(sign + 4, 2));
            offset = (tail[sign] == '-' ? -1 : 1) * (hh * 60 + mm);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return std::make_pair(*local, offset);
}

inline std::optional<CabinClass> csv_cabin(std::string s, bool basic) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (basic) return CabinClass::basic_economy;
    if (s == "coach" || s == "premium coach" || s == "economy") return CabinClass::coach;
    if (s == "business") return CabinClass::business;
    if (s == "first") return CabinClass::first;
    if (s == "basic_economy" || s == "basic economy") return CabinClass::basic_economy;
    return std::nullopt;
}

}  // namespace detail

/// Fits a PriceModel from a flight-price CSV. Columns are found by header name
/// (Expedia dump names or plain ones); extra columns are ignored. Rows with
/// unusable fares, times or routes are counted as skipped.
inline IngestResult ingest_flight_csv(const std::string& path, const std::vector<Airport>& pool = default_airports()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open " + path, "csv");
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::empty_data, "no header row in " + path, "csv");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = detail::split_csv(line);
    auto column = [&](std::initializer_list<std::string_view> names) -> int {
        for (auto n : names)
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == n) return static_cast<int>(i);
        return -1;
    };
    const int c_origin = column({"origin", "startingAirport"});
    const int c_dest = column({"destination", "destinationAirport"});
    const int c_cabin = column({"cabin", "segmentsCabinCode"});
    const int c_fare = column({"fare", "totalFare"});
    const int c_dep = column({"departure", "segmentsDepartureTimeRaw"});
    const int c_arr = column({"arrival", "segmentsArrivalTimeRaw"});
    const int c_basic = column({"is_basic_economy", "isBasicEconomy"});
    const int c_airline = column({"airline", "segmentsAirlineCode"});
    const int c_aircraft = column({"aircraft", "segmentsEquipmentDescription"});
    for (auto [idx, name] : {std::pair{c_origin, "origin"}, {c_dest, "destination"}, {c_cabin, "cabin"},
                             {c_fare, "fare"}, {c_dep, "departure"}, {c_arr, "arrival"}})
        if (idx < 0) throw Error(ErrorKind::empty_data, std::string("missing column ") + name, "csv");

    struct Acc {
        std::vector<double> logs;
    };
    std::map<std::pair<CabinClass, DistanceBucket>, Acc> fares;
    std::map<DistanceBucket, std::vector<double>> durations;
    std::map<CabinClass, double> cabins;
    Marginal airlines, aircraft;
    std::vector<double> hours(24, 0.0);
    std::map<std::int64_t, std::pair<double, int>> per_day;  // day -> (sum fare, count)

    IngestSummary summary;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++summary.rows;
        detail::CsvRow row;
        try {
            row = detail::split_csv(line);
        } catch (const std::exception&) {
            ++summary.skipped;
            continue;
        }
        auto cell = [&](int i) -> std::string { return i >= 0 && i < static_cast<int>(row.size()) ? row[static_cast<std::size_t>(i)] : std::string(); };
        const Airport* o = find_airport(pool, cell(c_origin));
        const Airport* d = find_airport(pool, cell(c_dest));
        double fare = 0.0;
        try {
            std::size_t used = 0;
            auto text = cell(c_fare);
            fare = std::stod(text, &used);
            if (used != text.size()) fare = -1.0;
        } catch (const std::exception&) {
            fare = -1.0;
        }
        auto dep = detail::parse_csv_time(detail::first_leg(cell(c_dep)));
        auto arr = detail::parse_csv_time(detail::last_leg(cell(c_arr)));
        std::string basic = cell(c_basic);
        auto cabin = detail::csv_cabin(detail::first_leg(cell(c_cabin)), basic == "True" || basic == "true" || basic == "1");
        if (!o || !d || o == d || !(fare > 0.0) || !std::isfinite(fare) || !dep || !arr || !cabin) {
            ++summary.skipped;
            continue;
        }
        std::int64_t minutes = (arr->first - dep->first) - (arr->second - dep->second);
        if (minutes <= 0) {
            ++summary.skipped;
            continue;
        }
        ++summary.used;
        auto bucket = bucket_for_km(distance_km(*o, *d));
        double cents = std::round(fare * 100.0);
        fares[{*cabin, bucket}].logs.push_back(std::log(cents));
        // Durations are kept in local clock minutes, matching how offers are laid out.
        durations[bucket].push_back(static_cast<double>(arr->first - dep->first));
        cabins[*cabin] += 1.0;
        if (c_airline >= 0 && !cell(c_airline).empty()) airlines[detail::first_leg(cell(c_airline))] += 1.0;
        if (c_aircraft >= 0 && !cell(c_aircraft).empty()) aircraft[detail::first_leg(cell(c_aircraft))] += 1.0;
        hours[static_cast<std::size_t>(dep->first.minute_of_day() / 60)] += 1.0;
        auto& day = per_day[dep->first.date().days];
        day.first += cents;
        day.second += 1;
    }
    if (summary.used == 0) throw Error(ErrorKind::empty_data, "no usable rows in " + path, "csv");

    PriceModel m = default_price_model();
    for (const auto& [key, acc] : fares) {
        double n = static_cast<double>(acc.logs.size());
        double mean = std::accumulate(acc.logs.begin(), acc.logs.end(), 0.0) / n;
        double var = 0.0;
        for (double v : acc.logs) var += (v - mean) * (v - mean);
        double sd = acc.logs.size() > 1 ? std::sqrt(var / n) : m.fare.at(key).sigma;
        m.fare[key] = {mean, sd};
        summary.buckets.push_back({key.first, key.second, acc.logs.size(), mean, sd});
    }
    for (const auto& [bucket, xs] : durations) {
        double n = static_cast<double>(xs.size());
        double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
        double var = 0.0;
        for (double v : xs) var += (v - mean) * (v - mean);
        m.duration[bucket] = {mean, xs.size() > 1 ? std::sqrt(var / n) : m.duration.at(bucket).sd};
    }
    for (auto c : kCabins) cabins.try_emplace(c, 0.0);
    double cabin_total = 0.0;
    for (const auto& [c, v] : cabins) cabin_total += v;
    for (auto& [c, v] : cabins) v /= cabin_total;
    m.cabins = cabins;
    if (!airlines.empty()) {
        normalize(airlines);
        m.airlines = airlines;
    }
    if (!aircraft.empty()) {
        normalize(aircraft);
        m.aircraft = aircraft;
    }
    normalize(hours);
    m.departure_hours = hours;
    if (per_day.size() > 1) {
        double total = 0.0;
        int count = 0;
        for (const auto& [day, v] : per_day) {
            total += v.first;
            count += v.second;
        }
        double overall = total / count;
        std::int64_t first = per_day.begin()->first;
        std::int64_t last = per_day.rbegin()->first;
        m.date_anchor = Date{static_cast<std::int32_t>(first)};
        m.date_factors.assign(static_cast<std::size_t>(last - first + 1), 1.0);
        for (const auto& [day, v] : per_day)
            m.date_factors[static_cast<std::size_t>(day - first)] = (v.first / v.second) / overall;
    }
    m.validate();
    return {std::move(m), std::move(summary)};
}

}  // namespace ttg
