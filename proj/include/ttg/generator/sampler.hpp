#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttg/error.hpp"
#include "ttg/generator/airports.hpp"
#include "ttg/generator/config.hpp"
#include "ttg/generator/price_model.hpp"
#include "ttg/generator/rng.hpp"
#include "ttg/schema/checker.hpp"
#include "ttg/schema/json_io.hpp"
#include "ttg/schema/rules.hpp"
#include "ttg/schema/types.hpp"

namespace ttg {

struct GeneratedInventory {
    Inventory inventory;
    Itinerary plant;
};

struct GeneratedInstance {
    TravelRequest request;
    Inventory inventory;
    Itinerary plant;
};

namespace gen {

inline constexpr int kEarliestPlantDeparture = 7 * 60;
inline constexpr int kLatestPlantArrival = 21 * 60;
inline constexpr int kMinPlantDuration = 90;

template <class Map>
std::string weighted_key(Rng& rng, const Map& m) {
    std::vector<double> w;
    for (const auto& [k, v] : m) w.push_back(v);
    int i = weighted_index(rng, w);
    auto it = m.begin();
    std::advance(it, std::max(0, i));
    return it->first;
}

/// Up to `k` distinct labels from a marginal, excluding `skip`.
inline CodeSet draw_set(Rng& rng, const Marginal& m, int k, const CodeSet& skip = {}) {
    std::vector<std::string> keys;
    std::vector<double> w;
    for (const auto& [key, v] : m) {
        keys.push_back(key);
        w.push_back(set_contains(skip, key) ? 0.0 : v);
    }
    CodeSet out;
    for (int i : weighted_sample_without_replacement(rng, w, k)) out.push_back(keys[static_cast<std::size_t>(i)]);
    normalize_set(out);
    return out;
}

inline DistanceBucket bucket_between(const GeneratorConfig& c, const std::string& from, const std::string& to) {
    const Airport* a = find_airport(c.city_pool, from);
    const Airport* b = find_airport(c.city_pool, to);
    static const auto defaults = default_airports();
    if (!a) a = find_airport(defaults, from);
    if (!b) b = find_airport(defaults, to);
    if (!a || !b) return DistanceBucket::medium_haul;
    return bucket_for_km(distance_km(*a, *b));
}

inline CabinClass typical_cabin(const TravelRequest& r) { return r.airline.cabin_class.value_or(CabinClass::coach); }

inline double typical_flight_total(const TravelRequest& r, const GeneratorConfig& c) {
    double total = 0.0;
    for (const auto& s : r.segments)
        total += c.price_model.fare_for(typical_cabin(r), bucket_between(c, s.origin, s.destination)).median();
    return total;
}

inline double typical_nightly(const TravelRequest& r, const GeneratorConfig& c) {
    int stars = std::max(3, r.hotel.rating_min.value_or(1));
    return c.price_model.hotel_nightly[static_cast<std::size_t>(stars - 1)].median();
}

inline int total_nights(const TravelRequest& r) {
    int n = 0;
    for (const auto& b : r.stay_blocks()) n += b.nights();
    return n;
}

inline int snap(int minutes, int step) { return (minutes / step) * step; }

/// Chooses which optional fields of one group are present.
inline std::vector<std::string> choose_fields(Rng& rng, const std::map<int, double>& count_weights,
                                              const std::map<std::string, double>& presence,
                                              const auto& field_order) {
    std::vector<std::string> names;
    std::vector<double> weights;
    for (auto f : field_order) {
        names.emplace_back(f);
        auto it = presence.find(std::string(f));
        weights.push_back(it == presence.end() ? 0.0 : it->second);
    }
    std::vector<std::string> out;
    if (count_weights.empty()) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (bernoulli(rng, weights[i])) out.push_back(names[i]);
        return out;
    }
    std::vector<int> counts;
    std::vector<double> cw;
    for (const auto& [k, v] : count_weights) {
        counts.push_back(k);
        cw.push_back(v);
    }
    int ci = weighted_index(rng, cw);
    int k = ci < 0 ? 0 : counts[static_cast<std::size_t>(ci)];
    for (int i : weighted_sample_without_replacement(rng, weights, k)) out.push_back(names[static_cast<std::size_t>(i)]);
    return out;
}

inline bool has(const std::vector<std::string>& v, std::string_view s) { return std::find(v.begin(), v.end(), s) != v.end(); }

inline std::vector<int> window_segments(Rng& rng, int n_seg) {
    std::vector<int> out;
    for (int k = 0; k < n_seg; ++k)
        if (bernoulli(rng, 0.5)) out.push_back(k);
    if (out.empty()) out.push_back(uniform_int(rng, 0, n_seg - 1));
    return out;
}

}  // namespace gen

/// Samples a travel request: trip shape, then which optional constraints are
/// present, then their values. Values avoid contradictions between fields.
inline TravelRequest sample_request(Rng& rng, const GeneratorConfig& c, std::string request_id = {}) {
    if (c.city_pool.size() < 3) throw Error(ErrorKind::config_error, "city pool needs at least three cities", "city_pool");
    TravelRequest r;
    r.request_id = std::move(request_id);

    const bool one_way = bernoulli(rng, c.p_one_way);
    const bool three = bernoulli(rng, c.p_three_cities);
    std::vector<const Airport*> picked;
    while (static_cast<int>(picked.size()) < (three ? 3 : 2)) {
        const Airport* a = &c.city_pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(c.city_pool.size()) - 1))];
        bool clash = false;
        for (const auto* p : picked)
            clash = clash || p->code == a->code || (!p->city.empty() && p->city == a->city);
        if (!clash) picked.push_back(a);
    }
    std::vector<std::string> route;
    for (const auto* p : picked) route.push_back(p->code);
    if (!one_way) route.push_back(route.front());
    Date date = c.start_from + uniform_int(rng, 0, c.start_to - c.start_from);
    for (std::size_t k = 0; k + 1 < route.size(); ++k) {
        if (k > 0) date = date + uniform_int(rng, c.stay_nights.lo, c.stay_nights.hi);
        r.segments.push_back({route[k], route[k + 1], date});
    }
    const int n_seg = static_cast<int>(r.segments.size());
    const auto& pm = c.price_model;

    auto airline_fields = gen::choose_fields(rng, c.airline_count_weights, c.airline_presence, kAirlineFields);
    auto& a = r.airline;
    auto flag = [&]() { return bernoulli(rng, c.p_true); };
    if (gen::has(airline_fields, "must_not_basic_economy")) a.must_not_basic_economy = flag();
    if (gen::has(airline_fields, "cabin_class")) {
        std::map<CabinClass, double> w = pm.cabins;
        if (a.must_not_basic_economy.value_or(false)) w[CabinClass::basic_economy] = 0.0;
        std::vector<double> weights;
        for (auto cab : kCabins) weights.push_back(w[cab]);
        a.cabin_class = kCabins[static_cast<std::size_t>(std::max(0, weighted_index(rng, weights)))];
    }
    if (gen::has(airline_fields, "refundable")) a.refundable = flag();
    if (gen::has(airline_fields, "non_stop")) a.non_stop = flag();
    if (gen::has(airline_fields, "avoid_red_eye")) a.avoid_red_eye = flag();
    if (gen::has(airline_fields, "no_mixed_cabin")) a.no_mixed_cabin = flag();
    if (gen::has(airline_fields, "plane_type")) a.plane_type = gen::draw_set(rng, pm.aircraft, uniform_int(rng, 1, 3));
    if (gen::has(airline_fields, "preferred_airlines"))
        a.preferred_airlines = gen::draw_set(rng, pm.airlines, uniform_int(rng, 1, 3));
    if (gen::has(airline_fields, "avoided_airlines")) {
        a.avoided_airlines = gen::draw_set(rng, pm.airlines, uniform_int(rng, 1, 2), a.preferred_airlines.value_or(CodeSet{}));
        if (a.avoided_airlines->empty()) a.avoided_airlines.reset();
    }
    const double flight_typ = gen::typical_flight_total(r, c);
    if (gen::has(airline_fields, "price_range")) {
        a.price_range = PriceRange{round_dollars(flight_typ * uniform_real(rng, 0.0, 0.6)),
                                   round_dollars(flight_typ * uniform_real(rng, 1.1, 2.2))};
    }
    std::map<int, std::pair<int, int>> dep_windows;
    if (gen::has(airline_fields, "departure_window")) {
        std::vector<TimeWindow> ws;
        for (int k : gen::window_segments(rng, n_seg)) {
            int e = 6 * 60 + 30 * uniform_int(rng, 0, 16);
            int l = std::min(22 * 60, e + 30 * uniform_int(rng, 8, 16));
            ws.push_back({k, e, l, !bernoulli(rng, c.p_window_hard)});
            dep_windows[k] = {e, l};
        }
        a.departure_window = ws;
    }
    if (gen::has(airline_fields, "arrival_window")) {
        std::vector<TimeWindow> ws;
        for (int k : gen::window_segments(rng, n_seg)) {
            const auto& s = r.segments[static_cast<std::size_t>(k)];
            int dur = static_cast<int>(pm.duration.at(gen::bucket_between(c, s.origin, s.destination)).mean);
            int e, l;
            if (auto it = dep_windows.find(k); it != dep_windows.end()) {
                e = gen::snap(it->second.first + dur - 90, 30);
                l = gen::snap(it->second.second + dur + 90 + 29, 30);
            } else {
                e = 9 * 60 + 30 * uniform_int(rng, 0, 16);
                l = e + 30 * uniform_int(rng, 8, 16);
            }
            e = std::clamp(e, 6 * 60, 21 * 60);
            l = std::clamp(l, e + 60, 22 * 60);
            ws.push_back({k, e, l, !bernoulli(rng, c.p_window_hard)});
        }
        a.arrival_window = ws;
    }

    auto hotel_fields = gen::choose_fields(rng, c.hotel_count_weights, c.hotel_presence, kHotelFields);
    auto& h = r.hotel;
    if (gen::has(hotel_fields, "rating_min")) {
        const std::vector<double> w = {0.05, 0.2, 0.45, 0.25, 0.05};
        h.rating_min = 1 + weighted_index(rng, w);
    }
    if (gen::has(hotel_fields, "preferred_brands")) h.preferred_brands = gen::draw_set(rng, pm.brands, uniform_int(rng, 1, 3));
    if (gen::has(hotel_fields, "avoided_brands")) {
        h.avoided_brands = gen::draw_set(rng, pm.brands, uniform_int(rng, 1, 2), h.preferred_brands.value_or(CodeSet{}));
        if (h.avoided_brands->empty()) h.avoided_brands.reset();
    }
    const double nightly_typ = gen::typical_nightly(r, c);
    if (gen::has(hotel_fields, "price_range")) {
        h.price_range = PriceRange{round_dollars(nightly_typ * uniform_real(rng, 0.0, 0.6)),
                                   round_dollars(nightly_typ * uniform_real(rng, 1.1, 2.2))};
    }

    const double hotel_typ = nightly_typ * std::max(1, gen::total_nights(r));
    auto present = [&](const char* f) {
        auto it = c.budget_presence.find(f);
        return bernoulli(rng, it == c.budget_presence.end() ? 0.0 : it->second);
    };
    auto& b = r.budget;
    if (present("total_budget")) b.total_budget = round_dollars((flight_typ + hotel_typ) * uniform_real(rng, 1.1, 2.2));
    if (present("flight_total_budget")) b.flight_total_budget = round_dollars(flight_typ * uniform_real(rng, 1.1, 2.2));
    if (present("hotel_total_budget")) b.hotel_total_budget = round_dollars(hotel_typ * uniform_real(rng, 1.1, 2.2));
    if (present("hotel_daily_budget")) b.hotel_daily_budget = round_dollars(nightly_typ * uniform_real(rng, 1.1, 2.2));
    validate(r);
    return r;
}

namespace gen {

struct Interval {
    int lo = 0;
    int hi = -1;
    bool empty() const { return lo > hi; }
};

/// Departure clock and duration for a compliant flight, or nothing.
inline std::optional<std::pair<int, int>> plant_timing(Rng& rng, const TimeWindow* dep, const TimeWindow* arr,
                                                       int earliest, int dmin, int dmax) {
    Interval d{std::max(kEarliestPlantDeparture, earliest), kLatestPlantArrival - dmin};
    if (dep) {
        d.lo = std::max(d.lo, dep->earliest);
        d.hi = std::min(d.hi, dep->latest);
    }
    if (arr) {
        d.lo = std::max(d.lo, arr->earliest - dmax);
        d.hi = std::min(d.hi, arr->latest - dmin);
    }
    d.lo = (d.lo + 4) / 5 * 5;
    d.hi = d.hi / 5 * 5;
    if (d.empty()) return std::nullopt;
    int departure = d.lo + 5 * uniform_int(rng, 0, (d.hi - d.lo) / 5);
    Interval u{std::max(dmin, arr ? arr->earliest - departure : dmin),
               std::min({dmax, kLatestPlantArrival - departure, arr ? arr->latest - departure : dmax})};
    u.lo = (u.lo + 4) / 5 * 5;
    u.hi = u.hi / 5 * 5;
    if (u.empty()) return std::nullopt;
    return std::make_pair(departure, u.lo + 5 * uniform_int(rng, 0, (u.hi - u.lo) / 5));
}

inline Cents ceil_dollars(Cents v) { return (v + 99) / 100 * 100; }
inline Cents floor_dollars(Cents v) { return v / 100 * 100; }

/// Lowers the values (dollar steps, largest first) until their weighted sum fits
/// `cap`, never going below `floor`. Returns false if that is impossible.
inline bool fit_under(std::vector<Cents>& values, const std::vector<int>& weights, Cents floor, Cents cap) {
    auto total = [&]() {
        Cents t = 0;
        for (std::size_t i = 0; i < values.size(); ++i) t += values[i] * weights[i];
        return t;
    };
    Cents excess = total() - cap;
    if (excess <= 0) return true;
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return values[x] > values[y]; });
    for (auto i : order) {
        if (excess <= 0) break;
        Cents room = values[i] - floor;
        Cents need = ceil_dollars((excess + weights[i] - 1) / weights[i]);
        Cents cut = std::min(room, need);
        values[i] -= cut;
        excess -= cut * weights[i];
    }
    return excess <= 0;
}

[[noreturn]] inline void infeasible(const std::string& what, const std::string& field) {
    throw Error(ErrorKind::infeasible_request, what, field);
}

inline std::string city_name(const GeneratorConfig& c, const std::string& code) {
    if (const auto* a = find_airport(c.city_pool, code); a && !a->city.empty()) return a->city;
    return code;
}

}  // namespace gen

/// Builds an inventory for `r` that contains one compliant plan (the plant)
/// among distractor offers. Throws InfeasibleRequest when no compliant plan can
/// be priced within the request's limits and the configured price floors.
inline GeneratedInventory sample_inventory(Rng& rng, const TravelRequest& r, const GeneratorConfig& c) {
    validate(r);
    const auto& pm = c.price_model;
    const auto& ac = r.airline;
    const auto& hc = r.hotel;
    const auto& bud = r.budget;
    const RedEyeRule red_eye{};
    const int n_seg = static_cast<int>(r.segments.size());

    // Plant flights.
    std::vector<FlightOffer> plant_flights;
    std::vector<Cents> flight_prices;
    int prev_arrival = -1;
    for (int k = 0; k < n_seg; ++k) {
        const auto& s = r.segments[static_cast<std::size_t>(k)];
        auto bucket = gen::bucket_between(c, s.origin, s.destination);
        const auto& dur = pm.duration.at(bucket);
        int dmin = std::max(gen::kMinPlantDuration, static_cast<int>(dur.mean - 2 * dur.sd));
        int dmax = std::max(dmin, static_cast<int>(dur.mean + 2 * dur.sd));
        int earliest = 0;
        if (k > 0 && r.segments[static_cast<std::size_t>(k - 1)].date == s.date) earliest = prev_arrival + 120;
        const auto* dw = window_for(ac.departure_window, k);
        const auto* aw = window_for(ac.arrival_window, k);
        auto timing = gen::plant_timing(rng, dw, aw, earliest, dmin, dmax);
        if (!timing) timing = gen::plant_timing(rng, dw && !dw->soft ? dw : nullptr, aw && !aw->soft ? aw : nullptr,
                                                earliest, dmin, dmax);
        if (!timing) gen::infeasible("no departure time fits the windows of segment " + std::to_string(k),
                                     "airline_constraints.departure_window");
        FlightOffer f;
        f.segment = k;
        if (ac.cabin_class) {
            f.cabin = *ac.cabin_class;
        } else {
            std::vector<double> w;
            for (auto cab : kCabins)
                w.push_back(cab == CabinClass::basic_economy && ac.must_not_basic_economy.value_or(false) ? 0.0 : pm.cabins.at(cab));
            f.cabin = kCabins[static_cast<std::size_t>(std::max(0, weighted_index(rng, w)))];
        }
        f.is_basic_economy = f.cabin == CabinClass::basic_economy;
        if (f.is_basic_economy && ac.must_not_basic_economy.value_or(false))
            gen::infeasible("cabin class basic economy is ruled out", "airline_constraints.must_not_basic_economy");
        Marginal airlines;
        if (ac.preferred_airlines) {
            for (const auto& code : *ac.preferred_airlines) {
                auto it = pm.airlines.find(code);
                airlines[code] = it == pm.airlines.end() ? 1e-3 : std::max(it->second, 1e-3);
            }
        } else {
            airlines = pm.airlines;
        }
        if (ac.avoided_airlines)
            for (const auto& code : *ac.avoided_airlines) airlines.erase(code);
        if (airlines.empty()) gen::infeasible("every airline is avoided", "airline_constraints.avoided_airlines");
        f.airline = gen::weighted_key(rng, airlines);
        if (ac.plane_type) {
            f.aircraft = (*ac.plane_type)[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(ac.plane_type->size()) - 1))];
        } else {
            f.aircraft = gen::weighted_key(rng, pm.aircraft);
        }
        f.non_stop = ac.non_stop.value_or(false) || bernoulli(rng, 0.7);
        f.refundable = ac.refundable.value_or(false) || bernoulli(rng, 0.3);
        f.is_mixed_cabin = !f.non_stop && !ac.no_mixed_cabin.value_or(false) && bernoulli(rng, 0.2);
        f.departure = at(s.date, timing->first);
        f.arrival = f.departure + timing->second;
        f.is_red_eye = red_eye(f.departure, f.arrival);
        prev_arrival = timing->first + timing->second;
        flight_prices.push_back(std::max<Cents>(
            c.flight_price_floor, round_dollars(lognormal(rng, pm.fare_for(f.cabin, bucket).mu, pm.fare_for(f.cabin, bucket).sigma) *
                                                pm.date_factor(s.date))));
        plant_flights.push_back(std::move(f));
    }

    // Plant hotels, one per away block.
    const auto blocks = r.stay_blocks();
    std::vector<HotelOffer> plant_hotels;
    std::vector<Cents> nightly;
    std::vector<int> nights;
    Cents h_lo = gen::ceil_dollars(std::max(c.hotel_price_floor, hc.price_range ? hc.price_range->min : 0));
    Cents h_hi = std::numeric_limits<Cents>::max() / 4;
    if (hc.price_range) h_hi = std::min(h_hi, hc.price_range->max);
    if (bud.hotel_daily_budget) h_hi = std::min(h_hi, *bud.hotel_daily_budget);
    h_hi = gen::floor_dollars(h_hi);
    if (!blocks.empty() && h_lo > h_hi)
        gen::infeasible("no nightly price fits between the floor and the hotel limits",
                        bud.hotel_daily_budget && *bud.hotel_daily_budget < h_lo ? "budget.hotel_daily_budget"
                                                                                  : "hotel_constraints.price_range");
    for (const auto& block : blocks) {
        HotelOffer h;
        h.city = block.city;
        int min_star = hc.rating_min.value_or(1);
        std::vector<double> w;
        for (int s = 1; s <= 5; ++s) w.push_back(s >= min_star ? pm.rating_weights[static_cast<std::size_t>(s - 1)] : 0.0);
        h.rating = 1 + std::max(0, weighted_index(rng, w));
        if (hc.rating_min && h.rating < *hc.rating_min) h.rating = *hc.rating_min;
        Marginal brands;
        if (hc.preferred_brands) {
            for (const auto& name : *hc.preferred_brands) {
                auto it = pm.brands.find(name);
                brands[name] = it == pm.brands.end() ? 1e-3 : std::max(it->second, 1e-3);
            }
        } else {
            brands = pm.brands;
        }
        if (hc.avoided_brands)
            for (const auto& name : *hc.avoided_brands) brands.erase(name);
        if (brands.empty()) gen::infeasible("every brand is avoided", "hotel_constraints.avoided_brands");
        h.brand = gen::weighted_key(rng, brands);
        h.checkin = 15 * 60;
        h.checkout = 11 * 60;
        h.available_from = *parse_date("2020-01-01");
        h.available_to = *parse_date("2035-12-31");
        const auto& ln = pm.hotel_nightly[static_cast<std::size_t>(h.rating - 1)];
        nightly.push_back(std::clamp(round_dollars(lognormal(rng, ln.mu, ln.sigma)), h_lo, h_hi));
        nights.push_back(block.nights());
        plant_hotels.push_back(std::move(h));
    }

    // Fit plant prices to the budgets.
    auto hotel_total = [&]() {
        Cents t = 0;
        for (std::size_t i = 0; i < nightly.size(); ++i) t += nightly[i] * nights[i];
        return t;
    };
    if (bud.hotel_total_budget && !gen::fit_under(nightly, nights, h_lo, gen::floor_dollars(*bud.hotel_total_budget)))
        gen::infeasible("hotel nights cannot be priced within the hotel budget", "budget.hotel_total_budget");
    Cents f_lo = gen::ceil_dollars(std::max<Cents>(static_cast<Cents>(n_seg) * c.flight_price_floor,
                                                   ac.price_range ? ac.price_range->min : 0));
    auto flight_cap = [&]() {
        Cents cap = std::numeric_limits<Cents>::max() / 4;
        if (ac.price_range) cap = std::min(cap, ac.price_range->max);
        if (bud.flight_total_budget) cap = std::min(cap, *bud.flight_total_budget);
        if (bud.total_budget) cap = std::min(cap, *bud.total_budget - hotel_total());
        return gen::floor_dollars(cap);
    };
    if (flight_cap() < f_lo && bud.total_budget) {
        Cents room = *bud.total_budget - f_lo;
        if (room < 0 || !gen::fit_under(nightly, nights, h_lo, gen::floor_dollars(room)))
            gen::infeasible("flights and hotels cannot be priced within the total budget", "budget.total_budget");
    }
    if (flight_cap() < f_lo)
        gen::infeasible("flights cannot be priced within the flight limits",
                        ac.price_range ? "airline_constraints.price_range" : "budget.flight_total_budget");
    std::vector<int> ones(flight_prices.size(), 1);
    gen::fit_under(flight_prices, ones, c.flight_price_floor, flight_cap());
    Cents f_total = 0;
    for (auto p : flight_prices) f_total += p;
    if (f_total < f_lo && !flight_prices.empty()) flight_prices.front() += f_lo - f_total;
    for (std::size_t k = 0; k < plant_flights.size(); ++k) plant_flights[k].price = flight_prices[k];
    for (std::size_t i = 0; i < plant_hotels.size(); ++i) plant_hotels[i].nightly_price = nightly[i];

    // Distractors.
    std::vector<FlightOffer> flights;
    for (int k = 0; k < n_seg; ++k) {
        const auto& s = r.segments[static_cast<std::size_t>(k)];
        auto bucket = gen::bucket_between(c, s.origin, s.destination);
        const auto& dur = pm.duration.at(bucket);
        flights.push_back(plant_flights[static_cast<std::size_t>(k)]);
        int n = uniform_int(rng, c.flights_per_segment.lo, c.flights_per_segment.hi);
        std::vector<double> cabin_w;
        for (auto cab : kCabins) cabin_w.push_back(pm.cabins.at(cab));
        for (int i = 1; i < n; ++i) {
            FlightOffer f;
            f.segment = k;
            f.cabin = kCabins[static_cast<std::size_t>(std::max(0, weighted_index(rng, cabin_w)))];
            f.is_basic_economy = f.cabin == CabinClass::basic_economy;
            f.airline = gen::weighted_key(rng, pm.airlines);
            f.aircraft = gen::weighted_key(rng, pm.aircraft);
            f.non_stop = bernoulli(rng, 0.7);
            f.refundable = bernoulli(rng, 0.3);
            f.is_mixed_cabin = !f.non_stop && bernoulli(rng, 0.2);
            int hour = std::max(0, weighted_index(rng, pm.departure_hours));
            int minute = hour * 60 + 5 * uniform_int(rng, 0, 11);
            double d = dur.mean + dur.sd * std::normal_distribution<double>(0.0, 1.0)(rng) + (f.non_stop ? 0.0 : 75.0);
            int minutes = std::max(75, static_cast<int>(std::lround(d / 5.0)) * 5);
            f.departure = at(s.date, minute);
            f.arrival = f.departure + minutes;
            f.is_red_eye = red_eye(f.departure, f.arrival);
            const auto& ln = pm.fare_for(f.cabin, bucket);
            double price = lognormal(rng, ln.mu, ln.sigma) * pm.date_factor(s.date);
            if (f.refundable) price *= 1.15;
            if (!f.non_stop) price *= 0.85;
            f.price = std::max<Cents>(c.flight_price_floor, round_dollars(price));
            flights.push_back(std::move(f));
        }
    }
    std::vector<HotelOffer> hotels = plant_hotels;
    std::vector<std::string> away;
    for (const auto& b : blocks)
        if (std::find(away.begin(), away.end(), b.city) == away.end()) away.push_back(b.city);
    std::vector<double> rating_w(pm.rating_weights.begin(), pm.rating_weights.end());
    for (const auto& city : away) {
        int planted = static_cast<int>(std::count_if(plant_hotels.begin(), plant_hotels.end(),
                                                     [&](const HotelOffer& h) { return h.city == city; }));
        int n = uniform_int(rng, c.hotels_per_city.lo, c.hotels_per_city.hi);
        Date first_night = blocks.front().check_in;
        for (const auto& b : blocks)
            if (b.city == city) {
                first_night = b.check_in;
                break;
            }
        for (int i = planted; i < n; ++i) {
            HotelOffer h;
            h.city = city;
            h.rating = 1 + std::max(0, weighted_index(rng, rating_w));
            h.brand = gen::weighted_key(rng, pm.brands);
            h.checkin = 60 * uniform_int(rng, 14, 16);
            h.checkout = 60 * uniform_int(rng, 10, 12);
            if (bernoulli(rng, 0.1)) {
                h.available_from = first_night + uniform_int(rng, -3, 3);
                h.available_to = h.available_from + uniform_int(rng, 1, 10);
            } else {
                h.available_from = *parse_date("2020-01-01");
                h.available_to = *parse_date("2035-12-31");
            }
            const auto& ln = pm.hotel_nightly[static_cast<std::size_t>(h.rating - 1)];
            h.nightly_price = std::max(c.hotel_price_floor, round_dollars(lognormal(rng, ln.mu, ln.sigma)));
            hotels.push_back(std::move(h));
        }
    }

    // Shuffle, then name offers in their final order.
    std::vector<std::size_t> flight_order(flights.size()), hotel_order(hotels.size());
    for (std::size_t i = 0; i < flight_order.size(); ++i) flight_order[i] = i;
    for (std::size_t i = 0; i < hotel_order.size(); ++i) hotel_order[i] = i;
    for (std::size_t i = flight_order.size(); i > 1; --i)
        std::swap(flight_order[i - 1], flight_order[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(i) - 1))]);
    for (std::size_t i = hotel_order.size(); i > 1; --i)
        std::swap(hotel_order[i - 1], hotel_order[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(i) - 1))]);

    GeneratedInventory out;
    std::vector<std::string> plant_flight_ids(plant_flights.size());
    std::vector<std::string> plant_hotel_ids(plant_hotels.size());
    std::map<std::string, int> per_city;
    for (std::size_t pos = 0; pos < flight_order.size(); ++pos) {
        std::size_t i = flight_order[pos];
        FlightOffer f = flights[i];
        f.id = "F" + std::to_string(pos + 1);
        f.flight_number = f.airline + std::to_string(100 + uniform_int(rng, 0, 8899));
        out.inventory.flights.push_back(std::move(f));
    }
    // Each segment's plant was pushed first among that segment's offers.
    {
        std::vector<std::size_t> first_of_segment;
        std::size_t idx = 0;
        for (int k = 0; k < n_seg; ++k) {
            first_of_segment.push_back(idx);
            while (idx < flights.size() && flights[idx].segment == k) ++idx;
        }
        for (std::size_t pos = 0; pos < flight_order.size(); ++pos)
            for (int k = 0; k < n_seg; ++k)
                if (flight_order[pos] == first_of_segment[static_cast<std::size_t>(k)])
                    plant_flight_ids[static_cast<std::size_t>(k)] = out.inventory.flights[pos].id;
    }
    for (std::size_t pos = 0; pos < hotel_order.size(); ++pos) {
        std::size_t i = hotel_order[pos];
        HotelOffer h = hotels[i];
        h.id = "H" + std::to_string(pos + 1);
        h.name = h.brand + " " + gen::city_name(c, h.city) + " " + std::to_string(++per_city[h.city]);
        if (i < plant_hotels.size()) plant_hotel_ids[i] = h.id;
        out.inventory.hotels.push_back(std::move(h));
    }

    Itinerary& p = out.plant;
    p.chosen_flights = plant_flight_ids;
    for (std::size_t b = 0; b < blocks.size(); ++b) p.hotel_stays.push_back({plant_hotel_ids[b], blocks[b].check_in, blocks[b].check_out});
    for (auto v : flight_prices) p.flight_cost += v;
    p.hotel_cost = hotel_total();
    p.total_cost = p.flight_cost + p.hotel_cost;
    p.objective_kind = ObjectiveKind::min_cost;

    validate(out.inventory, &r, red_eye);
    auto report = check_feasibility(p, r, out.inventory);
    if (!report.feasible) {
        const auto& v = report.violations.front();
        gen::infeasible("planted plan violates " + v.field + ": " + v.detail, v.field);
    }
    p.objective_value = plan_cost(p, r, out.inventory);
    return out;
}

inline std::string generated_request_id(std::uint64_t seed, std::uint64_t index) {
    return "gen-" + std::to_string(seed) + "-" + std::to_string(index);
}

/// Sample `index` of the stream seeded by `c.rng_seed`: independent of every
/// other index.
inline GeneratedInstance generate_instance(const GeneratorConfig& c, std::uint64_t index) {
    Rng rng = stream_for(c.rng_seed, index);
    GeneratedInstance g;
    g.request = sample_request(rng, c, generated_request_id(c.rng_seed, index));
    auto inv = sample_inventory(rng, g.request, c);
    g.inventory = std::move(inv.inventory);
    g.plant = std::move(inv.plant);
    return g;
}

}  // namespace ttg
