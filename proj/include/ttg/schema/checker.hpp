#pragma once

#include <string>
#include <vector>

#include "ttg/error.hpp"
#include "ttg/schema/rules.hpp"
#include "ttg/schema/types.hpp"

namespace ttg {

namespace detail {

struct ResolvedStay {
    const HotelOffer* hotel;
    Date check_in;
    Date check_out;
    std::int64_t first_slot;
    std::int64_t end_slot;
};

inline std::string money(Cents c) {
    return std::to_string(c / 100) + "." + (c % 100 < 10 ? "0" : "") + std::to_string(c % 100);
}

}  // namespace detail

/// Judges an itinerary against every hard constraint of the request and the
/// structural rules of a trip (one flight per segment, chronology, a hotel for
/// every away-night, enough evening sleep). Soft windows never produce
/// violations. All violations are collected.
inline ConstraintReport check_feasibility(const Itinerary& it, const TravelRequest& req, const Inventory& inv,
                                          const PlanningRules& rules = {}) {
    ConstraintReport report;
    auto add = [&](std::string field, std::string detail) {
        report.violations.push_back({std::move(field), std::move(detail)});
    };

    std::vector<const FlightOffer*> flights;
    for (std::size_t i = 0; i < it.chosen_flights.size(); ++i) {
        const auto* f = inv.find_flight(it.chosen_flights[i]);
        if (!f) throw Error(ErrorKind::unknown_offer, "flight " + it.chosen_flights[i] + " is not in the inventory",
                            "chosen_flights[" + std::to_string(i) + "]");
        flights.push_back(f);
    }
    std::vector<detail::ResolvedStay> stays;
    for (std::size_t i = 0; i < it.hotel_stays.size(); ++i) {
        const auto& s = it.hotel_stays[i];
        const auto* h = inv.find_hotel(s.hotel_id);
        if (!h) throw Error(ErrorKind::unknown_offer, "hotel " + s.hotel_id + " is not in the inventory",
                            "hotel_stays[" + std::to_string(i) + "]");
        stays.push_back({h, s.check_in, s.check_out, rules.stay_first_slot(*h, s.check_in),
                         rules.stay_end_slot(*h, s.check_out)});
    }

    // Structure of the flight sequence.
    const std::size_t n_seg = req.segments.size();
    bool timeline_ok = flights.size() == n_seg;
    if (flights.size() != n_seg)
        add("chosen_flights", "expected " + std::to_string(n_seg) + " flights, got " + std::to_string(flights.size()));
    for (std::size_t k = 0; k < flights.size(); ++k) {
        const auto& f = *flights[k];
        std::string p = "chosen_flights[" + std::to_string(k) + "]";
        if (f.segment != static_cast<int>(k)) {
            add(p, "offer " + f.id + " belongs to segment " + std::to_string(f.segment));
            timeline_ok = false;
            continue;
        }
        if (f.departure.date() != req.segments[k].date) {
            add(p + ".departure", "departs on " + format_date(f.departure.date()) + ", segment date is " +
                                      format_date(req.segments[k].date));
        }
        if (rules.slot_ceil(f.arrival) - rules.slot_floor(f.departure) < 2) {
            add(p, "flight spans fewer than two time slots");
            timeline_ok = false;
        }
        if (k > 0 && flights[k - 1]->segment == static_cast<int>(k - 1) &&
            rules.slot_floor(f.departure) < rules.slot_ceil(flights[k - 1]->arrival)) {
            add(p, "departs before the previous flight has landed");
            timeline_ok = false;
        }
    }

    // Reported costs.
    Cents flight_cost = 0;
    for (const auto* f : flights) flight_cost += f->price;
    Cents hotel_cost = 0;
    for (const auto& s : stays) hotel_cost += s.hotel->nightly_price * (s.check_out - s.check_in);
    if (it.flight_cost != flight_cost)
        add("flight_cost", "reported " + detail::money(it.flight_cost) + ", offers sum to " + detail::money(flight_cost));
    if (it.hotel_cost != hotel_cost)
        add("hotel_cost", "reported " + detail::money(it.hotel_cost) + ", offers sum to " + detail::money(hotel_cost));
    if (it.total_cost != flight_cost + hotel_cost)
        add("total_cost", "reported " + detail::money(it.total_cost) + ", offers sum to " +
                              detail::money(flight_cost + hotel_cost));

    // Stays against away-night blocks.
    const auto blocks = req.stay_blocks();
    std::vector<int> block_stay(blocks.size(), -1);
    for (std::size_t i = 0; i < stays.size(); ++i) {
        const auto& s = stays[i];
        std::string p = "hotel_stays[" + std::to_string(i) + "]";
        int match = -1;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            if (blocks[b].check_in == s.check_in && blocks[b].check_out == s.check_out) match = static_cast<int>(b);
        if (match < 0) {
            add(p, "dates " + format_date(s.check_in) + ".." + format_date(s.check_out) +
                       " do not match an away-night block");
            continue;
        }
        if (block_stay[static_cast<std::size_t>(match)] >= 0) {
            add(p, "second stay booked for the same nights");
            continue;
        }
        block_stay[static_cast<std::size_t>(match)] = static_cast<int>(i);
        if (s.hotel->city != blocks[static_cast<std::size_t>(match)].city)
            add(p + ".hotel", "hotel is in " + s.hotel->city + ", nights are spent in " +
                                  blocks[static_cast<std::size_t>(match)].city);
        if (!s.hotel->available(s.check_in, s.check_out)) add(p + ".hotel", "hotel not available for these dates");
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (block_stay[b] < 0)
            add("hotel_stays", "no stay for the nights " + format_date(blocks[b].check_in) + ".." +
                                   format_date(blocks[b].check_out) + " in " + blocks[b].city);
    }

    // Evening sleep along the slot timeline.
    if (timeline_ok && !blocks.empty()) {
        std::vector<std::int64_t> dep, land;
        for (const auto* f : flights) {
            dep.push_back(rules.slot_floor(f->departure));
            land.push_back(rules.slot_ceil(f->arrival));
        }
        auto location = [&](std::int64_t t) -> std::string {
            if (t <= dep[0]) return req.segments[0].origin;
            for (std::size_t k = 0; k < n_seg; ++k) {
                if (t < land[k]) return "AIR";
                if (k + 1 == n_seg || t <= dep[k + 1]) return req.segments[k].destination;
            }
            return req.segments.back().destination;
        };
        const int need = rules.sleep_slots();
        for (const auto& block : blocks) {
            for (Date night = block.check_in; night < block.check_out; night = night + 1) {
                int slept = 0;
                for (auto t : rules.evening_slots(night)) {
                    bool covered = false;
                    bool ok = true;
                    std::string here = location(t);
                    for (const auto& s : stays) {
                        if (t >= s.first_slot && t < s.end_slot) {
                            covered = true;
                            ok = ok && s.hotel->city == here;
                        }
                    }
                    slept += covered && ok;
                }
                if (slept < need)
                    add("commonsense.sleep", "only " + std::to_string(slept) + " sleep slots in the evening of " +
                                                 format_date(night) + " (need " + std::to_string(need) + ")");
            }
        }
    }

    // Budgets.
    const auto& bud = req.budget;
    if (bud.flight_total_budget && flight_cost > *bud.flight_total_budget)
        add("budget.flight_total_budget",
            "flights cost " + detail::money(flight_cost) + " > " + detail::money(*bud.flight_total_budget));
    if (bud.hotel_total_budget && hotel_cost > *bud.hotel_total_budget)
        add("budget.hotel_total_budget",
            "hotels cost " + detail::money(hotel_cost) + " > " + detail::money(*bud.hotel_total_budget));
    if (bud.total_budget && flight_cost + hotel_cost > *bud.total_budget)
        add("budget.total_budget",
            "trip costs " + detail::money(flight_cost + hotel_cost) + " > " + detail::money(*bud.total_budget));
    if (bud.hotel_daily_budget) {
        for (const auto& block : blocks) {
            for (Date night = block.check_in; night < block.check_out; night = night + 1) {
                Cents spent = 0;
                for (const auto& s : stays)
                    if (s.check_in <= night && night < s.check_out) spent += s.hotel->nightly_price;
                if (spent > *bud.hotel_daily_budget)
                    add("budget.hotel_daily_budget", "night of " + format_date(night) + " costs " +
                                                         detail::money(spent) + " > " +
                                                         detail::money(*bud.hotel_daily_budget));
            }
        }
    }

    // Airline constraints, per chosen flight.
    const auto& ac = req.airline;
    if (ac.price_range && !ac.price_range->contains(flight_cost))
        add("airline_constraints.price_range", "flight spend " + detail::money(flight_cost) + " outside [" +
                                                   detail::money(ac.price_range->min) + ", " +
                                                   detail::money(ac.price_range->max) + "]");
    for (std::size_t k = 0; k < flights.size(); ++k) {
        const auto& f = *flights[k];
        std::string who = "flight " + f.id;
        if (ac.cabin_class && f.cabin != *ac.cabin_class)
            add("airline_constraints.cabin_class", who + " is " + std::string(to_string(f.cabin)));
        if (ac.refundable.value_or(false) && !f.refundable)
            add("airline_constraints.refundable", who + " is not refundable");
        if (ac.non_stop.value_or(false) && !f.non_stop) add("airline_constraints.non_stop", who + " has stops");
        if (ac.plane_type && !set_contains(*ac.plane_type, f.aircraft))
            add("airline_constraints.plane_type", who + " flies a " + f.aircraft);
        if (ac.preferred_airlines && !set_contains(*ac.preferred_airlines, f.airline))
            add("airline_constraints.preferred_airlines", who + " is operated by " + f.airline);
        if (ac.avoided_airlines && set_contains(*ac.avoided_airlines, f.airline))
            add("airline_constraints.avoided_airlines", who + " is operated by " + f.airline);
        if (ac.must_not_basic_economy.value_or(false) && f.is_basic_economy)
            add("airline_constraints.must_not_basic_economy", who + " is basic economy");
        if (ac.avoid_red_eye.value_or(false) && f.is_red_eye) add("airline_constraints.avoid_red_eye", who + " is a red-eye");
        if (ac.no_mixed_cabin.value_or(false) && f.is_mixed_cabin)
            add("airline_constraints.no_mixed_cabin", who + " has a mixed cabin");
        if (f.segment >= 0 && f.segment < static_cast<int>(n_seg)) {
            const auto& seg = req.segments[static_cast<std::size_t>(f.segment)];
            if (const auto* w = window_for(ac.departure_window, f.segment); w && !w->soft &&
                                                                            w->distance(clock_from_segment_date(seg, f.departure)) > 0)
                add("airline_constraints.departure_window", who + " departs outside the window");
            if (const auto* w = window_for(ac.arrival_window, f.segment);
                w && !w->soft && w->distance(clock_from_segment_date(seg, f.arrival)) > 0)
                add("airline_constraints.arrival_window", who + " arrives outside the window");
        }
    }

    // Hotel constraints, per booked stay.
    const auto& hc = req.hotel;
    for (const auto& s : stays) {
        const auto& h = *s.hotel;
        std::string who = "hotel " + h.id;
        if (hc.price_range && !hc.price_range->contains(h.nightly_price))
            add("hotel_constraints.price_range", who + " costs " + detail::money(h.nightly_price) + " per night");
        if (hc.rating_min && h.rating < *hc.rating_min)
            add("hotel_constraints.rating_min", who + " is rated " + std::to_string(h.rating));
        if (hc.preferred_brands && !set_contains(*hc.preferred_brands, h.brand))
            add("hotel_constraints.preferred_brands", who + " is a " + h.brand);
        if (hc.avoided_brands && set_contains(*hc.avoided_brands, h.brand))
            add("hotel_constraints.avoided_brands", who + " is a " + h.brand);
    }

    report.feasible = report.violations.empty();
    return report;
}

/// Money cost plus the request's soft-window penalties: the quantity every
/// objective is judged by when comparing plans for the same request.
inline Cents plan_cost(const Itinerary& it, const TravelRequest& req, const Inventory& inv,
                       const PlanningRules& rules = {}) {
    Cents total = 0;
    for (const auto& id : it.chosen_flights) {
        const auto* f = inv.find_flight(id);
        if (!f) throw Error(ErrorKind::unknown_offer, "flight " + id + " is not in the inventory", "chosen_flights");
        total += f->price + soft_window_penalty(*f, req, rules);
    }
    for (const auto& s : it.hotel_stays) {
        const auto* h = inv.find_hotel(s.hotel_id);
        if (!h) throw Error(ErrorKind::unknown_offer, "hotel " + s.hotel_id + " is not in the inventory", "hotel_stays");
        total += h->nightly_price * (s.check_out - s.check_in);
    }
    return total;
}

}  // namespace ttg
