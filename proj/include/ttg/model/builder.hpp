#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ttg/model/filter.hpp"
#include "ttg/model/milp_model.hpp"
#include "ttg/schema/json_io.hpp"

namespace ttg {

namespace detail {

inline bool flight_matches_segment(const FlightOffer& f, const TravelRequest& req) {
    return f.segment >= 0 && f.segment < static_cast<int>(req.segments.size()) &&
           f.departure.date() == req.segments[static_cast<std::size_t>(f.segment)].date;
}

}  // namespace detail

/// Slot grid from midnight of the first travel date through the end of the last
/// travel date, extended when a flight lands later than that.
inline TimeGrid make_time_grid(const TravelRequest& req, const Inventory& inv, const PlanningRules& rules) {
    rules.validate();
    TimeGrid g;
    g.slot_minutes = rules.slot_minutes;
    g.origin_slot = rules.slot_floor(at(req.segments.front().date, 0));
    std::int64_t end = rules.slot_ceil(at(req.segments.back().date + 1, 0));
    for (const auto& f : inv.flights)
        if (detail::flight_matches_segment(f, req)) end = std::max(end, rules.slot_ceil(f.arrival) + 1);
    g.T = static_cast<int>(end - g.origin_slot);
    for (const auto& block : req.stay_blocks()) {
        for (Date night = block.check_in; night < block.check_out; night = night + 1) {
            std::vector<int> slots;
            for (auto s : rules.evening_slots(night)) {
                int t = g.rel(s);
                if (t >= 0 && t < g.T) slots.push_back(t);
            }
            g.nights.push_back(night);
            g.evening.push_back(std::move(slots));
        }
    }
    return g;
}

namespace detail {

inline double flight_coefficient(const FlightOffer& f, const TravelRequest& req, const ObjectiveSpec& obj,
                                 const PlanningRules& rules) {
    Cents pen = soft_window_penalty(f, req, rules);
    switch (obj.kind) {
        case ObjectiveKind::min_cost: return static_cast<double>(f.price + pen);
        case ObjectiveKind::better_hotel: return 1000.0 * static_cast<double>(f.price + pen);
        case ObjectiveKind::better_flight: {
            std::int64_t lam = obj.flight_weight_permille;
            std::int64_t bonus = lam * (obj.flight_quality_cents / 3) * cabin_rank(f.cabin);
            return static_cast<double>((1000 - lam) * f.price + 1000 * pen - bonus);
        }
    }
    return 0.0;
}

inline double stay_coefficient(const HotelOffer& h, const CandidateStay& s, const ObjectiveSpec& obj) {
    switch (obj.kind) {
        case ObjectiveKind::min_cost: return static_cast<double>(s.cost);
        case ObjectiveKind::better_flight: return 1000.0 * static_cast<double>(s.cost);
        case ObjectiveKind::better_hotel: {
            std::int64_t lam = obj.hotel_weight_permille;
            std::int64_t bonus = lam * (obj.hotel_quality_cents / 4) * (s.check_out - s.check_in) * (h.rating - 1);
            return static_cast<double>((1000 - lam) * s.cost - bonus);
        }
    }
    return 0.0;
}

}  // namespace detail

/// Compiles a request and an already filtered inventory into the time-indexed
/// MILP. Flights whose departure date differs from their segment date get no
/// variable.
inline MilpModel build_model(const TravelRequest& req, const Inventory& inv, const ObjectiveSpec& objective,
                             const TimeGrid& grid, const PlanningRules& rules = {}) {
    rules.validate();
    objective.validate();
    validate(req);

    MilpModel model;
    model.request = req;
    model.inventory = inv;
    model.objective_spec = objective;
    model.rules = rules;
    model.grid = grid;
    model.sleep_slots = rules.sleep_slots();
    model.blocks = req.stay_blocks();
    model.locations = req.cities();
    model.locations.emplace_back("AIR");

    const int n_seg = static_cast<int>(req.segments.size());
    const int T = grid.T;
    const int n_loc = static_cast<int>(model.locations.size());
    auto loc_index = [&](const std::string& city) {
        return static_cast<int>(std::find(model.locations.begin(), model.locations.end(), city) -
                                model.locations.begin());
    };

    model.segment_flights.assign(static_cast<std::size_t>(n_seg), {});
    for (std::size_t j = 0; j < inv.flights.size(); ++j)
        if (detail::flight_matches_segment(inv.flights[j], req))
            model.segment_flights[static_cast<std::size_t>(inv.flights[j].segment)].push_back(static_cast<int>(j));
    for (int k = 0; k < n_seg; ++k)
        if (model.segment_flights[static_cast<std::size_t>(k)].empty())
            throw Error(ErrorKind::empty_segment, "no candidate flight survives filtering",
                        "segments[" + std::to_string(k) + "]");

    std::vector<int> t_dep(inv.flights.size(), -1), t_land(inv.flights.size(), -1);
    for (const auto& list : model.segment_flights) {
        for (int j : list) {
            const auto& f = inv.flights[static_cast<std::size_t>(j)];
            t_dep[static_cast<std::size_t>(j)] = grid.rel(rules.slot_floor(f.departure));
            t_land[static_cast<std::size_t>(j)] = grid.rel(rules.slot_ceil(f.arrival));
            if (t_land[static_cast<std::size_t>(j)] - t_dep[static_cast<std::size_t>(j)] < 2)
                throw Error(ErrorKind::grid_too_coarse,
                            "flight " + f.id + " spans fewer than two " + std::to_string(rules.slot_minutes) +
                                "-minute slots",
                            "slot_minutes");
            if (t_land[static_cast<std::size_t>(j)] >= T)
                throw Error(ErrorKind::invalid_argument, "grid ends before flight " + f.id + " lands", "grid");
        }
    }

    // Candidate stays: one per (hotel, away-night block) in the block's city.
    model.block_stays.assign(model.blocks.size(), {});
    for (std::size_t b = 0; b < model.blocks.size(); ++b) {
        const auto& block = model.blocks[b];
        for (std::size_t h = 0; h < inv.hotels.size(); ++h) {
            const auto& hotel = inv.hotels[h];
            if (hotel.city != block.city || !hotel.available(block.check_in, block.check_out)) continue;
            CandidateStay s;
            s.hotel = static_cast<int>(h);
            s.block = static_cast<int>(b);
            s.check_in = block.check_in;
            s.check_out = block.check_out;
            s.cost = hotel.nightly_price * block.nights();
            s.first_slot = std::max(0, grid.rel(rules.stay_first_slot(hotel, block.check_in)));
            s.end_slot = std::min(T, grid.rel(rules.stay_end_slot(hotel, block.check_out)));
            model.block_stays[b].push_back(static_cast<int>(model.stays.size()));
            model.stays.push_back(s);
        }
    }

    // Variables.
    model.u_base = 0;
    for (int t = 0; t < T; ++t)
        for (int l = 0; l < n_loc; ++l)
            model.add_binary("u_" + model.locations[static_cast<std::size_t>(l)] + "_t" + std::to_string(t),
                             VarRole::location, l, t);
    model.m_base = model.num_vars();
    for (int t = 0; t < T; ++t) model.add_binary("m_t" + std::to_string(t), VarRole::sleep, -1, t);
    model.e_base = model.num_vars();
    for (int t = 0; t < T; ++t) model.add_binary("e_t" + std::to_string(t), VarRole::event, -1, t);
    model.flight_var.assign(inv.flights.size(), -1);
    for (const auto& list : model.segment_flights)
        for (int j : list)
            model.flight_var[static_cast<std::size_t>(j)] =
                model.add_binary("f_" + std::to_string(j), VarRole::flight, j);
    for (std::size_t s = 0; s < model.stays.size(); ++s)
        model.stay_var.push_back(model.add_binary("h_" + std::to_string(s), VarRole::hotel, static_cast<int>(s)));

    // Objective.
    for (std::size_t j = 0; j < inv.flights.size(); ++j)
        if (model.flight_var[j] >= 0)
            model.objective[static_cast<std::size_t>(model.flight_var[j])] =
                detail::flight_coefficient(inv.flights[j], req, objective, rules);
    for (std::size_t s = 0; s < model.stays.size(); ++s)
        model.objective[static_cast<std::size_t>(model.stay_var[s])] = detail::stay_coefficient(
            inv.hotels[static_cast<std::size_t>(model.stays[s].hotel)], model.stays[s], objective);

    // Commonsense: start at home, one location per slot, moves only on events.
    model.add_row("home_start", {{model.u(loc_index(req.home()), 0), 1.0}}, Sense::eq, 1.0);
    for (int t = 0; t < T; ++t) {
        std::vector<Term> terms;
        for (int l = 0; l < n_loc; ++l) terms.push_back({model.u(l, t), 1.0});
        model.add_row("one_hot_t" + std::to_string(t), std::move(terms), Sense::eq, 1.0);
    }
    for (int t = 0; t + 1 < T; ++t) {
        for (int l = 0; l < n_loc; ++l) {
            std::string suffix = model.locations[static_cast<std::size_t>(l)] + "_t" + std::to_string(t);
            model.add_row("stay_put_up_" + suffix, {{model.u(l, t + 1), 1.0}, {model.u(l, t), -1.0}, {model.e(t), -1.0}},
                          Sense::le, 0.0);
            model.add_row("stay_put_down_" + suffix,
                          {{model.u(l, t), 1.0}, {model.u(l, t + 1), -1.0}, {model.e(t), -1.0}}, Sense::le, 0.0);
        }
    }
    std::vector<std::vector<Term>> event_terms(static_cast<std::size_t>(T));
    for (const auto& list : model.segment_flights) {
        for (int j : list) {
            int fv = model.flight_var[static_cast<std::size_t>(j)];
            event_terms[static_cast<std::size_t>(t_dep[static_cast<std::size_t>(j)])].push_back({fv, -1.0});
            if (t_land[static_cast<std::size_t>(j)] - 1 != t_dep[static_cast<std::size_t>(j)])
                event_terms[static_cast<std::size_t>(t_land[static_cast<std::size_t>(j)] - 1)].push_back({fv, -1.0});
        }
    }
    for (int t = 0; t < T; ++t) {
        auto terms = event_terms[static_cast<std::size_t>(t)];
        terms.insert(terms.begin(), Term{model.e(t), 1.0});
        model.add_row("event_t" + std::to_string(t), std::move(terms), Sense::le, 0.0);
    }
    for (std::size_t n = 0; n < grid.nights.size(); ++n) {
        std::vector<Term> terms;
        for (int t : grid.evening[n]) terms.push_back({model.m(t), 1.0});
        model.add_row("sleep_night" + std::to_string(n), std::move(terms), Sense::ge,
                      static_cast<double>(model.sleep_slots));
    }

    // Flights: taking f_j pins the traveller's location and the two events.
    const int air = model.air();
    for (int k = 0; k < n_seg; ++k) {
        const auto& seg = req.segments[static_cast<std::size_t>(k)];
        int src = loc_index(seg.origin);
        int dst = loc_index(seg.destination);
        std::vector<Term> pick;
        for (int j : model.segment_flights[static_cast<std::size_t>(k)]) {
            int fv = model.flight_var[static_cast<std::size_t>(j)];
            int td = t_dep[static_cast<std::size_t>(j)];
            int tl = t_land[static_cast<std::size_t>(j)];
            std::string p = "f" + std::to_string(j);
            add_conditional_equality(model, {fv}, model.u(src, td), 1.0, p + "_at_origin");
            add_conditional_equality(model, {fv}, model.u(air, td + 1), 1.0, p + "_airborne");
            add_conditional_equality(model, {fv}, model.u(dst, tl), 1.0, p + "_at_destination");
            add_conditional_equality(model, {fv}, model.u(air, tl - 1), 1.0, p + "_landing");
            add_conditional_equality(model, {fv}, model.e(td), 1.0, p + "_departs");
            add_conditional_equality(model, {fv}, model.e(tl - 1), 1.0, p + "_arrives");
            pick.push_back({fv, 1.0});
        }
        model.add_row("segment_" + std::to_string(k), std::move(pick), Sense::eq, 1.0);
    }
    for (int k = 0; k + 1 < n_seg; ++k) {
        std::vector<Term> terms;
        for (int j : model.segment_flights[static_cast<std::size_t>(k + 1)])
            terms.push_back({model.flight_var[static_cast<std::size_t>(j)],
                             static_cast<double>(t_dep[static_cast<std::size_t>(j)])});
        for (int j : model.segment_flights[static_cast<std::size_t>(k)])
            terms.push_back({model.flight_var[static_cast<std::size_t>(j)],
                             -static_cast<double>(t_land[static_cast<std::size_t>(j)])});
        model.add_row("order_" + std::to_string(k), std::move(terms), Sense::ge, 0.0);
    }

    // Hotels: sleeping under a booked stay requires being in its city.
    std::vector<std::vector<Term>> cover(static_cast<std::size_t>(T));
    for (std::size_t s = 0; s < model.stays.size(); ++s) {
        const auto& stay = model.stays[s];
        int l = loc_index(inv.hotels[static_cast<std::size_t>(stay.hotel)].city);
        int hv = model.stay_var[s];
        for (int t = stay.first_slot; t < stay.end_slot; ++t) {
            add_conditional_less_equal(model, {hv}, model.m(t), model.u(l, t),
                                       "h" + std::to_string(s) + "_t" + std::to_string(t));
            cover[static_cast<std::size_t>(t)].push_back({hv, -1.0});
        }
    }
    for (int t = 0; t < T; ++t) {
        auto terms = cover[static_cast<std::size_t>(t)];
        terms.insert(terms.begin(), Term{model.m(t), 1.0});
        model.add_row("sleep_cover_t" + std::to_string(t), std::move(terms), Sense::le, 0.0);
    }
    for (std::size_t b = 0; b < model.blocks.size(); ++b) {
        std::vector<Term> terms;
        for (int s : model.block_stays[b]) terms.push_back({model.stay_var[static_cast<std::size_t>(s)], 1.0});
        model.add_row("block_" + std::to_string(b), std::move(terms), Sense::eq, 1.0);
    }

    // Budgets.
    auto flight_spend = [&] {
        std::vector<Term> terms;
        for (std::size_t j = 0; j < inv.flights.size(); ++j)
            if (model.flight_var[j] >= 0)
                terms.push_back({model.flight_var[j], static_cast<double>(inv.flights[j].price)});
        return terms;
    };
    auto hotel_spend = [&] {
        std::vector<Term> terms;
        for (std::size_t s = 0; s < model.stays.size(); ++s)
            terms.push_back({model.stay_var[s], static_cast<double>(model.stays[s].cost)});
        return terms;
    };
    const auto& bud = req.budget;
    if (bud.flight_total_budget)
        model.add_row("flight_total_budget", flight_spend(), Sense::le, static_cast<double>(*bud.flight_total_budget));
    if (bud.hotel_total_budget)
        model.add_row("hotel_total_budget", hotel_spend(), Sense::le, static_cast<double>(*bud.hotel_total_budget));
    if (bud.hotel_daily_budget) {
        for (std::size_t n = 0; n < grid.nights.size(); ++n) {
            std::vector<Term> terms;
            for (std::size_t s = 0; s < model.stays.size(); ++s) {
                const auto& stay = model.stays[s];
                if (stay.check_in <= grid.nights[n] && grid.nights[n] < stay.check_out)
                    terms.push_back({model.stay_var[s],
                                     static_cast<double>(inv.hotels[static_cast<std::size_t>(stay.hotel)].nightly_price)});
            }
            model.add_row("hotel_daily_budget_night" + std::to_string(n), std::move(terms), Sense::le,
                          static_cast<double>(*bud.hotel_daily_budget));
        }
    }
    if (bud.total_budget) {
        auto terms = flight_spend();
        auto hotels = hotel_spend();
        terms.insert(terms.end(), hotels.begin(), hotels.end());
        model.add_row("total_budget", std::move(terms), Sense::le, static_cast<double>(*bud.total_budget));
    }
    if (req.airline.price_range) {
        model.add_row("flight_price_min", flight_spend(), Sense::ge, static_cast<double>(req.airline.price_range->min));
        model.add_row("flight_price_max", flight_spend(), Sense::le, static_cast<double>(req.airline.price_range->max));
    }
    return model;
}

inline MilpModel build_model(const TravelRequest& req, const Inventory& inv, const ObjectiveSpec& objective,
                             const PlanningRules& rules = {}) {
    return build_model(req, inv, objective, make_time_grid(req, inv, rules), rules);
}

/// Filter, then build.
inline MilpModel compile(const TravelRequest& req, const Inventory& inv, const ObjectiveSpec& objective,
                         const PlanningRules& rules = {}) {
    return build_model(req, filter_offers(req, inv), objective, rules);
}

/// Like compile, but halves the slot length (down to `min_slot_minutes`) while
/// some flight is too short for the grid. The rules actually used are left in
/// the returned model.
inline MilpModel compile_with_retry(const TravelRequest& req, const Inventory& inv, const ObjectiveSpec& objective,
                                    PlanningRules rules = {}, int min_slot_minutes = 15) {
    while (true) {
        try {
            return compile(req, inv, objective, rules);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::grid_too_coarse || rules.slot_minutes / 2 < min_slot_minutes ||
                rules.slot_minutes % 2 != 0)
                throw;
            rules.slot_minutes /= 2;
        }
    }
}

}  // namespace ttg
