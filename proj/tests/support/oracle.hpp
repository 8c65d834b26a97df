#pragma once

#include <limits>
#include <optional>

#include "ttg/model/milp_model.hpp"
#include "ttg/schema/checker.hpp"

namespace ttg::testing {

/// Objective of an itinerary computed straight from offer data, written
/// independently of the model builder.
inline std::int64_t oracle_objective(const Itinerary& it, const TravelRequest& req, const Inventory& inv,
                                     const ObjectiveSpec& obj, const PlanningRules& rules) {
    std::int64_t total = 0;
    for (const auto& id : it.chosen_flights) {
        const auto& f = *inv.find_flight(id);
        Cents pen = soft_window_penalty(f, req, rules);
        if (obj.kind == ObjectiveKind::min_cost) total += f.price + pen;
        else if (obj.kind == ObjectiveKind::better_hotel) total += 1000 * (f.price + pen);
        else {
            std::int64_t lam = obj.flight_weight_permille;
            total += (1000 - lam) * f.price + 1000 * pen - lam * (obj.flight_quality_cents / 3) * cabin_rank(f.cabin);
        }
    }
    for (const auto& s : it.hotel_stays) {
        const auto& h = *inv.find_hotel(s.hotel_id);
        std::int64_t nights = s.check_out - s.check_in;
        std::int64_t cost = h.nightly_price * nights;
        if (obj.kind == ObjectiveKind::min_cost) total += cost;
        else if (obj.kind == ObjectiveKind::better_flight) total += 1000 * cost;
        else {
            std::int64_t lam = obj.hotel_weight_permille;
            total += (1000 - lam) * cost - lam * (obj.hotel_quality_cents / 4) * nights * (h.rating - 1);
        }
    }
    return total;
}

struct OracleResult {
    std::optional<std::int64_t> best;
    std::optional<Itinerary> plan;
    long feasible_count = 0;
};

/// Enumerates every (flight per segment, hotel per away-night block)
/// combination, keeps the ones the checker accepts and returns the best.
inline OracleResult brute_force(const TravelRequest& req, const Inventory& inv, const ObjectiveSpec& obj,
                                const PlanningRules& rules = {}) {
    OracleResult out;
    const auto blocks = req.stay_blocks();
    std::vector<std::vector<const FlightOffer*>> per_seg(req.segments.size());
    for (const auto& f : inv.flights)
        if (f.segment >= 0 && f.segment < static_cast<int>(req.segments.size())) per_seg[f.segment].push_back(&f);
    std::vector<std::vector<const HotelOffer*>> per_block(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (const auto& h : inv.hotels)
            if (h.city == blocks[b].city) per_block[b].push_back(&h);
    for (const auto& list : per_seg)
        if (list.empty()) return out;
    for (const auto& list : per_block)
        if (list.empty()) return out;

    std::vector<std::size_t> fi(per_seg.size(), 0), hi(per_block.size(), 0);
    while (true) {
        Itinerary it;
        for (std::size_t k = 0; k < fi.size(); ++k) {
            it.chosen_flights.push_back(per_seg[k][fi[k]]->id);
            it.flight_cost += per_seg[k][fi[k]]->price;
        }
        for (std::size_t b = 0; b < hi.size(); ++b) {
            const auto* h = per_block[b][hi[b]];
            it.hotel_stays.push_back({h->id, blocks[b].check_in, blocks[b].check_out});
            it.hotel_cost += h->nightly_price * blocks[b].nights();
        }
        it.total_cost = it.flight_cost + it.hotel_cost;
        if (check_feasibility(it, req, inv, rules).feasible) {
            ++out.feasible_count;
            auto v = oracle_objective(it, req, inv, obj, rules);
            if (!out.best || v < *out.best) {
                out.best = v;
                it.objective_kind = obj.kind;
                it.objective_value = v;
                out.plan = it;
            }
        }
        // odometer over hotels, then flights
        std::size_t p = 0;
        for (; p < hi.size(); ++p) {
            if (++hi[p] < per_block[p].size()) break;
            hi[p] = 0;
        }
        if (p < hi.size()) continue;
        std::size_t q = 0;
        for (; q < fi.size(); ++q) {
            if (++fi[q] < per_seg[q].size()) break;
            fi[q] = 0;
        }
        if (q == fi.size()) break;
    }
    return out;
}

}  // namespace ttg::testing
