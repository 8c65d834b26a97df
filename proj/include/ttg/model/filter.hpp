#pragma once

#include "ttg/schema/rules.hpp"
#include "ttg/schema/types.hpp"

namespace ttg {

/// True when the flight alone breaks no hard airline constraint of the request.
inline bool flight_allowed(const FlightOffer& f, const TravelRequest& req) {
    const auto& ac = req.airline;
    if (ac.cabin_class && f.cabin != *ac.cabin_class) return false;
    if (ac.refundable.value_or(false) && !f.refundable) return false;
    if (ac.non_stop.value_or(false) && !f.non_stop) return false;
    if (ac.plane_type && !set_contains(*ac.plane_type, f.aircraft)) return false;
    if (ac.preferred_airlines && !set_contains(*ac.preferred_airlines, f.airline)) return false;
    if (ac.avoided_airlines && set_contains(*ac.avoided_airlines, f.airline)) return false;
    if (ac.must_not_basic_economy.value_or(false) && f.is_basic_economy) return false;
    if (ac.avoid_red_eye.value_or(false) && f.is_red_eye) return false;
    if (ac.no_mixed_cabin.value_or(false) && f.is_mixed_cabin) return false;
    // The range bounds total flight spend; one fare above its maximum can never fit.
    if (ac.price_range && f.price > ac.price_range->max) return false;
    if (f.segment >= 0 && f.segment < static_cast<int>(req.segments.size())) {
        const auto& seg = req.segments[static_cast<std::size_t>(f.segment)];
        if (const auto* w = window_for(ac.departure_window, f.segment);
            w && !w->soft && w->distance(clock_from_segment_date(seg, f.departure)) > 0)
            return false;
        if (const auto* w = window_for(ac.arrival_window, f.segment);
            w && !w->soft && w->distance(clock_from_segment_date(seg, f.arrival)) > 0)
            return false;
    }
    return true;
}

inline bool hotel_allowed(const HotelOffer& h, const TravelRequest& req) {
    const auto& hc = req.hotel;
    if (hc.price_range && !hc.price_range->contains(h.nightly_price)) return false;
    if (hc.rating_min && h.rating < *hc.rating_min) return false;
    if (hc.preferred_brands && !set_contains(*hc.preferred_brands, h.brand)) return false;
    if (hc.avoided_brands && set_contains(*hc.avoided_brands, h.brand)) return false;
    return true;
}

/// Drops offers that break a hard per-offer constraint. Soft windows never
/// remove anything; order of the surviving offers is preserved.
inline Inventory filter_offers(const TravelRequest& req, const Inventory& inv) {
    Inventory out;
    for (const auto& f : inv.flights)
        if (flight_allowed(f, req)) out.flights.push_back(f);
    for (const auto& h : inv.hotels)
        if (hotel_allowed(h, req)) out.hotels.push_back(h);
    return out;
}

}  // namespace ttg
