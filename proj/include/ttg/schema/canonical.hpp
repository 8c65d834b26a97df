#pragma once

#include <set>
#include <string>
#include <vector>

#include "ttg/schema/json_io.hpp"

namespace ttg {

/// Deterministic normal form of a request: sorted keys, sorted sets, absent
/// optionals dropped, money in cents and clock times in minutes.
struct CanonicalForm {
    std::string text;

    friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
};

inline CanonicalForm canonicalize(const TravelRequest& request) {
    // to_json already emits sorted keys (std::map), sorted sets and omits absent fields.
    return {to_json(request).dump()};
}

/// Leaf field paths whose values differ between two requests. The request id is
/// metadata and never compared. Set-valued fields compare as sets.
inline std::vector<std::string> differing_fields(const TravelRequest& x, const TravelRequest& y) {
    std::vector<std::string> out;
    if (x.segments.size() != y.segments.size()) {
        out.emplace_back("segments");
    } else {
        for (std::size_t k = 0; k < x.segments.size(); ++k) {
            const auto& a = x.segments[k];
            const auto& b = y.segments[k];
            std::string p = "segments[" + std::to_string(k) + "]";
            if (a.origin != b.origin) out.push_back(p + ".origin");
            if (a.destination != b.destination) out.push_back(p + ".destination");
            if (a.date != b.date) out.push_back(p + ".date");
        }
    }
    json jx = to_json(x);
    json jy = to_json(y);
    for (const char* group : {"airline_constraints", "hotel_constraints", "budget"}) {
        std::set<std::string> keys;
        for (const auto& [k, v] : jx[group].items()) keys.insert(k);
        for (const auto& [k, v] : jy[group].items()) keys.insert(k);
        for (const auto& k : keys) {
            bool in_x = jx[group].contains(k);
            bool in_y = jy[group].contains(k);
            if (in_x != in_y || jx[group][k] != jy[group][k]) out.push_back(std::string(group) + "." + k);
        }
    }
    return out;
}

inline int airline_constraint_count(const TravelRequest& r) { return r.airline.count(); }
inline int hotel_constraint_count(const TravelRequest& r) { return r.hotel.count(); }

}  // namespace ttg
