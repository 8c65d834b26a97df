#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace ttg {

struct Airport {
    std::string code;
    std::string city;
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const Airport&, const Airport&) = default;
};

/// The sixteen origin airports of the public Expedia fare dump.
inline std::vector<Airport> default_airports() {
    return {
        {"ATL", "Atlanta", 33.6407, -84.4277},      {"BOS", "Boston", 42.3656, -71.0096},
        {"CLT", "Charlotte", 35.2140, -80.9431},    {"DEN", "Denver", 39.8561, -104.6737},
        {"DFW", "Dallas", 32.8998, -97.0403},       {"DTW", "Detroit", 42.2162, -83.3554},
        {"EWR", "Newark", 40.6895, -74.1745},       {"IAD", "Washington", 38.9531, -77.4565},
        {"JFK", "New York", 40.6413, -73.7781},     {"LAX", "Los Angeles", 33.9416, -118.4085},
        {"LGA", "New York", 40.7769, -73.8740},     {"MIA", "Miami", 25.7959, -80.2870},
        {"OAK", "Oakland", 37.7126, -122.2197},     {"ORD", "Chicago", 41.9742, -87.9073},
        {"PHL", "Philadelphia", 39.8744, -75.2424}, {"SFO", "San Francisco", 37.6213, -122.3790},
    };
}

inline const Airport* find_airport(const std::vector<Airport>& pool, const std::string& code) {
    for (const auto& a : pool)
        if (a.code == code) return &a;
    return nullptr;
}

/// Great-circle distance in kilometres.
inline double distance_km(const Airport& a, const Airport& b) {
    constexpr double r = 6371.0;
    constexpr double rad = 3.14159265358979323846 / 180.0;
    double dlat = (b.lat - a.lat) * rad;
    double dlon = (b.lon - a.lon) * rad;
    double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
               std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * r * std::asin(std::min(1.0, std::sqrt(h)));
}

enum class DistanceBucket { short_haul, medium_haul, long_haul };

inline constexpr std::string_view to_string(DistanceBucket b) {
    switch (b) {
        case DistanceBucket::short_haul: return "short";
        case DistanceBucket::medium_haul: return "medium";
        case DistanceBucket::long_haul: return "long";
    }
    return "?";
}

inline DistanceBucket bucket_for_km(double km) {
    if (km < 1000.0) return DistanceBucket::short_haul;
    if (km < 2500.0) return DistanceBucket::medium_haul;
    return DistanceBucket::long_haul;
}

}  // namespace ttg
