#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "ttg/schema/json_io.hpp"

namespace ttg::testing {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string data_path(const std::string& name) { return std::string(TTG_DATA_DIR) + "/" + name; }

inline TravelRequest den_mia_jfk_request() { return parse_request(read_file(data_path("den_mia_jfk_request.json"))); }

inline Inventory den_mia_jfk_inventory() {
    auto req = den_mia_jfk_request();
    return parse_inventory(read_file(data_path("den_mia_jfk_inventory.json")), &req);
}

inline Date day(const char* iso) { return *parse_date(iso); }
inline DateTime when(const char* iso) { return *parse_datetime(iso); }

inline FlightOffer flight(std::string id, int segment, const char* dep, const char* arr, Cents price,
                          CabinClass cabin = CabinClass::coach) {
    FlightOffer f;
    f.id = std::move(id);
    f.segment = segment;
    f.airline = "UA";
    f.flight_number = "UA1";
    f.cabin = cabin;
    f.price = price;
    f.departure = when(dep);
    f.arrival = when(arr);
    f.aircraft = "A320";
    f.is_basic_economy = cabin == CabinClass::basic_economy;
    f.is_red_eye = RedEyeRule{}(f.departure, f.arrival);
    return f;
}

inline HotelOffer hotel(std::string id, std::string city, Cents nightly, int rating = 3, std::string brand = "Hilton") {
    HotelOffer h;
    h.id = std::move(id);
    h.city = std::move(city);
    h.name = h.id;
    h.brand = std::move(brand);
    h.rating = rating;
    h.nightly_price = nightly;
    h.available_from = day("2020-01-01");
    h.available_to = day("2030-01-01");
    return h;
}

inline TravelRequest trip(std::initializer_list<std::tuple<const char*, const char*, const char*>> legs) {
    TravelRequest r;
    r.request_id = "t";
    for (const auto& [o, d, date] : legs) r.segments.push_back({o, d, day(date)});
    return r;
}

}  // namespace ttg::testing
