#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "ttg/schema/canonical.hpp"
#include "ttg/schema/checker.hpp"

using namespace ttg;
using namespace ttg::testing;

namespace {

ErrorKind kind_of(const std::function<void()>& f, std::string* field = nullptr) {
    try {
        f();
    } catch (const Error& e) {
        if (field) *field = e.field();
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::invalid_argument;
}

Itinerary itinerary(std::vector<std::string> flights, std::vector<HotelStay> stays, const Inventory& inv) {
    Itinerary it;
    it.chosen_flights = std::move(flights);
    it.hotel_stays = std::move(stays);
    for (const auto& id : it.chosen_flights) it.flight_cost += inv.find_flight(id)->price;
    for (const auto& s : it.hotel_stays) it.hotel_cost += inv.find_hotel(s.hotel_id)->nightly_price * (s.check_out - s.check_in);
    it.total_cost = it.flight_cost + it.hotel_cost;
    return it;
}

}  // namespace

TEST(ParseRequest, DenMiaJfkRequest) {
    auto req = den_mia_jfk_request();
    ASSERT_EQ(req.segments.size(), 3u);
    EXPECT_EQ(req.segments[0].origin, "DEN");
    EXPECT_EQ(req.segments[1].origin, "MIA");
    EXPECT_EQ(req.segments[2].destination, "DEN");
    EXPECT_EQ(format_date(req.segments[1].date), "2025-01-17");
    EXPECT_EQ(req.airline.cabin_class, CabinClass::coach);
    EXPECT_EQ(req.airline.non_stop, true);
    EXPECT_EQ(req.airline.must_not_basic_economy, true);
    EXPECT_EQ(req.airline.no_mixed_cabin, true);
    EXPECT_EQ(req.budget.flight_total_budget, 138300);
    EXPECT_EQ(req.budget.hotel_daily_budget, 31700);
    EXPECT_EQ(req.budget.hotel_total_budget, 95200);
    EXPECT_EQ(req.airline.count(), 4);
    EXPECT_EQ(req.hotel.count(), 0);
    EXPECT_EQ(req.city_count(), 3);
}

TEST(ParseRequest, EmptyObjectMissesSegments) {
    std::string field;
    EXPECT_EQ(kind_of([] { parse_request("{}"); }, &field), ErrorKind::schema_violation);
    EXPECT_EQ(field, "segments");
}

TEST(ParseRequest, DecreasingDatesRejected) {
    const char* text = R"({"segments":[{"origin":"DEN","destination":"MIA","date":"2025-01-17"},
                                      {"origin":"MIA","destination":"DEN","date":"2025-01-15"}]})";
    std::string field;
    EXPECT_EQ(kind_of([&] { parse_request(text); }, &field), ErrorKind::schema_violation);
    EXPECT_EQ(field, "segments[1].date");
}

TEST(ParseRequest, NotJson) { EXPECT_EQ(kind_of([] { parse_request("{segments"); }), ErrorKind::malformed_json); }

TEST(ParseRequest, UnknownFieldReportsPath) {
    const char* text = R"({"segments":[{"origin":"DEN","destination":"MIA","date":"2025-01-17"}],
                          "airline_constraints":{"seat":"aisle"}})";
    std::string field;
    EXPECT_EQ(kind_of([&] { parse_request(text); }, &field), ErrorKind::schema_violation);
    EXPECT_EQ(field, "airline_constraints.seat");
}

TEST(ParseRequest, WrongTypeAndBrokenChain) {
    std::string field;
    EXPECT_EQ(kind_of([] {
                  parse_request(R"({"segments":[{"origin":"DEN","destination":"MIA","date":"2025-01-17"}],
                                    "budget":{"total_budget":"lots"}})");
              },
              &field),
              ErrorKind::schema_violation);
    EXPECT_EQ(field, "budget.total_budget");
    EXPECT_EQ(kind_of([] {
                  parse_request(R"({"segments":[{"origin":"DEN","destination":"MIA","date":"2025-01-15"},
                                                {"origin":"JFK","destination":"DEN","date":"2025-01-17"}]})");
              }),
              ErrorKind::schema_violation);
}

TEST(Canonical, KeyOrderDoesNotMatter) {
    auto a = parse_request(R"({"segments":[{"origin":"DEN","destination":"MIA","date":"2025-01-15"}],
                              "airline_constraints":{"non_stop":true,"cabin_class":"coach"}})");
    auto b = parse_request(R"({"airline_constraints":{"cabin_class":"coach","non_stop":true},
                              "segments":[{"date":"2025-01-15","destination":"MIA","origin":"DEN"}]})");
    EXPECT_EQ(canonicalize(a), canonicalize(b));
}

TEST(Canonical, SetsCompareAsSets) {
    auto a = parse_request(R"({"segments":[{"origin":"DEN","destination":"MIA","date":"2025-01-15"}],
                              "airline_constraints":{"preferred_airlines":["UA","AA"]}})");
    auto b = parse_request(R"({"segments":[{"origin":"DEN","destination":"MIA","date":"2025-01-15"}],
                              "airline_constraints":{"preferred_airlines":["AA","UA"]}})");
    EXPECT_EQ(canonicalize(a), canonicalize(b));
    EXPECT_TRUE(differing_fields(a, b).empty());
}

TEST(Canonical, ValueDifferenceShows) {
    auto a = den_mia_jfk_request();
    auto b = a;
    b.airline.cabin_class = CabinClass::business;
    EXPECT_NE(canonicalize(a), canonicalize(b));
    EXPECT_EQ(differing_fields(a, b), std::vector<std::string>{"airline_constraints.cabin_class"});
    b = a;
    b.budget.total_budget = 1;
    b.segments[1].date = b.segments[1].date + 0;
    b.request_id = "other";
    EXPECT_EQ(differing_fields(a, b), std::vector<std::string>{"budget.total_budget"});
}

TEST(Canonical, RoundTrip) {
    auto req = den_mia_jfk_request();
    auto again = parse_request(serialize(req));
    EXPECT_EQ(req, again);
    EXPECT_EQ(canonicalize(req).text, serialize(again));
}

TEST(Inventory, RoundTripAndValidation) {
    auto req = den_mia_jfk_request();
    auto inv = den_mia_jfk_inventory();
    EXPECT_EQ(parse_inventory(serialize(inv), &req), inv);
    auto bad = inv;
    bad.flights[1].id = bad.flights[0].id;
    EXPECT_EQ(kind_of([&] { parse_inventory(serialize(bad), &req); }), ErrorKind::schema_violation);
}

TEST(Checker, FeasibleItinerary) {
    auto req = den_mia_jfk_request();
    auto inv = den_mia_jfk_inventory();
    auto it = itinerary({"F1", "F6", "F11"},
                        {{"H2", day("2025-01-15"), day("2025-01-17")}, {"H6", day("2025-01-17"), day("2025-01-18")}}, inv);
    auto report = check_feasibility(it, req, inv);
    EXPECT_TRUE(report.feasible) << (report.violations.empty() ? "" : report.violations[0].detail);
    EXPECT_EQ(check_feasibility(it, req, inv), report);
}

TEST(Checker, BasicEconomyAndDailyBudget) {
    auto req = den_mia_jfk_request();
    auto inv = den_mia_jfk_inventory();
    auto it = itinerary({"F3", "F6", "F11"},
                        {{"H2", day("2025-01-15"), day("2025-01-17")}, {"H7", day("2025-01-17"), day("2025-01-18")}}, inv);
    auto report = check_feasibility(it, req, inv);
    EXPECT_FALSE(report.feasible);
    EXPECT_TRUE(report.has_violation("airline_constraints.must_not_basic_economy"));
    EXPECT_TRUE(report.has_violation("budget.hotel_daily_budget"));  // H7 is 35000 per night
    EXPECT_TRUE(report.has_violation("airline_constraints.cabin_class"));
}

TEST(Checker, StructuralViolations) {
    auto req = den_mia_jfk_request();
    auto inv = den_mia_jfk_inventory();
    auto it = itinerary({"F1", "F6"}, {{"H5", day("2025-01-15"), day("2025-01-17")}}, inv);
    auto report = check_feasibility(it, req, inv);
    EXPECT_TRUE(report.has_violation("chosen_flights"));
    EXPECT_TRUE(report.has_violation("hotel_stays[0].hotel"));  // JFK hotel for MIA nights
    EXPECT_TRUE(report.has_violation("hotel_stays"));           // JFK night uncovered
    it.total_cost += 1;
    EXPECT_TRUE(check_feasibility(it, req, inv).has_violation("total_cost"));
}

TEST(Checker, UnknownOffer) {
    auto req = den_mia_jfk_request();
    auto inv = den_mia_jfk_inventory();
    Itinerary it;
    it.chosen_flights = {"F1", "NOPE", "F11"};
    std::string field;
    EXPECT_EQ(kind_of([&] { check_feasibility(it, req, inv); }, &field), ErrorKind::unknown_offer);
    EXPECT_EQ(field, "chosen_flights[1]");
}

TEST(Checker, SoftWindowIsNeverAViolation) {
    auto req = den_mia_jfk_request();
    auto inv = den_mia_jfk_inventory();
    req.airline.departure_window = std::vector<TimeWindow>{{0, 0, 60, true}};
    auto it = itinerary({"F1", "F6", "F11"},
                        {{"H2", day("2025-01-15"), day("2025-01-17")}, {"H6", day("2025-01-17"), day("2025-01-18")}}, inv);
    EXPECT_TRUE(check_feasibility(it, req, inv).feasible);
    EXPECT_EQ(plan_cost(it, req, inv), it.total_cost + (485 - 60) * 100);
    (*req.airline.departure_window)[0].soft = false;
    EXPECT_TRUE(check_feasibility(it, req, inv).has_violation("airline_constraints.departure_window"));
}

TEST(Checker, SleepNeedsTheHotelCity) {
    // Landing at 01:30 puts the traveller in the hotel city from the 02:00 slot:
    // five evening slots, one short of six.
    auto req = trip({{"AAA", "BBB", "2025-03-01"}, {"BBB", "AAA", "2025-03-02"}});
    Inventory inv;
    inv.flights = {flight("late", 0, "2025-03-01T21:00", "2025-03-02T01:30", 10000),
                   flight("early", 0, "2025-03-01T09:00", "2025-03-01T12:00", 10000),
                   flight("back", 1, "2025-03-02T15:00", "2025-03-02T18:00", 10000)};
    inv.hotels = {hotel("h", "BBB", 10000)};
    auto ok = itinerary({"early", "back"}, {{"h", day("2025-03-01"), day("2025-03-02")}}, inv);
    EXPECT_TRUE(check_feasibility(ok, req, inv).feasible);
    auto late = itinerary({"late", "back"}, {{"h", day("2025-03-01"), day("2025-03-02")}}, inv);
    EXPECT_TRUE(check_feasibility(late, req, inv).has_violation("commonsense.sleep"));
}
