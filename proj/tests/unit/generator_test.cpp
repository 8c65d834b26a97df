#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "support/fixtures.hpp"
#include "ttg/generator/dataset.hpp"
#include "ttg/generator/perturb.hpp"
#include "ttg/generator/price_model.hpp"
#include "ttg/generator/sampler.hpp"
#include "ttg/schema/canonical.hpp"
#include "ttg/schema/checker.hpp"

namespace ttg {
namespace {

using testing::data_path;

ErrorKind error_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::invalid_argument;
}

double three_sigma(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

TEST(SampleRequest, SeedSevenStaysInRange) {
    GeneratorConfig c;
    bool saw_three_segment_round_trip = false;
    for (std::uint64_t i = 0; i < 200; ++i) {
        Rng rng = stream_for(7, i);
        auto r = sample_request(rng, c);
        EXPECT_NO_THROW(validate(r));
        EXPECT_GE(r.airline.count(), 4);
        EXPECT_LE(r.airline.count(), 8);
        EXPECT_GE(r.hotel.count(), 2);
        EXPECT_LE(r.hotel.count(), 4);
        EXPECT_GE(r.city_count(), 2);
        EXPECT_LE(r.city_count(), 3);
        for (std::size_t k = 1; k < r.segments.size(); ++k) {
            int gap = r.segments[k].date - r.segments[k - 1].date;
            EXPECT_GE(gap, c.stay_nights.lo);
            EXPECT_LE(gap, c.stay_nights.hi);
        }
        if (r.segments.size() == 3 && r.is_round_trip()) saw_three_segment_round_trip = true;
    }
    EXPECT_TRUE(saw_three_segment_round_trip);
}

TEST(SampleRequest, SameIndexSameRequest) {
    GeneratorConfig c;
    Rng a = stream_for(7, 3), b = stream_for(7, 3), other = stream_for(7, 4);
    auto x = sample_request(a, c);
    EXPECT_EQ(x, sample_request(b, c));
    EXPECT_NE(x, sample_request(other, c));
}

TEST(SampleRequest, ZeroPresenceGivesBareSegments) {
    GeneratorConfig c;
    set_all_presence(c, 0.0);
    for (std::uint64_t i = 0; i < 50; ++i) {
        Rng rng = stream_for(1, i);
        auto r = sample_request(rng, c);
        EXPECT_EQ(r.airline, AirlineConstraints{});
        EXPECT_EQ(r.hotel, HotelConstraints{});
        EXPECT_EQ(r.budget, BudgetConstraints{});
        EXPECT_FALSE(r.segments.empty());
    }
}

TEST(SampleRequest, ForcedOneWay) {
    GeneratorConfig c;
    c.p_one_way = 1.0;
    for (std::uint64_t i = 0; i < 30; ++i) {
        Rng rng = stream_for(2, i);
        auto r = sample_request(rng, c);
        EXPECT_NE(r.segments.back().destination, r.segments.front().origin);
    }
}

TEST(SampleRequest, EmptyPoolIsAConfigError) {
    GeneratorConfig c;
    c.city_pool.clear();
    Rng rng = stream_for(1, 0);
    EXPECT_EQ(error_of([&] { sample_request(rng, c); }), ErrorKind::config_error);
}

TEST(SampleRequest, CountModeFollowsTheWeights) {
    GeneratorConfig c;
    const int n = 10000;
    std::map<int, int> airline, hotel;
    int three_cities = 0;
    for (int i = 0; i < n; ++i) {
        Rng rng = stream_for(99, static_cast<std::uint64_t>(i));
        auto r = sample_request(rng, c);
        ++airline[r.airline.count()];
        ++hotel[r.hotel.count()];
        three_cities += r.city_count() == 3;
    }
    auto check = [&](const std::map<int, double>& weights, std::map<int, int>& seen) {
        double total = 0.0;
        for (const auto& [k, w] : weights) total += w;
        int covered = 0;
        for (const auto& [k, w] : weights) {
            double p = w / total;
            EXPECT_NEAR(seen[k] / double(n), p, three_sigma(p, n)) << "count " << k;
            covered += seen[k];
        }
        EXPECT_EQ(covered, n);
    };
    check(c.airline_count_weights, airline);
    check(c.hotel_count_weights, hotel);
    EXPECT_NEAR(three_cities / double(n), c.p_three_cities, three_sigma(c.p_three_cities, n));
}

TEST(SampleRequest, BernoulliModeFollowsPresence) {
    GeneratorConfig c;
    c.airline_count_weights.clear();
    c.hotel_count_weights.clear();
    const int n = 10000;
    std::map<std::string, int> seen;
    for (int i = 0; i < n; ++i) {
        Rng rng = stream_for(5, static_cast<std::uint64_t>(i));
        auto j = to_json(sample_request(rng, c));
        for (const char* g : {"airline_constraints", "hotel_constraints", "budget"})
            for (const auto& [k, v] : j[g].items()) ++seen[std::string(g) + "." + k];
    }
    auto check = [&](const std::map<std::string, double>& presence, const std::string& group) {
        for (const auto& [k, p] : presence)
            EXPECT_NEAR(seen[group + "." + k] / double(n), p, three_sigma(p, n)) << group << "." << k;
    };
    check(c.airline_presence, "airline_constraints");
    check(c.hotel_presence, "hotel_constraints");
    check(c.budget_presence, "budget");
}

TEST(SampleInventory, PlantPassesTheChecker) {
    GeneratorConfig c;
    c.rng_seed = 17;
    for (std::uint64_t i = 0; i < 150; ++i) {
        auto g = generate_instance(c, i);
        auto report = check_feasibility(g.plant, g.request, g.inventory);
        EXPECT_TRUE(report.feasible) << "index " << i << ": " << report.violations.front().detail;
        EXPECT_NO_THROW(validate(g.inventory, &g.request));
        for (int k = 0; k < static_cast<int>(g.request.segments.size()); ++k) {
            auto n = std::count_if(g.inventory.flights.begin(), g.inventory.flights.end(),
                                   [&](const FlightOffer& f) { return f.segment == k; });
            EXPECT_GE(n, c.flights_per_segment.lo);
            EXPECT_LE(n, c.flights_per_segment.hi);
        }
    }
}

TEST(SampleInventory, HardWindowsAndTightBudgetsStillPlant) {
    GeneratorConfig c;
    c.rng_seed = 23;
    c.p_window_hard = 1.0;
    for (auto& [k, v] : c.budget_presence) v = 1.0;
    c.airline_presence["departure_window"] = 1.0;
    c.airline_presence["arrival_window"] = 1.0;
    int planted = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        try {
            auto g = generate_instance(c, i);
            EXPECT_TRUE(check_feasibility(g.plant, g.request, g.inventory).feasible) << i;
            ++planted;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::infeasible_request) << e.what();
        }
    }
    EXPECT_GT(planted, 90);
}

TEST(SampleInventory, MinimalCountsLeaveOnlyThePlant) {
    GeneratorConfig c;
    c.flights_per_segment = {1, 1};
    c.hotels_per_city = {1, 1};
    c.rng_seed = 3;
    for (std::uint64_t i = 0; i < 20; ++i) {
        auto g = generate_instance(c, i);
        ASSERT_EQ(g.inventory.flights.size(), g.request.segments.size());
        ASSERT_EQ(g.inventory.hotels.size(), g.request.stay_blocks().size());
        std::set<std::string> ids(g.plant.chosen_flights.begin(), g.plant.chosen_flights.end());
        for (const auto& s : g.plant.hotel_stays) ids.insert(s.hotel_id);
        for (const auto& f : g.inventory.flights) EXPECT_TRUE(ids.count(f.id));
        for (const auto& h : g.inventory.hotels) EXPECT_TRUE(ids.count(h.id));
    }
}

TEST(SampleInventory, DailyBudgetBelowFloorIsInfeasible) {
    GeneratorConfig c;
    auto req = testing::den_mia_jfk_request();
    req.budget.hotel_daily_budget = 1;
    Rng rng = stream_for(1, 0);
    EXPECT_EQ(error_of([&] { sample_inventory(rng, req, c); }), ErrorKind::infeasible_request);
}

TEST(SampleInventory, DenMiaJfkRequestGetsAPlant) {
    GeneratorConfig c;
    auto req = testing::den_mia_jfk_request();
    Rng rng = stream_for(4, 0);
    auto g = sample_inventory(rng, req, c);
    EXPECT_TRUE(check_feasibility(g.plant, req, g.inventory).feasible);
}

TEST(Perturb, EmptySpecIsIdentity) {
    GeneratorConfig c;
    for (std::uint64_t i = 0; i < 20; ++i) {
        Rng rng = stream_for(8, i);
        auto x = sample_request(rng, c);
        auto out = perturb_request(rng, x, {});
        EXPECT_EQ(canonicalize(out.request), canonicalize(x));
        EXPECT_TRUE(out.changes.empty());
    }
}

TEST(Perturb, ForcedDrop) {
    auto x = testing::den_mia_jfk_request();
    ASSERT_TRUE(x.airline.must_not_basic_economy.has_value());
    PerturbationSpec spec{{{PerturbKind::drop_constraint, "airline_constraints.must_not_basic_economy", 1.0}}, {}};
    Rng rng = stream_for(1, 1);
    auto out = perturb_request(rng, x, spec);
    EXPECT_FALSE(out.request.airline.must_not_basic_economy.has_value());
    ASSERT_EQ(out.changes.size(), 1u);
    EXPECT_EQ(out.changes[0].kind, PerturbKind::drop_constraint);
    EXPECT_EQ(differing_fields(x, out.request), std::vector<std::string>{"airline_constraints.must_not_basic_economy"});
}

PerturbationSpec mixed_spec() {
    return {{{PerturbKind::drop_constraint, "", 0.15},
             {PerturbKind::flip_boolean, "", 0.15},
             {PerturbKind::shift_budget, "", 0.3, 0.2},
             {PerturbKind::shift_window, "", 0.3, 0.1, 90},
             {PerturbKind::swap_dates, "", 0.5},
             {PerturbKind::change_city, "", 0.3}},
            {}};
}

TEST(Perturb, MixedSpecReplaysAndListsExactlyTheChangedFields) {
    GeneratorConfig c;
    c.p_three_cities = 0.5;
    int non_identity = 0;
    std::set<PerturbKind> kinds;
    for (std::uint64_t i = 0; i < 300; ++i) {
        Rng rng = stream_for(11, i);
        auto x = sample_request(rng, c);
        auto out = perturb_request(rng, x, mixed_spec());
        EXPECT_EQ(apply_changes(x, out.changes), out.request) << i;
        std::set<std::string> listed;
        for (const auto& ch : out.changes) {
            kinds.insert(ch.kind);
            for (const auto& e : ch.edits) listed.insert(e.path);
        }
        auto diff = differing_fields(x, out.request);
        EXPECT_EQ(std::set<std::string>(diff.begin(), diff.end()), listed) << i;
        non_identity += !out.changes.empty();
    }
    EXPECT_GT(non_identity, 200);
    EXPECT_EQ(kinds.size(), 6u);
}

TEST(Perturb, ChangesSurviveJson) {
    GeneratorConfig c;
    Rng rng = stream_for(11, 0);
    auto x = sample_request(rng, c);
    auto out = perturb_request(rng, x, drop_flip_spec(0.5));
    std::vector<AppliedPerturbation> back;
    for (const auto& ch : out.changes) back.push_back(applied_perturbation_from_json(to_json(ch)));
    EXPECT_EQ(back, out.changes);
    auto spec = mixed_spec();
    EXPECT_EQ(perturbation_spec_from_json(to_json(spec)).rules, spec.rules);
}

TEST(Perturb, BadSpecRejected) {
    EXPECT_EQ(error_of([] { perturbation_spec_from_json(nlohmann::json::parse(R"({"rules":[{"kind":"drop_constraint","p":1.5}]})")); }),
              ErrorKind::config_error);
    EXPECT_EQ(error_of([] { perturbation_spec_from_json(nlohmann::json::parse(R"({"rules":[{"kind":"melt","p":0.5}]})")); }),
              ErrorKind::config_error);
    EXPECT_EQ(error_of([] { perturbation_spec_from_json(nlohmann::json::parse(R"({"rulez":[]})")); }), ErrorKind::config_error);
}

TEST(Ingest, ThreeFaresInOneBucket) {
    auto fit = ingest_flight_csv(data_path("csv/three_fares.csv"));
    EXPECT_EQ(fit.summary.rows, 3u);
    EXPECT_EQ(fit.summary.used, 3u);
    EXPECT_EQ(fit.summary.skipped, 0u);
    ASSERT_EQ(fit.summary.buckets.size(), 1u);
    const auto& b = fit.summary.buckets[0];
    EXPECT_EQ(b.cabin, CabinClass::coach);
    EXPECT_EQ(b.bucket, DistanceBucket::short_haul);
    double expected = (std::log(10000.0) + std::log(20000.0) + std::log(30000.0)) / 3.0;
    EXPECT_NEAR(b.log_mean, expected, 1e-12);
    EXPECT_NEAR(fit.model.fare_for(CabinClass::coach, DistanceBucket::short_haul).mu, expected, 1e-12);
    EXPECT_NEAR(fit.model.duration.at(DistanceBucket::short_haul).mean, 72.0, 1e-12);
    EXPECT_NEAR(fit.model.airlines.at("DL"), 2.0 / 3.0, 1e-12);
    // Daily mean fares 100, 200, 300 over an overall mean of 200, tiled every three days.
    ASSERT_EQ(fit.model.date_factors.size(), 3u);
    EXPECT_NEAR(fit.model.date_factor(testing::day("2022-04-17")), 0.5, 1e-12);
    EXPECT_NEAR(fit.model.date_factor(testing::day("2022-04-19")), 1.5, 1e-12);
    EXPECT_NEAR(fit.model.date_factor(testing::day("2022-04-20")), 0.5, 1e-12);
    EXPECT_NEAR(fit.model.date_factor(testing::day("2022-04-16")), 1.5, 1e-12);
}

TEST(Ingest, BadRowIsCountedAndSkipped) {
    auto fit = ingest_flight_csv(data_path("csv/one_bad_row.csv"));
    EXPECT_EQ(fit.summary.rows, 3u);
    EXPECT_EQ(fit.summary.used, 2u);
    EXPECT_EQ(fit.summary.skipped, 1u);
    EXPECT_EQ(fit.summary.buckets.size(), 2u);
}

TEST(Ingest, EmptyAndMissingFiles) {
    EXPECT_EQ(error_of([] { ingest_flight_csv(data_path("csv/empty.csv")); }), ErrorKind::empty_data);
    EXPECT_EQ(error_of([] { ingest_flight_csv(data_path("csv/header_only.csv")); }), ErrorKind::empty_data);
    EXPECT_EQ(error_of([] { ingest_flight_csv(data_path("csv/missing.csv")); }), ErrorKind::io_error);
}

TEST(PriceModelJson, RoundTrip) {
    auto fit = ingest_flight_csv(data_path("csv/three_fares.csv"));
    auto back = price_model_from_json(to_json(fit.model));
    EXPECT_EQ(to_json(back), to_json(fit.model));
    EXPECT_NO_THROW(default_price_model().validate());
}

TEST(Config, OverridesAndUnknownKeys) {
    auto c = apply_overrides(GeneratorConfig{}, nlohmann::json::parse(R"({"p_one_way": 0.5, "flights_per_segment": [2, 3]})"));
    EXPECT_EQ(c.p_one_way, 0.5);
    EXPECT_EQ(c.flights_per_segment, (IntRange{2, 3}));
    EXPECT_EQ(error_of([] { apply_overrides({}, nlohmann::json::parse(R"({"p_one_wya": 0.5})")); }), ErrorKind::config_error);
    EXPECT_EQ(error_of([] { apply_overrides({}, nlohmann::json::parse(R"({"p_one_way": 1.5})")); }), ErrorKind::config_error);
    EXPECT_EQ(error_of([] { apply_overrides({}, nlohmann::json::parse(R"({"airline_presence": {"wifi": 0.5}})")); }),
              ErrorKind::config_error);
    auto round = apply_overrides(GeneratorConfig{}, to_json(GeneratorConfig{}));
    EXPECT_EQ(to_json(round), to_json(GeneratorConfig{}));
}

TEST(Dataset, SameSeedSameBytes) {
    std::ostringstream a, b, c;
    generate_dataset(10, 1, {}, a);
    generate_dataset(10, 1, {}, b, 3);
    generate_dataset(10, 2, {}, c);
    EXPECT_EQ(a.str(), b.str());
    EXPECT_NE(a.str(), c.str());
    std::istringstream in(a.str());
    auto records = read_dataset(in);
    ASSERT_EQ(records.size(), 10u);
    EXPECT_EQ(records[0].request.request_id, generated_request_id(1, 0));
}

TEST(Dataset, ZeroSamplesRejected) {
    std::ostringstream out;
    EXPECT_EQ(error_of([&] { generate_dataset(0, 1, {}, out); }), ErrorKind::invalid_argument);
}

TEST(Dataset, OneWayFraction) {
    std::ostringstream out;
    GeneratorConfig c;
    generate_dataset(1000, 4, c, out);
    std::istringstream in(out.str());
    DatasetSummary s;
    for (const auto& rec : read_dataset(in)) add_to_summary(s, rec.request);
    ASSERT_EQ(s.samples, 1000u);
    double frac = s.one_way / 1000.0;
    EXPECT_LT(frac, c.p_one_way + three_sigma(c.p_one_way, 1000));
    EXPECT_NEAR(frac, c.p_one_way, three_sigma(c.p_one_way, 1000));
}

}  // namespace
}  // namespace ttg
