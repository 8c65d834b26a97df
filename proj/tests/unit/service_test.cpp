#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "ttg/service/service.hpp"

namespace ttg {
namespace {

using nlohmann::json;

json body_of(const HttpReply& r) { return json::parse(r.body); }

std::string solve_body(const TravelRequest& req, const Inventory* inv = nullptr) {
    json j = {{"request", to_json(req)}};
    if (inv) j["inventory"] = to_json(*inv);
    return j.dump();
}

void expect_valid_options(const json& out, const TravelRequest& req, const Inventory& inv) {
    ASSERT_EQ(out["options"].size(), 3u);
    for (const char* key : {"min_cost", "better_hotel", "better_flight"}) {
        SCOPED_TRACE(key);
        ASSERT_TRUE(out["options"].contains(key));
        const auto& o = out["options"][key];
        EXPECT_EQ(o["objective"], key);
        EXPECT_TRUE(o["timing"]["translate_ms"].is_null());
        EXPECT_DOUBLE_EQ(o["timing"]["total_ms"].get<double>(),
                         o["timing"]["load_ms"].get<double>() + o["timing"]["solve_ms"].get<double>());
        ASSERT_EQ(o["status"], "optimal");
        auto it = itinerary_from_json(o["itinerary"]);
        PlanningRules rules;
        rules.slot_minutes = o["slot_minutes"];
        auto report = check_feasibility(it, req, inv, rules);
        EXPECT_TRUE(report.feasible) << (report.violations.empty() ? "" : report.violations[0].detail);
        EXPECT_EQ(o["total_cost"], it.total_cost);
    }
    auto cost = [&](const char* k) { return out["options"][k]["total_cost"].get<Cents>(); };
    EXPECT_LE(cost("min_cost"), cost("better_hotel"));
    EXPECT_LE(cost("min_cost"), cost("better_flight"));
}

TEST(Service, HealthReportsBuildVersion) {
    auto r = handle_health();
    EXPECT_EQ(r.status, 200);
    auto j = body_of(r);
    EXPECT_EQ(j["status"], "ok");
    EXPECT_EQ(j["version"], TTG_VERSION);
}

TEST(Service, DenMiaJfkRequestWithGeneratedInventory) {
    auto req = testing::den_mia_jfk_request();
    ServiceConfig cfg;
    auto r = handle_solve(solve_body(req), cfg);
    ASSERT_EQ(r.status, 200) << r.body;
    auto out = body_of(r);
    EXPECT_EQ(request_from_json(out["request"]), req);
    EXPECT_EQ(out["inventory_seed"], request_seed(req));
    auto inv = inventory_from_json(out["inventory"], &req);
    expect_valid_options(out, req, inv);
    auto again = body_of(handle_solve(solve_body(req), cfg));
    for (const char* key : {"min_cost", "better_hotel", "better_flight"})
        EXPECT_EQ(again["options"][key]["itinerary"], out["options"][key]["itinerary"]);
}

TEST(Service, ProvidedInventoryMatchesBruteForce) {
    auto req = testing::den_mia_jfk_request();
    auto inv = testing::den_mia_jfk_inventory();
    ServiceConfig cfg;
    cfg.concurrent_objectives = true;
    auto r = handle_solve(solve_body(req, &inv), cfg);
    ASSERT_EQ(r.status, 200) << r.body;
    auto out = body_of(r);
    EXPECT_FALSE(out.contains("inventory"));
    expect_valid_options(out, req, inv);
    auto oracle = testing::brute_force(req, inv, {});
    ASSERT_TRUE(oracle.best);
    EXPECT_EQ(out["options"]["min_cost"]["penalized_cost"], *oracle.best);
    EXPECT_GE(out["options"]["better_hotel"]["mean_hotel_rating"].get<double>(),
              out["options"]["min_cost"]["mean_hotel_rating"].get<double>());
}

TEST(Service, SchemaErrorsAre400) {
    ServiceConfig cfg;
    auto r = handle_solve("{}", cfg);
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(body_of(r)["error"], "SchemaViolation");
    EXPECT_EQ(body_of(r)["field"], "request");
    EXPECT_EQ(handle_solve("{not json", cfg).status, 400);
    auto bad = to_json(testing::den_mia_jfk_request());
    bad["segments"][0]["date"] = "2025-13-40";
    r = handle_solve(json{{"request", bad}}.dump(), cfg);
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(body_of(r)["field"], "segments[0].date");
    r = handle_solve(json{{"request", to_json(testing::den_mia_jfk_request())}, {"extra", 1}}.dump(), cfg);
    EXPECT_EQ(r.status, 400);
}

TEST(Service, UnsatisfiableRequestsAre422) {
    ServiceConfig cfg;
    auto req = testing::den_mia_jfk_request();
    req.budget.hotel_daily_budget = 1;
    auto r = handle_solve(solve_body(req), cfg);
    EXPECT_EQ(r.status, 422);
    EXPECT_EQ(body_of(r)["error"], "InfeasibleRequest");
    EXPECT_FALSE(body_of(r)["message"].get<std::string>().empty());

    auto inv = testing::den_mia_jfk_inventory();
    std::erase_if(inv.flights, [](const FlightOffer& f) { return f.segment == 0; });
    r = handle_solve(solve_body(testing::den_mia_jfk_request(), &inv), cfg);
    EXPECT_EQ(r.status, 422);
    EXPECT_EQ(body_of(r)["error"], "EmptySegment");

    inv = testing::den_mia_jfk_inventory();
    req = testing::den_mia_jfk_request();
    req.budget.total_budget = 100;
    r = handle_solve(solve_body(req, &inv), cfg);
    EXPECT_EQ(r.status, 422);
}

TEST(Service, TimeLimitWithoutPlanIs503) {
    ServiceConfig cfg;
    cfg.solver.time_limit_ms = 1e-6;
    auto req = testing::den_mia_jfk_request();
    auto inv = testing::den_mia_jfk_inventory();
    auto r = handle_solve(solve_body(req, &inv), cfg);
    EXPECT_EQ(r.status, 503);
    EXPECT_EQ(body_of(r)["error"], "TimeLimit");
}

TEST(Service, GenerateIsDeterministic) {
    ServiceConfig cfg;
    auto a = handle_generate(R"({"seed": 1})", cfg);
    auto b = handle_generate(R"({"seed": 1})", cfg);
    ASSERT_EQ(a.status, 200) << a.body;
    EXPECT_EQ(a.body, b.body);
    EXPECT_NE(a.body, handle_generate(R"({"seed": 2})", cfg).body);
    auto one_way = body_of(handle_generate(R"({"seed": 1, "config": {"p_one_way": 1.0}})", cfg));
    EXPECT_FALSE(request_from_json(one_way["request"]).is_round_trip());
}

TEST(Service, GenerateSeedSweepPassesValidation) {
    ServiceConfig cfg;
    for (int seed = 1; seed <= 50; ++seed) {
        auto r = handle_generate(json{{"seed", seed}}.dump(), cfg);
        ASSERT_EQ(r.status, 200) << r.body;
        auto j = body_of(r);
        auto req = request_from_json(j["request"]);
        EXPECT_NO_THROW(validate(req));
        EXPECT_NO_THROW(inventory_from_json(j["inventory"], &req));
    }
}

TEST(Service, GenerateRejectsBadInput) {
    ServiceConfig cfg;
    EXPECT_EQ(handle_generate("{}", cfg).status, 400);
    EXPECT_EQ(handle_generate(R"({"seed": "x"})", cfg).status, 400);
    EXPECT_EQ(handle_generate(R"({"seed": 1.5})", cfg).status, 400);
    auto r = handle_generate(R"({"seed": 1, "config": {"nope": 1}})", cfg);
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(body_of(r)["error"], "ConfigError");
    EXPECT_EQ(handle_generate(R"({"seed": 1, "config": {"p_one_way": 2}})", cfg).status, 400);
}

TEST(Service, EnvironmentOverrides) {
    ::setenv("TTG_PORT", "9123", 1);
    ::setenv("TTG_TIME_LIMIT_MS", "2500", 1);
    ::setenv("TTG_SLOT_MINUTES", "30", 1);
    auto cfg = service_config_from_env();
    EXPECT_EQ(cfg.port, 9123);
    EXPECT_EQ(cfg.solver.time_limit_ms, 2500.0);
    EXPECT_EQ(cfg.rules.slot_minutes, 30);
    ::setenv("TTG_SLOT_MINUTES", "7", 1);
    EXPECT_THROW(service_config_from_env(), Error);
    ::setenv("TTG_SLOT_MINUTES", "abc", 1);
    EXPECT_THROW(service_config_from_env(), Error);
    ::unsetenv("TTG_PORT");
    ::unsetenv("TTG_TIME_LIMIT_MS");
    ::unsetenv("TTG_SLOT_MINUTES");
    EXPECT_EQ(service_config_from_env().port, 8080);
}

TEST(Service, HttpRoundTrip) {
    httplib::Server server;
    ServiceConfig cfg;
    cfg.host = "127.0.0.1";
    install_routes(server, cfg);
    int port = server.bind_to_any_port(cfg.host);
    ASSERT_GT(port, 0);
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client(cfg.host, port);
    auto health = client.Get("/api/health");
    ASSERT_TRUE(health);
    EXPECT_EQ(health->status, 200);
    EXPECT_EQ(json::parse(health->body)["status"], "ok");
    EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "*");

    auto gen = client.Post("/api/generate", R"({"seed": 4})", "application/json");
    ASSERT_TRUE(gen);
    EXPECT_EQ(gen->status, 200);
    auto pair = json::parse(gen->body);
    auto solved = client.Post("/api/solve", json{{"request", pair["request"]}, {"inventory", pair["inventory"]}}.dump(),
                              "application/json");
    ASSERT_TRUE(solved);
    EXPECT_EQ(solved->status, 200) << solved->body;
    EXPECT_EQ(json::parse(solved->body)["options"].size(), 3u);

    auto bad = client.Post("/api/solve", "{}", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    auto pre = client.Options("/api/solve");
    ASSERT_TRUE(pre);
    EXPECT_EQ(pre->status, 204);

    server.stop();
    t.join();
    EXPECT_FALSE(httplib::Client(cfg.host, port).Get("/api/health"));
}

}  // namespace
}  // namespace ttg
