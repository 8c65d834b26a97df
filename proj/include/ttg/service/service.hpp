#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <optional>
#include <string>
#include <string_view>

#include <httplib.h>
#include <json.hpp>

#include "ttg/error.hpp"
#include "ttg/generator/config.hpp"
#include "ttg/generator/sampler.hpp"
#include "ttg/schema/canonical.hpp"
#include "ttg/schema/checker.hpp"
#include "ttg/schema/json_io.hpp"
#include "ttg/solver/planner.hpp"
#include "ttg/version.hpp"

namespace ttg {

struct ServiceConfig {
    std::string host = "0.0.0.0";
    int port = 8080;
    SolverParams solver;
    PlanningRules rules;
    GeneratorConfig generator;
    bool concurrent_objectives = false;
    std::string cors_origin = "*";
};

namespace detail {

inline long env_integer(const char* name, long fallback, long lo, long hi) {
    const char* raw = std::getenv(name);
    if (!raw || !*raw) return fallback;
    char* end = nullptr;
    long v = std::strtol(raw, &end, 10);
    if (*end != '\0' || v < lo || v > hi)
        throw Error(ErrorKind::config_error, std::string("invalid value '") + raw + "'", name);
    return v;
}

}  // namespace detail

/// Reads TTG_PORT, TTG_TIME_LIMIT_MS, TTG_SLOT_MINUTES and TTG_CORS_ORIGIN on top of `base`.
inline ServiceConfig service_config_from_env(ServiceConfig base = {}) {
    base.port = static_cast<int>(detail::env_integer("TTG_PORT", base.port, 0, 65535));
    base.solver.time_limit_ms = detail::env_integer("TTG_TIME_LIMIT_MS", base.solver.time_limit_ms, 1, 86400000);
    base.rules.slot_minutes = static_cast<int>(detail::env_integer("TTG_SLOT_MINUTES", base.rules.slot_minutes, 1, 1440));
    if (const char* origin = std::getenv("TTG_CORS_ORIGIN"); origin && *origin) base.cors_origin = origin;
    base.solver.validate();
    base.rules.validate();
    return base;
}

struct HttpReply {
    int status = 200;
    std::string body;
};

inline int http_status(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::malformed_json:
        case ErrorKind::schema_violation:
        case ErrorKind::unknown_offer:
        case ErrorKind::config_error:
        case ErrorKind::invalid_argument: return 400;
        case ErrorKind::empty_segment:
        case ErrorKind::infeasible_request:
        case ErrorKind::grid_too_coarse: return 422;
        case ErrorKind::time_limit: return 503;
        default: return 500;
    }
}

inline HttpReply error_reply(const Error& e) {
    nlohmann::json j = {{"error", to_string(e.kind())}, {"message", e.message()}};
    if (!e.field().empty()) j["field"] = e.field();
    return {http_status(e.kind()), j.dump()};
}

/// FNV-1a over the canonical request text; stable across builds and platforms.
inline std::uint64_t request_seed(const TravelRequest& req) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonicalize(req).text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string_view option_label(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::min_cost: return "Minimum Cost";
        case ObjectiveKind::better_hotel: return "Better Hotel";
        case ObjectiveKind::better_flight: return "Better Flight";
    }
    return "?";
}

inline constexpr std::array<ObjectiveKind, 3> kObjectives = {ObjectiveKind::min_cost, ObjectiveKind::better_hotel,
                                                             ObjectiveKind::better_flight};

inline nlohmann::json option_json(ObjectiveKind kind, const PlanOutcome& out, const TravelRequest& req,
                                  const Inventory& inv) {
    using nlohmann::json;
    const auto& t = out.result.timing;
    json j = {{"objective", to_string(kind)},
              {"label", option_label(kind)},
              {"timing", {{"translate_ms", nullptr}, {"load_ms", t.load_ms}, {"solve_ms", t.solve_ms}, {"total_ms", t.total_ms}}},
              {"slot_minutes", out.model.rules.slot_minutes}};
    if (!out.itinerary) {
        j["status"] = "infeasible";
        j["itinerary"] = nullptr;
        j["notice"] = "no itinerary satisfies every constraint under this objective";
        return j;
    }
    const auto& it = *out.itinerary;
    j["status"] = out.result.status == MilpStatus::optimal ? "optimal" : "time_limit";
    j["itinerary"] = to_json(it);
    j["total_cost"] = it.total_cost;
    j["penalized_cost"] = plan_cost(it, req, inv, out.model.rules);
    json flights = json::array();
    for (const auto& id : it.chosen_flights) flights.push_back(to_json(*inv.find_flight(id)));
    json hotels = json::array();
    double rating = 0.0;
    for (const auto& s : it.hotel_stays) {
        const auto* h = inv.find_hotel(s.hotel_id);
        json stay = to_json(*h);
        stay["check_in_date"] = format_date(s.check_in);
        stay["check_out_date"] = format_date(s.check_out);
        stay["nights"] = s.check_out - s.check_in;
        hotels.push_back(stay);
        rating += h->rating;
    }
    j["flights"] = flights;
    j["hotels"] = hotels;
    j["mean_hotel_rating"] = it.hotel_stays.empty() ? json() : json(rating / static_cast<double>(it.hotel_stays.size()));
    return j;
}

/// POST /api/solve. Body {request, inventory?}; a missing inventory is generated
/// from a seed derived from the request.
inline HttpReply handle_solve(std::string_view body, const ServiceConfig& cfg) {
    using nlohmann::json;
    try {
        auto j = parse_json_text(body);
        detail::FieldReader root(j, "", {"request", "inventory"});
        TravelRequest req = request_from_json(root.require("request"));
        Inventory inv;
        std::optional<std::uint64_t> seed;
        if (root.has("inventory")) {
            inv = inventory_from_json(root.raw("inventory"), &req);
        } else {
            seed = request_seed(req);
            Rng rng = stream_for(*seed, 0);
            inv = sample_inventory(rng, req, cfg.generator).inventory;
        }

        std::array<std::optional<PlanOutcome>, 3> outcomes;
        auto solve_one = [&](std::size_t i) {
            ObjectiveSpec spec;
            spec.kind = kObjectives[i];
            return plan(req, inv, spec, cfg.solver, cfg.rules);
        };
        if (cfg.concurrent_objectives) {
            std::array<std::future<PlanOutcome>, 3> futures;
            for (std::size_t i = 0; i < 3; ++i) futures[i] = std::async(std::launch::async, solve_one, i);
            for (std::size_t i = 0; i < 3; ++i) outcomes[i] = futures[i].get();
        } else {
            for (std::size_t i = 0; i < 3; ++i) outcomes[i] = solve_one(i);
        }

        bool any = false;
        for (const auto& o : outcomes) {
            if (o->result.status == MilpStatus::time_limit_no_incumbent)
                throw Error(ErrorKind::time_limit, "the solver found no itinerary within the time limit");
            any = any || o->itinerary.has_value();
        }
        if (!any)
            throw Error(ErrorKind::infeasible_request,
                        "no combination of the available flights and hotels satisfies every constraint");

        json options = json::object();
        for (std::size_t i = 0; i < 3; ++i)
            options[std::string(to_string(kObjectives[i]))] = option_json(kObjectives[i], *outcomes[i], req, inv);
        json out = {{"request", to_json(req)}, {"options", options}};
        if (seed) {
            out["inventory_seed"] = *seed;
            out["inventory"] = to_json(inv);
        }
        return {200, out.dump()};
    } catch (const Error& e) {
        return error_reply(e);
    }
}

/// POST /api/generate. Body {seed, config?}.
inline HttpReply handle_generate(std::string_view body, const ServiceConfig& cfg) {
    try {
        auto j = parse_json_text(body);
        detail::FieldReader root(j, "", {"seed", "config"});
        const auto& s = root.require("seed");
        if (!s.is_number_integer()) throw Error(ErrorKind::schema_violation, "expected an integer", "seed");
        GeneratorConfig config = cfg.generator;
        if (root.has("config")) config = apply_overrides(config, root.raw("config"));
        config.rng_seed = s.is_number_unsigned() ? s.get<std::uint64_t>() : static_cast<std::uint64_t>(s.get<std::int64_t>());
        auto g = generate_instance(config, 0);
        nlohmann::json out = {{"request", to_json(g.request)}, {"inventory", to_json(g.inventory)}};
        return {200, out.dump()};
    } catch (const Error& e) {
        return error_reply(e);
    }
}

inline HttpReply handle_health() {
    return {200, nlohmann::json{{"status", "ok"}, {"version", kVersion}}.dump()};
}

inline void install_routes(httplib::Server& server, const ServiceConfig& cfg) {
    auto send = [](httplib::Response& res, const HttpReply& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", cfg.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Get("/api/health", [send](const httplib::Request&, httplib::Response& res) { send(res, handle_health()); });
    server.Post("/api/solve", [send, cfg](const httplib::Request& req, httplib::Response& res) {
        send(res, handle_solve(req.body, cfg));
    });
    server.Post("/api/generate", [send, cfg](const httplib::Request& req, httplib::Response& res) {
        send(res, handle_generate(req.body, cfg));
    });
}

/// Binds and serves until `server.stop()`. Returns false when the port cannot be bound.
inline bool serve(httplib::Server& server, const ServiceConfig& cfg) {
    install_routes(server, cfg);
    return server.listen(cfg.host, cfg.port);
}

}  // namespace ttg
