#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ttg/error.hpp"
#include "ttg/eval/eval.hpp"
#include "ttg/eval/profile.hpp"
#include "ttg/generator/dataset.hpp"
#include "ttg/generator/perturb.hpp"
#include "ttg/generator/price_model.hpp"
#include "ttg/model/extract.hpp"
#include "ttg/schema/checker.hpp"
#include "ttg/schema/json_io.hpp"
#include "ttg/service/service.hpp"
#include "ttg/solver/planner.hpp"
#include "ttg/version.hpp"

namespace ttg {

enum ExitCode : int { exit_ok = 0, exit_runtime = 1, exit_usage = 2, exit_infeasible = 3 };

namespace cli {

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io_error, "cannot open " + path, path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io_error, "cannot write " + path, path);
    out << text;
    if (!out) throw Error(ErrorKind::io_error, "write failed for " + path, path);
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::istringstream in(read_text(path));
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) lines.push_back(line);
    return lines;
}

inline std::string money(Cents c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "$%lld.%02lld", static_cast<long long>(c / 100), static_cast<long long>(c % 100));
    return buf;
}

/// Flight rows, hotel rows and totals.
inline std::string render_itinerary(const Itinerary& it, const TravelRequest& req, const Inventory& inv) {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s %-8s %-9s %-9s %-17s %-17s %-14s %10s\n", "seg", "flight", "route", "number",
                  "departure", "arrival", "cabin", "price");
    os << buf;
    for (const auto& id : it.chosen_flights) {
        const auto* f = inv.find_flight(id);
        const auto& s = req.segments[static_cast<std::size_t>(f->segment)];
        std::snprintf(buf, sizeof buf, "%-4d %-8s %-9s %-9s %-17s %-17s %-14s %10s\n", f->segment + 1, f->id.c_str(),
                      (s.origin + "-" + s.destination).c_str(), f->flight_number.c_str(),
                      format_datetime(f->departure).c_str(), format_datetime(f->arrival).c_str(),
                      std::string(to_string(f->cabin)).c_str(), money(f->price).c_str());
        os << buf;
    }
    if (!it.hotel_stays.empty()) {
        std::snprintf(buf, sizeof buf, "\n%-8s %-5s %-24s %-6s %-10s %-10s %6s %10s\n", "hotel", "city", "name", "rating",
                      "check-in", "check-out", "nights", "cost");
        os << buf;
    }
    for (const auto& st : it.hotel_stays) {
        const auto* h = inv.find_hotel(st.hotel_id);
        int nights = st.check_out - st.check_in;
        std::snprintf(buf, sizeof buf, "%-8s %-5s %-24s %-6d %-10s %-10s %6d %10s\n", h->id.c_str(), h->city.c_str(),
                      h->name.substr(0, 24).c_str(), h->rating, format_date(st.check_in).c_str(),
                      format_date(st.check_out).c_str(), nights, money(h->nightly_price * nights).c_str());
        os << buf;
    }
    os << "\nflights " << money(it.flight_cost) << "  hotels " << money(it.hotel_cost) << "  total "
       << money(it.total_cost) << '\n';
    return os.str();
}

inline ObjectiveKind objective_or_throw(const std::string& s) {
    auto k = parse_objective_kind(s);
    if (!k) throw CLI::ValidationError("--objective", "expected min_cost, better_hotel or better_flight");
    return *k;
}

struct GenerateArgs {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::string config, out;
    unsigned jobs = 1;
};

inline int run_generate(const GenerateArgs& a, std::ostream& out) {
    GeneratorConfig config;
    if (!a.config.empty()) config = apply_overrides(config, parse_json_text(read_text(a.config)));
    {
        std::ofstream file(a.out, std::ios::binary);
        if (!file) throw Error(ErrorKind::io_error, "cannot write " + a.out, a.out);
        generate_dataset(a.n, a.seed, config, file, a.jobs);
    }
    DatasetSummary summary;
    for (const auto& rec : read_dataset(a.out)) add_to_summary(summary, rec.request);
    out << to_json(summary).dump(2) << '\n';
    return exit_ok;
}

struct SolveArgs {
    std::string request, inventory, objective = "min_cost", lp_out, out;
    bool trace = false;
    double time_limit_ms = 60000.0;
    int slot_minutes = 60;
};

inline int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    auto req = parse_request(read_text(a.request));
    auto inv = parse_inventory(read_text(a.inventory), &req);
    ObjectiveSpec spec;
    spec.kind = objective_or_throw(a.objective);
    SolverParams params;
    params.time_limit_ms = a.time_limit_ms;
    if (a.trace) params.trace = &err;
    PlanningRules rules;
    rules.slot_minutes = a.slot_minutes;
    PlanOutcome outcome;
    try {
        outcome = plan(req, inv, spec, params, rules);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::empty_segment && e.kind() != ErrorKind::infeasible_request) throw;
        out << "infeasible: " << e.what() << '\n';
        return exit_infeasible;
    }
    if (!a.lp_out.empty()) {
        std::ostringstream lp;
        write_lp(outcome.model, lp);
        write_text(a.lp_out, lp.str());
    }
    const auto& t = outcome.result.timing;
    char buf[160];
    std::snprintf(buf, sizeof buf, "timing: load %.3f s, solve %.3f s, total %.3f s; %ld nodes, %ld LP iterations\n",
                  t.load_ms / 1000.0, t.solve_ms / 1000.0, t.total_ms / 1000.0, outcome.result.node_count,
                  outcome.result.lp_iterations);
    err << buf;
    switch (outcome.result.status) {
        case MilpStatus::infeasible:
            out << "infeasible: no itinerary satisfies every constraint\n";
            return exit_infeasible;
        case MilpStatus::time_limit_no_incumbent:
            throw Error(ErrorKind::time_limit, "no itinerary found within the time limit");
        default: break;
    }
    const auto& it = *outcome.itinerary;
    out << "objective " << to_string(spec.kind) << ", status " << to_string(outcome.result.status) << ", slot "
        << outcome.model.rules.slot_minutes << " min\n\n";
    out << render_itinerary(it, req, inv);
    if (!a.out.empty()) write_text(a.out, to_json(it).dump(2) + "\n");
    return exit_ok;
}

struct EvalArgs {
    std::string dataset, perturb, estimates, out;
    std::uint64_t seed = 0;
    int subsets = 8;
    unsigned jobs = 1;
    double time_limit_ms = 60000.0;
};

inline int run_eval_command(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    if (a.perturb.empty() == a.estimates.empty())
        throw CLI::ValidationError("eval", "exactly one of --perturb and --estimates is required");
    auto records = read_dataset(a.dataset);
    if (records.empty()) throw Error(ErrorKind::empty_data, "dataset has no records", a.dataset);
    std::vector<EvalCase> cases;
    cases.reserve(records.size());
    if (!a.perturb.empty()) {
        auto spec = perturbation_spec_from_json(parse_json_text(read_text(a.perturb)));
        for (std::size_t i = 0; i < records.size(); ++i) {
            Rng rng = stream_for(a.seed, i);
            auto p = perturb_request(rng, records[i].request, spec);
            cases.push_back({records[i].request, p.request, records[i].inventory, p.changes});
        }
    } else {
        auto lines = read_lines(a.estimates);
        if (lines.size() != records.size())
            throw Error(ErrorKind::invalid_argument,
                        "estimates file has " + std::to_string(lines.size()) + " lines but the dataset has " +
                            std::to_string(records.size()),
                        a.estimates);
        for (std::size_t i = 0; i < records.size(); ++i) {
            TravelRequest est;
            try {
                est = parse_request(lines[i]);
            } catch (const Error& e) {
                throw Error(e.kind(), "estimate line " + std::to_string(i + 1) + ": " + e.message(), e.field());
            }
            cases.push_back({records[i].request, est, records[i].inventory, {}});
        }
    }
    EvalOptions opt;
    opt.subsets = a.subsets;
    opt.jobs = a.jobs;
    opt.keep_going = true;
    opt.quality.solver.time_limit_ms = a.time_limit_ms;
    auto report = run_eval(cases, opt);
    if (!a.out.empty()) write_text(a.out, to_json(report).dump(2) + "\n");
    out << render_report(report);
    if (!report.failures.empty()) {
        err << "error: " << report.failures.size() << " case(s) failed:";
        for (const auto& f : report.failures) err << ' ' << f.index;
        err << '\n';
        for (const auto& f : report.failures) err << "  case " << f.index << ": " << f.message << '\n';
        return exit_runtime;
    }
    return exit_ok;
}

inline int run_ingest(const std::string& csv, const std::string& path, std::ostream& out) {
    auto result = ingest_flight_csv(csv);
    write_text(path, to_json(result.model).dump(2) + "\n");
    out << to_json(result.summary).dump(2) << '\n';
    return exit_ok;
}

struct ProfileArgs {
    std::string dataset, objective = "min_cost", out;
    std::size_t limit = 0;
    double time_limit_ms = 60000.0;
};

inline int run_profile(const ProfileArgs& a, std::ostream& out) {
    auto kind = objective_or_throw(a.objective);
    auto records = read_dataset(a.dataset);
    if (a.limit && records.size() > a.limit) records.resize(a.limit);
    if (records.empty()) throw Error(ErrorKind::empty_data, "dataset has no records", a.dataset);
    SolverParams params;
    params.time_limit_ms = a.time_limit_ms;
    ProfileReport report;
    for (const auto& rec : records) add_sample(report, profile_solve(rec.request, rec.inventory, kind, params));
    out << render_timing_table(report);
    if (!a.out.empty()) write_text(a.out, to_json(report).dump(2) + "\n");
    return exit_ok;
}

}  // namespace cli

/// Entry point of the `ttg` tool. Exit codes: 0 ok, 1 runtime error, 2 usage, 3 infeasible.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Symbolic travel planner: generate, solve, evaluate, ingest, profile, serve", "ttg"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    cli::GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a JSON-lines dataset of requests and inventories");
    g->add_option("--n", gen.n, "Number of samples")->required()->check(CLI::PositiveNumber);
    g->add_option("--seed", gen.seed, "Master seed")->required();
    g->add_option("--config", gen.config, "Generator overrides (JSON)")->check(CLI::ExistingFile);
    g->add_option("--out", gen.out, "Output dataset path")->required();
    g->add_option("--jobs", gen.jobs, "Worker threads")->check(CLI::Range(1u, 256u));

    cli::SolveArgs sol;
    auto* s = app.add_subcommand("solve", "Solve one request against an inventory");
    s->add_option("--request", sol.request, "Request JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--inventory", sol.inventory, "Inventory JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--objective", sol.objective, "min_cost | better_hotel | better_flight")
        ->check(CLI::IsMember({"min_cost", "better_hotel", "better_flight"}));
    s->add_flag("--trace", sol.trace, "Print the branch-and-bound log to stderr");
    s->add_option("--lp-out", sol.lp_out, "Write the model in LP format");
    s->add_option("--out", sol.out, "Write the itinerary JSON");
    s->add_option("--time-limit-ms", sol.time_limit_ms)->check(CLI::PositiveNumber);
    s->add_option("--slot-minutes", sol.slot_minutes)->check(CLI::Range(1, 1440));

    cli::EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Score translator outputs against a dataset");
    e->add_option("--dataset", ev.dataset, "Dataset JSON lines")->required()->check(CLI::ExistingFile);
    auto* perturb = e->add_option("--perturb", ev.perturb, "Perturbation spec JSON")->check(CLI::ExistingFile);
    auto* estimates = e->add_option("--estimates", ev.estimates, "Estimated requests, one per dataset line")
                          ->check(CLI::ExistingFile);
    perturb->excludes(estimates);
    e->add_option("--out", ev.out, "Write the report JSON");
    e->add_option("--seed", ev.seed, "Perturbation seed");
    e->add_option("--subsets", ev.subsets, "Subsets for the quality-ratio spread")->check(CLI::Range(1, 1000000));
    e->add_option("--jobs", ev.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    e->add_option("--time-limit-ms", ev.time_limit_ms)->check(CLI::PositiveNumber);

    std::string csv, model_out;
    auto* in = app.add_subcommand("ingest", "Fit a price model from a flight-fare CSV");
    in->add_option("--csv", csv, "Fare CSV")->required();
    in->add_option("--out", model_out, "Price model JSON")->required();

    cli::ProfileArgs prof;
    auto* p = app.add_subcommand("profile", "Per-phase solver timing over a dataset");
    p->add_option("--dataset", prof.dataset, "Dataset JSON lines")->required()->check(CLI::ExistingFile);
    p->add_option("--objective", prof.objective)->check(CLI::IsMember({"min_cost", "better_hotel", "better_flight"}));
    p->add_option("--limit", prof.limit, "Use the first N records");
    p->add_option("--out", prof.out, "Write the timing JSON");
    p->add_option("--time-limit-ms", prof.time_limit_ms)->check(CLI::PositiveNumber);

    ServiceConfig svc;
    std::optional<int> port;
    auto* sv = app.add_subcommand("serve", "Run the HTTP service");
    sv->add_option("--port", port, "Port (default TTG_PORT or 8080)")->check(CLI::Range(0, 65535));
    sv->add_option("--host", svc.host);
    sv->add_flag("--concurrent", svc.concurrent_objectives, "Solve the three objectives concurrently");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        int code = app.exit(ex, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*g) return cli::run_generate(gen, out);
        if (*s) return cli::run_solve(sol, out, err);
        if (*e) return cli::run_eval_command(ev, out, err);
        if (*in) return cli::run_ingest(csv, model_out, out);
        if (*p) return cli::run_profile(prof, out);
        if (*sv) {
            auto cfg = service_config_from_env(svc);
            if (port) cfg.port = *port;
            httplib::Server server;
            err << "listening on " << cfg.host << ":" << cfg.port << std::endl;
            if (!serve(server, cfg)) throw Error(ErrorKind::io_error, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
            return exit_ok;
        }
    } catch (const CLI::ValidationError& ex) {
        err << "usage error: " << ex.what() << '\n';
        return exit_usage;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return exit_runtime;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}

}  // namespace ttg
