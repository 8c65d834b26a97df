#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/random_instance.hpp"
#include "ttg/eval/eval.hpp"
#include "ttg/eval/profile.hpp"
#include "ttg/generator/dataset.hpp"
#include "ttg/generator/sampler.hpp"
#include "ttg/service/service.hpp"

namespace ttg {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> problems;

    void fail(const std::string& what) {
        pass = false;
        if (problems.size() < 5) problems.push_back(what);
    }
};

int g_failures = 0;

void report(const std::string& name, const Outcome& o) {
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << "\n";
    for (const auto& p : o.problems) std::cout << "    " << p << "\n";
    std::cout.flush();
    g_failures += !o.pass;
}

void run(const std::string& name, const std::function<Outcome()>& criterion) {
    try {
        report(name, criterion());
    } catch (const std::exception& e) {
        Outcome o;
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
        report(name, o);
    }
}

constexpr ObjectiveKind kKinds[] = {ObjectiveKind::min_cost, ObjectiveKind::better_hotel, ObjectiveKind::better_flight};

// ---------------------------------------------------------------------------

Outcome big_m_truth_tables() {
    Outcome o;
    auto t0 = Clock::now();
    long checked = 0;
    for (int k = 1; k <= 3; ++k) {
        // x, y binary variables, and x in [0, 3] against constants.
        for (int variant = 0; variant < 2; ++variant) {
            MilpModel model;
            std::vector<int> guards;
            for (int g = 0; g < k; ++g) guards.push_back(model.add_binary("z" + std::to_string(g)));
            int x = variant == 0 ? model.add_binary("x") : model.add_variable("x", VarKind::continuous, 0.0, 3.0);
            int y = model.add_binary("y");
            std::vector<std::pair<int, int>> rows;
            std::vector<double> constants;
            if (variant == 0) {
                rows.push_back(add_conditional_equality(model, guards, x, Operand{y}));
                constants.push_back(std::nan(""));
            } else {
                for (double c : {0.0, 1.5, 3.0}) {
                    rows.push_back(add_conditional_equality(model, guards, x, Operand{c}));
                    constants.push_back(c);
                }
            }
            std::vector<double> xs = variant == 0 ? std::vector<double>{0, 1}
                                                  : std::vector<double>{0, 0.5, 1, 1.5, 2, 2.5, 3};
            for (int mask = 0; mask < (1 << k); ++mask) {
                for (double xv : xs) {
                    for (double yv : {0.0, 1.0}) {
                        std::vector<double> point(static_cast<std::size_t>(model.num_vars()), 0.0);
                        for (int g = 0; g < k; ++g) point[static_cast<std::size_t>(guards[static_cast<std::size_t>(g)])] = (mask >> g) & 1;
                        point[static_cast<std::size_t>(x)] = xv;
                        point[static_cast<std::size_t>(y)] = yv;
                        bool all_on = mask == (1 << k) - 1;
                        for (std::size_t r = 0; r < rows.size(); ++r) {
                            double target = variant == 0 ? yv : constants[r];
                            bool expect = !all_on || xv == target;
                            bool got = row_satisfied(model.rows[static_cast<std::size_t>(rows[r].first)], point, 0.0) &&
                                       row_satisfied(model.rows[static_cast<std::size_t>(rows[r].second)], point, 0.0);
                            ++checked;
                            if (got != expect) {
                                std::ostringstream s;
                                s << k << " guards, mask " << mask << ", x " << xv << ", target " << target << ": rows say "
                                  << got;
                                o.fail(s.str());
                            }
                        }
                    }
                }
            }
        }
    }
    double secs = seconds_since(t0);
    if (secs >= 1.0) o.fail("took " + std::to_string(secs) + " s");
    std::ostringstream s;
    s << checked << " assignments over 1-3 guards, " << (o.pass ? "all" : "not all") << " agree; " << secs << " s (< 1 s)";
    o.detail = s.str();
    return o;
}

// ---------------------------------------------------------------------------

Outcome oracle_equivalence() {
    Outcome o;
    auto t0 = Clock::now();
    int compared = 0, infeasible = 0, skipped = 0, solves = 0;
    std::uint64_t seed = 1;
    while (compared < 200) {
        auto inst = testing::random_instance(seed++, 2, 6, 4);
        bool skip = false;
        for (auto kind : kKinds) {
            ObjectiveSpec spec;
            spec.kind = kind;
            std::optional<PlanOutcome> out;
            try {
                out = plan(inst.request, inst.inventory, spec);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::grid_too_coarse) {
                    skip = true;
                    break;
                }
                if (e.kind() != ErrorKind::empty_segment) throw;
                if (testing::brute_force(inst.request, inst.inventory, spec).best)
                    o.fail("seed " + std::to_string(seed - 1) + ": empty segment reported but oracle finds a plan");
                continue;
            }
            ++solves;
            auto oracle = testing::brute_force(inst.request, inst.inventory, spec, out->model.rules);
            if (!oracle.best) {
                if (out->result.status != MilpStatus::infeasible)
                    o.fail("seed " + std::to_string(seed - 1) + " " + std::string(to_string(kind)) +
                           ": oracle infeasible, solver " + std::string(to_string(out->result.status)));
                if (kind == ObjectiveKind::min_cost) ++infeasible;
                continue;
            }
            if (out->result.status != MilpStatus::optimal || !out->itinerary) {
                o.fail("seed " + std::to_string(seed - 1) + " " + std::string(to_string(kind)) + ": solver status " +
                       std::string(to_string(out->result.status)));
                continue;
            }
            if (out->itinerary->objective_value != *oracle.best)
                o.fail("seed " + std::to_string(seed - 1) + " " + std::string(to_string(kind)) + ": solver " +
                       std::to_string(out->itinerary->objective_value) + " vs oracle " + std::to_string(*oracle.best));
            if (!check_feasibility(*out->itinerary, inst.request, inst.inventory, out->model.rules).feasible)
                o.fail("seed " + std::to_string(seed - 1) + " " + std::string(to_string(kind)) + ": checker rejects plan");
        }
        if (skip) ++skipped;
        else ++compared;
    }
    double secs = seconds_since(t0);
    if (secs >= 60.0) o.fail("took " + std::to_string(secs) + " s");
    std::ostringstream s;
    s << compared << " instances x 3 objectives (" << solves << " solves, " << infeasible
      << " infeasible instances agreed), " << skipped << " skipped as unrepresentable on a 15-min grid; " << secs
      << " s (< 60 s)";
    o.detail = s.str();
    return o;
}

// ---------------------------------------------------------------------------

GeneratorConfig sweep_config(std::uint64_t seed) {
    GeneratorConfig c;
    c.rng_seed = seed;
    return c;
}

Outcome quality_ratio_protocol() {
    Outcome o;
    const std::uint64_t seed = 2024;
    auto config = sweep_config(seed);
    std::vector<EvalCase> identity, perturbed;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto g = generate_instance(config, i);
        identity.push_back({g.request, g.request, g.inventory, {}});
        Rng rng = stream_for(seed ^ 0x5eed, i);
        auto p = perturb_request(rng, g.request, drop_flip_spec(0.1));
        perturbed.push_back({g.request, p.request, g.inventory, p.changes});
    }
    EvalOptions opt;
    auto id = run_eval(identity, opt);
    if (id.em_accuracy != 1.0) o.fail("identity EM " + std::to_string(id.em_accuracy));
    if (id.ratio_mean != 1.0) o.fail("identity ratio mean " + std::to_string(id.ratio_mean));
    if (id.subset_std != 0.0) o.fail("identity subset std " + std::to_string(id.subset_std));
    if (id.subset_mean != 1.0) o.fail("identity subset mean " + std::to_string(id.subset_mean));

    auto pr = run_eval(perturbed, opt);
    int violating = 0, zero = 0;
    for (std::size_t i = 0; i < perturbed.size(); ++i) {
        const auto& c = perturbed[i];
        double score = pr.cases[i].quality.score;
        if (!(score >= 0.0 && score <= 1.0)) o.fail("case " + std::to_string(i) + " score " + std::to_string(score));
        // Independent check: plan x-hat, judge the plan against x.
        auto truth = plan(c.request, c.inventory, ObjectiveSpec{});
        bool breaks = false;
        try {
            auto guess = plan(c.estimate, c.inventory, ObjectiveSpec{});
            breaks = !guess.itinerary ||
                     !check_feasibility(*guess.itinerary, c.request, c.inventory, truth.model.rules).feasible;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::empty_segment && e.kind() != ErrorKind::infeasible_request) throw;
            breaks = true;
        }
        violating += breaks;
        zero += score == 0.0;
        if (breaks && score != 0.0) o.fail("case " + std::to_string(i) + " breaks x but scores " + std::to_string(score));
        if (!breaks && score == 0.0) o.fail("case " + std::to_string(i) + " scores 0 without breaking x");
    }
    if (pr.subset_means.size() != 8) o.fail("expected 8 subsets, got " + std::to_string(pr.subset_means.size()));
    std::cout << render_report(pr);
    std::ostringstream s;
    s << "identity EM " << id.em_accuracy << ", ratio mean " << id.ratio_mean << ", subset std " << id.subset_std
      << "; drop/flip p=0.1: EM " << pr.em_accuracy << ", " << violating << " checker-violating cases, " << zero
      << " zero scores, 8-subset ratio " << pr.subset_mean << " +- " << pr.subset_std;
    o.detail = s.str();
    return o;
}

// ---------------------------------------------------------------------------

Outcome structural_invariants() {
    Outcome o;
    auto config = sweep_config(7);
    int solved = 0, infeasible = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto g = generate_instance(config, i);
        for (auto kind : kKinds) {
            std::string tag = "instance " + std::to_string(i) + " " + std::string(to_string(kind)) + ": ";
            ObjectiveSpec spec;
            spec.kind = kind;
            PlanOutcome out;
            try {
                out = plan(g.request, g.inventory, spec);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::empty_segment && e.kind() != ErrorKind::infeasible_request) throw;
                ++infeasible;
                continue;
            }
            if (!out.itinerary) {
                ++infeasible;
                continue;
            }
            ++solved;
            const auto& m = out.model;
            const auto& x = out.result.x;
            auto val = [&](int v) { return std::lround(x[static_cast<std::size_t>(v)]); };
            int n_loc = static_cast<int>(m.locations.size());
            for (int t = 0; t < m.grid.T; ++t) {
                long sum = 0;
                for (int l = 0; l < n_loc; ++l) sum += val(m.u(l, t));
                if (sum != 1) o.fail(tag + "slot " + std::to_string(t) + " has " + std::to_string(sum) + " locations");
            }
            for (int t = 0; t + 1 < m.grid.T; ++t) {
                if (val(m.e(t)) != 0) continue;
                for (int l = 0; l < n_loc; ++l)
                    if (val(m.u(l, t)) != val(m.u(l, t + 1)))
                        o.fail(tag + "location changes at slot " + std::to_string(t) + " without an event");
            }
            for (std::size_t n = 0; n < m.grid.evening.size(); ++n) {
                long sleep = 0;
                for (int t : m.grid.evening[n]) sleep += val(m.m(t));
                if (sleep < m.sleep_slots) o.fail(tag + "night " + std::to_string(n) + " sleeps " + std::to_string(sleep));
            }
            for (std::size_t k = 0; k < m.segment_flights.size(); ++k) {
                long picked = 0;
                for (int f : m.segment_flights[k]) picked += val(m.flight_var[static_cast<std::size_t>(f)]);
                if (picked != 1) o.fail(tag + "segment " + std::to_string(k) + " has " + std::to_string(picked) + " flights");
            }
            const auto& it = *out.itinerary;
            const auto& req = g.request;
            if (it.chosen_flights.size() != req.segments.size()) o.fail(tag + "itinerary flight count");
            for (std::size_t k = 0; k < it.chosen_flights.size(); ++k) {
                const auto* f = g.inventory.find_flight(it.chosen_flights[k]);
                if (!f || f->segment != static_cast<int>(k)) o.fail(tag + "flight " + std::to_string(k) + " on wrong segment");
            }
            Cents flights = 0, hotels = 0;
            std::map<Date, Cents> nightly;
            for (const auto& id : it.chosen_flights) flights += g.inventory.find_flight(id)->price;
            for (const auto& s : it.hotel_stays) {
                Cents price = g.inventory.find_hotel(s.hotel_id)->nightly_price;
                for (Date d = s.check_in; d < s.check_out; d = d + 1) {
                    nightly[d] += price;
                    hotels += price;
                }
            }
            const auto& b = req.budget;
            if (b.total_budget && flights + hotels > *b.total_budget) o.fail(tag + "total budget exceeded");
            if (b.flight_total_budget && flights > *b.flight_total_budget) o.fail(tag + "flight budget exceeded");
            if (b.hotel_total_budget && hotels > *b.hotel_total_budget) o.fail(tag + "hotel budget exceeded");
            if (b.hotel_daily_budget)
                for (const auto& [d, c] : nightly)
                    if (c > *b.hotel_daily_budget) o.fail(tag + "daily hotel budget exceeded on " + format_date(d));
            if (flights + hotels != it.total_cost) o.fail(tag + "total_cost does not add up");
            if (!check_feasibility(it, req, g.inventory, m.rules).feasible) o.fail(tag + "checker rejects plan");
        }
    }
    std::ostringstream s;
    s << solved << " solved plans over 100 instances x 3 objectives (" << infeasible << " without a plan); "
      << (o.pass ? "zero violations" : "violations found");
    o.detail = s.str();
    if (solved == 0) o.fail("nothing solved");
    return o;
}

// ---------------------------------------------------------------------------

Outcome latency_class() {
    Outcome o;
    GeneratorConfig c;
    c.rng_seed = 2026;
    c.p_one_way = 0.0;
    c.p_three_cities = 1.0;
    c.flights_per_segment = {45, 55};
    c.hotels_per_city = {18, 22};
    ProfileReport r;
    double worst_load = 0.0, worst_solve = 0.0;
    std::size_t off_grid = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto g = generate_instance(c, i);
        ObjectiveSpec spec;
        auto out = plan(g.request, g.inventory, spec);
        add_sample(r, out.result);
        off_grid += out.model.rules.slot_minutes != 60;
        worst_load = std::max(worst_load, out.result.timing.load_ms);
        worst_solve = std::max(worst_solve, out.result.timing.solve_ms);
        std::string tag = "instance " + std::to_string(i) + ": ";
        if (out.result.status != MilpStatus::optimal) o.fail(tag + std::string(to_string(out.result.status)));
        if (out.result.timing.load_ms >= 500.0) o.fail(tag + "load " + std::to_string(out.result.timing.load_ms) + " ms");
        if (out.result.timing.solve_ms >= 2000.0) o.fail(tag + "solve " + std::to_string(out.result.timing.solve_ms) + " ms");
    }
    std::cout << render_timing_table(r);
    std::ostringstream s;
    s.precision(3);
    s << std::fixed << "load mean " << r.load().mean / 1000 << " s, max " << worst_load / 1000 << " s (< 0.5 s); solve mean "
      << r.solve().mean / 1000 << " s, max " << worst_solve / 1000 << " s (< 2 s); " << r.optimal
      << "/100 proven optimal, " << off_grid << " refined below 60 min";
    o.detail = s.str();
    return o;
}

// ---------------------------------------------------------------------------

Outcome option_ordering() {
    Outcome o;
    ServiceConfig cfg;
    auto config = sweep_config(11);
    int compared = 0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        auto g = generate_instance(config, i);
        nlohmann::json body = {{"request", to_json(g.request)}, {"inventory", to_json(g.inventory)}};
        auto reply = handle_solve(body.dump(), cfg);
        std::string tag = "instance " + std::to_string(i) + ": ";
        if (reply.status != 200) {
            o.fail(tag + "status " + std::to_string(reply.status) + " " + reply.body);
            continue;
        }
        auto j = nlohmann::json::parse(reply.body)["options"];
        const auto &lo = j["min_cost"], &bh = j["better_hotel"], &bf = j["better_flight"];
        if (lo["itinerary"].is_null() || bh["itinerary"].is_null() || bf["itinerary"].is_null()) {
            o.fail(tag + "an option has no itinerary");
            continue;
        }
        ++compared;
        auto cost = [](const nlohmann::json& opt) { return opt["total_cost"].get<Cents>(); };
        if (cost(lo) > cost(bh)) o.fail(tag + "min_cost " + std::to_string(cost(lo)) + " > better_hotel " + std::to_string(cost(bh)));
        if (cost(lo) > cost(bf)) o.fail(tag + "min_cost " + std::to_string(cost(lo)) + " > better_flight " + std::to_string(cost(bf)));
        if (!lo["mean_hotel_rating"].is_null() &&
            bh["mean_hotel_rating"].get<double>() < lo["mean_hotel_rating"].get<double>())
            o.fail(tag + "better_hotel rating below min_cost's");
    }
    std::ostringstream s;
    s << compared << "/50 instances with three options; " << (o.pass ? "zero counterexamples" : "counterexamples found");
    o.detail = s.str();
    return o;
}

// ---------------------------------------------------------------------------

double binomial_sigma(double n, double p) { return std::sqrt(n * p * (1.0 - p)); }

Outcome generator_statistics() {
    Outcome o;
    GeneratorConfig c;
    c.rng_seed = 99;
    const std::size_t n = 10000;
    DatasetSummary s;
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = stream_for(c.rng_seed, i);
        add_to_summary(s, sample_request(rng, c));
    }
    double nn = static_cast<double>(n);
    double one_way = static_cast<double>(s.one_way) / nn;
    if (one_way >= 0.05) o.fail("one-way fraction " + std::to_string(one_way));
    if (std::abs(static_cast<double>(s.one_way) - nn * c.p_one_way) > 3 * binomial_sigma(nn, c.p_one_way))
        o.fail("one-way count " + std::to_string(s.one_way) + " outside 3 sigma of " + std::to_string(nn * c.p_one_way));
    auto check_counts = [&](const char* what, const std::map<int, std::size_t>& seen, const std::map<int, double>& weights,
                            int lo, int hi) {
        double total = 0.0;
        for (const auto& [k, w] : weights) total += w;
        for (const auto& [k, count] : seen)
            if (k < lo || k > hi) o.fail(std::string(what) + " count " + std::to_string(k) + " outside " + std::to_string(lo) + "-" + std::to_string(hi));
        for (const auto& [k, w] : weights) {
            double p = w / total;
            double got = seen.count(k) ? static_cast<double>(seen.at(k)) : 0.0;
            if (std::abs(got - nn * p) > 3 * binomial_sigma(nn, p))
                o.fail(std::string(what) + " count " + std::to_string(k) + ": " + std::to_string(got) + " vs expected " +
                       std::to_string(nn * p));
        }
    };
    check_counts("airline", s.airline_counts, c.airline_count_weights, 4, 8);
    check_counts("hotel", s.hotel_counts, c.hotel_count_weights, 2, 4);
    std::ostringstream d;
    d << n << " samples: one-way " << 100.0 * one_way << "% (< 5%); airline counts";
    for (const auto& [k, v] : s.airline_counts) d << " " << k << ":" << v;
    d << "; hotel counts";
    for (const auto& [k, v] : s.hotel_counts) d << " " << k << ":" << v;
    d << "; all within 3 sigma: " << (o.pass ? "yes" : "no");
    o.detail = d.str();
    return o;
}

// ---------------------------------------------------------------------------

int run_cli(const std::string& args, const fs::path& out) {
    std::string cmd = std::string(TTG_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
    Outcome o;
    fs::path dir = fs::temp_directory_path() / ("ttg_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto slurp = [](const fs::path& p) { return testing::read_file(p.string()); };
    for (const char* name : {"a", "b"}) {
        std::string file = (dir / (std::string(name) + ".jsonl")).string();
        if (run_cli("generate --n 100 --seed 1 --out " + file, dir / (std::string(name) + ".txt")) != 0)
            o.fail(std::string("generate run ") + name + " failed");
    }
    auto a = slurp(dir / "a.jsonl");
    if (a.empty() || a != slurp(dir / "b.jsonl")) o.fail("generated datasets differ");
    if (slurp(dir / "a.txt") != slurp(dir / "b.txt")) o.fail("generate summaries differ");

    std::string req = testing::data_path("den_mia_jfk_request.json");
    std::string inv = testing::data_path("den_mia_jfk_inventory.json");
    int solves = 0;
    for (const char* objective : {"min_cost", "better_hotel", "better_flight"}) {
        std::string base = "solve --request " + req + " --inventory " + inv + " --objective " + objective;
        for (const char* name : {"s1", "s2"}) {
            std::string stem = std::string(objective) + "_" + name;
            if (run_cli(base + " --out " + (dir / (stem + ".json")).string(), dir / (stem + ".txt")) != 0)
                o.fail(std::string("solve ") + objective + " failed");
            ++solves;
        }
        for (const char* ext : {".txt", ".json"}) {
            auto first = slurp(dir / (std::string(objective) + "_s1" + ext));
            if (first.empty() || first != slurp(dir / (std::string(objective) + "_s2" + ext)))
                o.fail(std::string("solve ") + objective + " output " + ext + " differs");
        }
    }
    fs::remove_all(dir);
    std::ostringstream s;
    s << "generate --n 100 --seed 1 twice (" << a.size() << " bytes), " << solves << " solve runs; "
      << (o.pass ? "byte-identical" : "outputs differ");
    o.detail = s.str();
    return o;
}

}  // namespace
}  // namespace ttg

int main() {
    using namespace ttg;
    run("big-m truth tables", big_m_truth_tables);
    run("oracle equivalence", oracle_equivalence);
    run("quality-ratio protocol", quality_ratio_protocol);
    run("structural invariants", structural_invariants);
    run("latency class", latency_class);
    run("objective option ordering", option_ordering);
    run("generator statistics", generator_statistics);
    run("cli determinism", cli_determinism);
    std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed") << "\n";
    return g_failures == 0 ? 0 : 1;
}
