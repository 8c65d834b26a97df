#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ttg/error.hpp"
#include "ttg/generator/perturb.hpp"
#include "ttg/schema/canonical.hpp"
#include "ttg/schema/checker.hpp"
#include "ttg/schema/json_io.hpp"
#include "ttg/solver/planner.hpp"

namespace ttg {

struct EvalCase {
    TravelRequest request;   // ground truth x
    TravelRequest estimate;  // translator output x-hat
    Inventory inventory;
    std::vector<AppliedPerturbation> changes;
};

struct ExactMatch {
    bool matched = false;
    std::vector<std::string> differing_fields;
};

inline ExactMatch exact_match(const TravelRequest& x, const TravelRequest& x_hat) {
    ExactMatch m;
    m.matched = canonicalize(x).text == canonicalize(x_hat).text;
    if (!m.matched) m.differing_fields = differing_fields(x, x_hat);
    return m;
}

struct QualityParams {
    SolverParams solver;
    PlanningRules rules;
    ObjectiveKind estimate_objective = ObjectiveKind::min_cost;
};

enum class ScoreReason { exact_match, scored, estimate_infeasible, violates_request };

inline std::string_view to_string(ScoreReason r) {
    switch (r) {
        case ScoreReason::exact_match: return "exact_match";
        case ScoreReason::scored: return "scored";
        case ScoreReason::estimate_infeasible: return "estimate_infeasible";
        case ScoreReason::violates_request: return "violates_request";
    }
    return "?";
}

struct QualityResult {
    double score = 0.0;
    ScoreReason reason = ScoreReason::scored;
    Cents optimal_cost = 0;                // f(s; x, G)
    std::optional<Cents> estimate_cost;    // f(s-hat; x, G) when s-hat exists
    std::vector<Violation> violations;     // of s-hat against x
};

/// Ratio f(s)/f(s-hat) where s solves x, s-hat solves x-hat and f is money plus
/// x's soft-window penalties. Zero when x-hat has no plan or its plan breaks x.
inline QualityResult quality_ratio(const TravelRequest& x, const TravelRequest& x_hat, const Inventory& inv,
                                   const QualityParams& params = {}) {
    QualityResult out;
    PlanOutcome truth;
    try {
        truth = plan(x, inv, ObjectiveSpec{ObjectiveKind::min_cost}, params.solver, params.rules);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::empty_segment || e.kind() == ErrorKind::infeasible_request)
            throw Error(ErrorKind::oracle_infeasible, "ground-truth request has no plan: " + e.message(), e.field());
        throw;
    }
    if (truth.result.status == MilpStatus::infeasible)
        throw Error(ErrorKind::oracle_infeasible, "ground-truth request has no feasible plan");
    if (!truth.itinerary) throw Error(ErrorKind::time_limit, "no plan for the ground-truth request within the time limit");
    const PlanningRules& judge = truth.model.rules;
    out.optimal_cost = plan_cost(*truth.itinerary, x, inv, judge);

    if (canonicalize(x).text == canonicalize(x_hat).text) {
        out.score = 1.0;
        out.reason = ScoreReason::exact_match;
        out.estimate_cost = out.optimal_cost;
        return out;
    }
    PlanOutcome guess;
    try {
        guess = plan(x_hat, inv, ObjectiveSpec{params.estimate_objective}, params.solver, params.rules);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::empty_segment && e.kind() != ErrorKind::infeasible_request) throw;
        out.reason = ScoreReason::estimate_infeasible;
        return out;
    }
    if (guess.result.status == MilpStatus::infeasible) {
        out.reason = ScoreReason::estimate_infeasible;
        return out;
    }
    if (!guess.itinerary) throw Error(ErrorKind::time_limit, "no plan for the estimated request within the time limit");
    auto report = check_feasibility(*guess.itinerary, x, inv, judge);
    out.estimate_cost = plan_cost(*guess.itinerary, x, inv, judge);
    if (!report.feasible) {
        out.reason = ScoreReason::violates_request;
        out.violations = report.violations;
        return out;
    }
    // A time-limited ground-truth search may return a plan worse than s-hat;
    // s-hat is then the better known plan for x and the score is 1.
    out.score = std::min(1.0, static_cast<double>(out.optimal_cost) / static_cast<double>(*out.estimate_cost));
    return out;
}

struct CaseRecord {
    std::size_t index = 0;
    std::string request_id;
    bool matched = false;
    std::vector<std::string> differing_fields;
    QualityResult quality;
};

struct Bucket {
    std::size_t samples = 0;
    std::size_t matched = 0;

    double em_accuracy() const { return samples ? static_cast<double>(matched) / static_cast<double>(samples) : 0.0; }
};

struct CaseFailure {
    std::size_t index = 0;
    ErrorKind kind = ErrorKind::invalid_argument;
    std::string message;
};

struct EvalReport {
    std::size_t n_cases = 0;
    std::size_t matched = 0;
    double em_accuracy = 0.0;
    double ratio_mean = 0.0;                  // over all scored cases
    std::vector<double> subset_means;         // in input order
    std::vector<std::size_t> subset_sizes;
    double subset_mean = 0.0;                 // mean of subset means
    double subset_std = 0.0;                  // population std of subset means
    std::optional<double> non_em_ratio_mean;  // over cases that are not an exact match
    std::size_t zero_scores = 0;
    std::map<int, Bucket> by_airline_count;
    std::map<int, Bucket> by_hotel_count;
    std::map<int, Bucket> by_city_count;
    std::map<std::string, std::size_t> error_fields;        // every differing field of every non-EM case
    std::map<std::string, std::size_t> first_error_fields;  // first differing field per non-EM case
    std::vector<CaseRecord> cases;
    std::vector<CaseFailure> failures;
};

struct EvalOptions {
    int subsets = 8;
    unsigned jobs = 1;
    bool keep_going = false;  // collect case failures instead of throwing the first one
    QualityParams quality;
};

/// Sizes of `k` contiguous subsets of `n` items in input order; the first n % k
/// subsets take one extra item. Never more subsets than items.
inline std::vector<std::size_t> partition_sizes(std::size_t n, int k) {
    std::size_t parts = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, k)));
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < parts; ++i) out.push_back(n / parts + (i < n % parts ? 1 : 0));
    return out;
}

inline CaseRecord evaluate_case(const EvalCase& c, std::size_t index, const QualityParams& params) {
    CaseRecord r;
    r.index = index;
    r.request_id = c.request.request_id;
    auto em = exact_match(c.request, c.estimate);
    r.matched = em.matched;
    r.differing_fields = std::move(em.differing_fields);
    r.quality = quality_ratio(c.request, c.estimate, c.inventory, params);
    return r;
}

inline EvalReport run_eval(const std::vector<EvalCase>& cases, const EvalOptions& opt = {}) {
    if (cases.empty()) throw Error(ErrorKind::invalid_argument, "evaluation needs at least one case", "cases");
    opt.quality.solver.validate();
    std::vector<std::optional<CaseRecord>> records(cases.size());
    std::vector<std::optional<CaseFailure>> failed(cases.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i; (i = next.fetch_add(1)) < cases.size();) {
            try {
                records[i] = evaluate_case(cases[i], i, opt.quality);
            } catch (const Error& e) {
                failed[i] = CaseFailure{i, e.kind(), e.what()};
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::max(1u, opt.jobs); ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    EvalReport rep;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (!failed[i]) continue;
        if (!opt.keep_going)
            throw Error(failed[i]->kind, "case " + std::to_string(i) + ": " + failed[i]->message, "cases[" + std::to_string(i) + "]");
        rep.failures.push_back(*failed[i]);
    }

    double total = 0.0, non_em_total = 0.0;
    std::size_t non_em = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (!records[i]) continue;
        const auto& r = *records[i];
        const auto& x = cases[i].request;
        ++rep.n_cases;
        rep.matched += r.matched;
        total += r.quality.score;
        rep.zero_scores += r.quality.score == 0.0;
        for (auto* b : {&rep.by_airline_count[x.airline.count()], &rep.by_hotel_count[x.hotel.count()],
                        &rep.by_city_count[x.city_count()]}) {
            ++b->samples;
            b->matched += r.matched;
        }
        if (!r.matched) {
            ++non_em;
            non_em_total += r.quality.score;
            for (const auto& f : r.differing_fields) ++rep.error_fields[f];
            if (!r.differing_fields.empty()) ++rep.first_error_fields[r.differing_fields.front()];
        }
        rep.cases.push_back(r);
    }
    if (rep.n_cases == 0) return rep;
    rep.em_accuracy = static_cast<double>(rep.matched) / static_cast<double>(rep.n_cases);
    rep.ratio_mean = total / static_cast<double>(rep.n_cases);
    if (non_em) rep.non_em_ratio_mean = non_em_total / static_cast<double>(non_em);

    rep.subset_sizes = partition_sizes(rep.cases.size(), opt.subsets);
    std::size_t pos = 0;
    for (auto size : rep.subset_sizes) {
        double s = 0.0;
        for (std::size_t i = 0; i < size; ++i) s += rep.cases[pos + i].quality.score;
        pos += size;
        rep.subset_means.push_back(s / static_cast<double>(size));
    }
    double m = 0.0;
    for (double v : rep.subset_means) m += v;
    m /= static_cast<double>(rep.subset_means.size());
    double var = 0.0;
    for (double v : rep.subset_means) var += (v - m) * (v - m);
    rep.subset_mean = m;
    rep.subset_std = std::sqrt(var / static_cast<double>(rep.subset_means.size()));
    return rep;
}

inline nlohmann::json to_json(const EvalReport& r) {
    using nlohmann::json;
    auto buckets = [](const std::map<int, Bucket>& m) {
        json j = json::object();
        for (const auto& [k, b] : m) j[std::to_string(k)] = {{"samples", b.samples}, {"em_accuracy", b.em_accuracy()}};
        return j;
    };
    json cases = json::array();
    for (const auto& c : r.cases) {
        json q = {{"score", c.quality.score},
                  {"reason", to_string(c.quality.reason)},
                  {"optimal_cost", c.quality.optimal_cost},
                  {"estimate_cost", c.quality.estimate_cost ? json(*c.quality.estimate_cost) : json()}};
        json v = json::array();
        for (const auto& viol : c.quality.violations) v.push_back({{"field", viol.field}, {"detail", viol.detail}});
        q["violations"] = v;
        cases.push_back({{"index", c.index},
                         {"request_id", c.request_id},
                         {"exact_match", c.matched},
                         {"differing_fields", c.differing_fields},
                         {"quality", q}});
    }
    json failures = json::array();
    for (const auto& f : r.failures)
        failures.push_back({{"index", f.index}, {"error", to_string(f.kind)}, {"message", f.message}});
    return {{"n_cases", r.n_cases},
            {"exact_matches", r.matched},
            {"em_accuracy", r.em_accuracy},
            {"quality_ratio",
             {{"mean", r.ratio_mean},
              {"subset_mean", r.subset_mean},
              {"subset_std", r.subset_std},
              {"subset_means", r.subset_means},
              {"subset_sizes", r.subset_sizes},
              {"non_em_mean", r.non_em_ratio_mean ? json(*r.non_em_ratio_mean) : json()},
              {"zero_scores", r.zero_scores}}},
            {"by_airline_constraints", buckets(r.by_airline_count)},
            {"by_hotel_constraints", buckets(r.by_hotel_count)},
            {"by_cities", buckets(r.by_city_count)},
            {"error_sources",
             {{"counting", "one count per differing field of each non-exact-match case"},
              {"fields", r.error_fields},
              {"first_field", r.first_error_fields}}},
            {"cases", cases},
            {"failures", failures}};
}

/// Text rendering: constraint-count breakdown, subset mean and std, error sources.
inline std::string render_report(const EvalReport& r) {
    std::ostringstream os;
    char buf[64];
    auto pct = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
        return std::string(buf);
    };
    auto table = [&](const char* title, const std::map<int, Bucket>& m) {
        std::ostringstream head, acc, n;
        std::snprintf(buf, sizeof buf, "%-20s", title);
        head << buf;
        std::snprintf(buf, sizeof buf, "%-20s", "EM Accuracy");
        acc << buf;
        std::snprintf(buf, sizeof buf, "%-20s", "# samples");
        n << buf;
        for (const auto& [k, b] : m) {
            std::snprintf(buf, sizeof buf, "%8d", k);
            head << buf;
            std::snprintf(buf, sizeof buf, "%8s", pct(b.em_accuracy()).c_str());
            acc << buf;
            std::snprintf(buf, sizeof buf, "%8zu", b.samples);
            n << buf;
        }
        os << head.str() << '\n' << acc.str() << '\n' << n.str() << '\n';
    };
    os << "cases " << r.n_cases << ", exact matches " << r.matched << " (" << pct(r.em_accuracy) << ")\n";
    std::snprintf(buf, sizeof buf, "%.3f +- %.3f", r.subset_mean, r.subset_std);
    os << "quality ratio " << buf << " over " << r.subset_means.size() << " subsets";
    if (r.non_em_ratio_mean) {
        std::snprintf(buf, sizeof buf, "%.3f", *r.non_em_ratio_mean);
        os << "; non-exact-match mean " << buf;
    }
    os << "; zero scores " << r.zero_scores << "\n\n";
    table("Hotel Constraints", r.by_hotel_count);
    os << '\n';
    table("Airline Constraints", r.by_airline_count);
    os << '\n';
    table("Cities", r.by_city_count);
    if (!r.error_fields.empty()) {
        os << "\nerror sources (per differing field)\n";
        std::vector<std::pair<std::size_t, std::string>> sorted;
        for (const auto& [f, n] : r.error_fields) sorted.push_back({n, f});
        std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        for (const auto& [n, f] : sorted) os << "  " << f << ": " << n << '\n';
    }
    if (!r.failures.empty()) {
        os << "\nfailed cases:";
        for (const auto& f : r.failures) os << ' ' << f.index;
        os << '\n';
    }
    return os.str();
}

inline std::string serialize(const EvalCase& c) {
    nlohmann::json j = {{"request", to_json(c.request)}, {"estimate", to_json(c.estimate)}, {"inventory", to_json(c.inventory)}};
    if (!c.changes.empty()) {
        nlohmann::json ch = nlohmann::json::array();
        for (const auto& a : c.changes) ch.push_back(to_json(a));
        j["changes"] = ch;
    }
    return j.dump();
}

inline EvalCase parse_eval_case(std::string_view line) {
    auto j = parse_json_text(line);
    detail::FieldReader root(j, "", {"request", "estimate", "inventory", "changes"});
    EvalCase c;
    c.request = request_from_json(root.require("request"));
    c.estimate = request_from_json(root.require("estimate"));
    c.inventory = inventory_from_json(root.require("inventory"), &c.request);
    if (root.has("changes"))
        for (const auto& a : root.raw("changes")) c.changes.push_back(applied_perturbation_from_json(a));
    return c;
}

}  // namespace ttg
