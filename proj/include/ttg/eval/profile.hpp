#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttg/error.hpp"
#include "ttg/solver/planner.hpp"

namespace ttg {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population
    double max = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& v) {
    MeanStd s;
    if (v.empty()) return s;
    for (double x : v) {
        s.mean += x;
        s.max = std::max(s.max, x);
    }
    s.mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(var / static_cast<double>(v.size()));
    return s;
}

struct ProfileReport {
    std::size_t instances = 0;
    std::size_t optimal = 0;
    std::size_t infeasible = 0;
    std::size_t time_limited = 0;
    std::vector<double> load_ms, solve_ms, total_ms;

    MeanStd load() const { return mean_std(load_ms); }
    MeanStd solve() const { return mean_std(solve_ms); }
    MeanStd total() const { return mean_std(total_ms); }
};

inline void add_sample(ProfileReport& r, const MilpResult& res) {
    ++r.instances;
    r.optimal += res.status == MilpStatus::optimal;
    r.infeasible += res.status == MilpStatus::infeasible;
    r.time_limited += res.status == MilpStatus::time_limit_with_incumbent || res.status == MilpStatus::time_limit_no_incumbent;
    r.load_ms.push_back(res.timing.load_ms);
    r.solve_ms.push_back(res.timing.solve_ms);
    r.total_ms.push_back(res.timing.total_ms);
}

/// Three phase rows, seconds, mean +- population std.
inline std::string render_timing_table(const ProfileReport& r) {
    std::string out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-24s %s\n", "Response phase", "Time (s)");
    out += buf;
    std::snprintf(buf, sizeof buf, "%-24s\n", "MILP Solver");
    out += buf;
    auto row = [&](const char* name, const MeanStd& s) {
        std::snprintf(buf, sizeof buf, "%-24s %.3f +- %.3f\n", name, s.mean / 1000.0, s.std / 1000.0);
        out += buf;
    };
    row(" - Loading constraints", r.load());
    row(" - Solving", r.solve());
    row(" - Total", r.total());
    std::snprintf(buf, sizeof buf, "over %zu instances (%zu optimal, %zu infeasible, %zu time-limited)\n", r.instances,
                  r.optimal, r.infeasible, r.time_limited);
    out += buf;
    return out;
}

inline nlohmann::json to_json(const ProfileReport& r) {
    auto phase = [](const MeanStd& s) { return nlohmann::json{{"mean_ms", s.mean}, {"std_ms", s.std}, {"max_ms", s.max}}; };
    return {{"instances", r.instances},
            {"optimal", r.optimal},
            {"infeasible", r.infeasible},
            {"time_limited", r.time_limited},
            {"load", phase(r.load())},
            {"solve", phase(r.solve())},
            {"total", phase(r.total())}};
}

}  // namespace ttg
