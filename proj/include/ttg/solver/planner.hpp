#pragma once

#include <optional>

#include "ttg/model/builder.hpp"
#include "ttg/model/extract.hpp"
#include "ttg/solver/branch_and_bound.hpp"

namespace ttg {

struct PlanOutcome {
    MilpModel model;
    MilpResult result;
    std::optional<Itinerary> itinerary;  // present when the search found an incumbent
};

/// Filter, build (retrying on finer grids when a flight is too short), solve and
/// extract. load_ms covers building and presolve, solve_ms the search.
inline PlanOutcome plan(const TravelRequest& req, const Inventory& inv, const ObjectiveSpec& objective,
                        const SolverParams& params = {}, const PlanningRules& rules = {}) {
    auto t0 = SteadyClock::now();
    PlanOutcome out;
    out.model = compile_with_retry(req, inv, objective, rules);
    double build_ms = detail::ms_between(t0, SteadyClock::now());
    out.result = solve_milp(out.model, params);
    out.result.timing.load_ms += build_ms;
    out.result.timing.total_ms = out.result.timing.load_ms + out.result.timing.solve_ms;
    if (out.result.has_incumbent()) out.itinerary = extract_itinerary(out.model, out.result.x);
    return out;
}

inline MilpResult profile_solve(const TravelRequest& req, const Inventory& inv, ObjectiveKind objective,
                                const SolverParams& params = {}, const PlanningRules& rules = {}) {
    ObjectiveSpec spec;
    spec.kind = objective;
    return plan(req, inv, spec, params, rules).result;
}

}  // namespace ttg
