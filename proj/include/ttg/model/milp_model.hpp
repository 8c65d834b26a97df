#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "ttg/error.hpp"
#include "ttg/schema/rules.hpp"
#include "ttg/schema/types.hpp"

namespace ttg {

enum class VarKind { binary, continuous };

/// What a variable means in the travel model; `other` for hand-built models.
enum class VarRole { location, sleep, event, flight, hotel, other };

struct Variable {
    std::string name;
    VarKind kind = VarKind::binary;
    double lb = 0.0;
    double ub = 1.0;
    VarRole role = VarRole::other;
    int a = -1;  // location index / flight index / stay index
    int t = -1;  // slot for location, sleep and event variables
};

enum class Sense { le, eq, ge };

struct Term {
    int var;
    double coef;
};

struct Row {
    std::string label;
    std::vector<Term> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
};

/// Big-M constants picked for one conditional constraint (one entry per emitted row).
struct BigMEntry {
    int row;
    double big_m;
};

struct TimeGrid {
    int slot_minutes = 60;
    std::int64_t origin_slot = 0;  // absolute slot of index 0
    int T = 0;
    std::vector<Date> nights;
    std::vector<std::vector<int>> evening;  // per night, slot indices

    DateTime start() const { return DateTime{origin_slot * slot_minutes}; }
    int rel(std::int64_t absolute_slot) const { return static_cast<int>(absolute_slot - origin_slot); }
};

/// Weights for the three itinerary options. Weighted objectives are scaled by
/// 1000 so every coefficient is an integer.
struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::min_cost;
    int hotel_weight_permille = 300;
    int flight_weight_permille = 300;
    Cents hotel_quality_cents = 20000;   // bonus per night for a full 1..5 rating span
    Cents flight_quality_cents = 30000;  // bonus per flight for basic economy -> first

    std::int64_t scale() const { return kind == ObjectiveKind::min_cost ? 1 : 1000; }

    void validate() const {
        if (hotel_weight_permille < 0 || hotel_weight_permille > 1000 || flight_weight_permille < 0 ||
            flight_weight_permille > 1000)
            throw Error(ErrorKind::invalid_argument, "weights must be in [0, 1000] permille", "objective");
        if (hotel_quality_cents < 0 || hotel_quality_cents % 4 != 0 || flight_quality_cents < 0 ||
            flight_quality_cents % 3 != 0)
            throw Error(ErrorKind::invalid_argument, "quality scales must be non-negative multiples of 4 and 3",
                        "objective");
    }
};

struct CandidateStay {
    int hotel = 0;  // index into MilpModel::inventory.hotels
    int block = 0;
    Date check_in;
    Date check_out;
    Cents cost = 0;
    int first_slot = 0;  // covered slots [first_slot, end_slot), grid-relative
    int end_slot = 0;
};

struct MilpModel {
    std::vector<Variable> vars;
    std::vector<Row> rows;
    std::vector<double> objective;  // one coefficient per variable, minimised
    double objective_offset = 0.0;
    int sleep_slots = 0;            // L
    std::vector<BigMEntry> big_m;   // M registry

    // Travel semantics; empty for hand-built models.
    TravelRequest request;
    Inventory inventory;  // filtered offers the model was built from
    ObjectiveSpec objective_spec;
    PlanningRules rules;
    TimeGrid grid;
    std::vector<std::string> locations;  // cities then "AIR"
    std::vector<std::vector<int>> segment_flights;
    std::vector<CandidateStay> stays;
    std::vector<StayBlock> blocks;
    std::vector<std::vector<int>> block_stays;
    std::vector<int> flight_var;  // per inventory flight, -1 when unused
    std::vector<int> stay_var;
    int u_base = 0, m_base = 0, e_base = 0;

    int num_vars() const { return static_cast<int>(vars.size()); }
    int air() const { return static_cast<int>(locations.size()) - 1; }
    int u(int loc, int t) const { return u_base + t * static_cast<int>(locations.size()) + loc; }
    int m(int t) const { return m_base + t; }
    int e(int t) const { return e_base + t; }

    int add_variable(std::string name, VarKind kind, double lb, double ub, VarRole role = VarRole::other, int a = -1,
                     int t = -1) {
        vars.push_back({std::move(name), kind, lb, ub, role, a, t});
        objective.push_back(0.0);
        return num_vars() - 1;
    }
    int add_binary(std::string name, VarRole role = VarRole::other, int a = -1, int t = -1) {
        return add_variable(std::move(name), VarKind::binary, 0.0, 1.0, role, a, t);
    }
    int add_row(std::string label, std::vector<Term> terms, Sense sense, double rhs) {
        rows.push_back({std::move(label), std::move(terms), sense, rhs});
        return static_cast<int>(rows.size()) - 1;
    }

    bool is_integer(int j) const { return vars[static_cast<std::size_t>(j)].kind == VarKind::binary; }
};

inline double row_activity(const Row& row, const std::vector<double>& x) {
    double s = 0.0;
    for (const auto& term : row.terms) s += term.coef * x[static_cast<std::size_t>(term.var)];
    return s;
}

inline bool row_satisfied(const Row& row, const std::vector<double>& x, double tol) {
    double act = row_activity(row, x);
    switch (row.sense) {
        case Sense::le: return act <= row.rhs + tol;
        case Sense::ge: return act >= row.rhs - tol;
        case Sense::eq: return std::abs(act - row.rhs) <= tol;
    }
    return false;
}

/// Index of the first violated row, bound or integrality, or -1. Bounds and
/// integrality failures are reported as -2.
inline int first_violation(const MilpModel& model, const std::vector<double>& x, double feas_tol, double int_tol) {
    for (int j = 0; j < model.num_vars(); ++j) {
        const auto& v = model.vars[static_cast<std::size_t>(j)];
        double xj = x[static_cast<std::size_t>(j)];
        if (xj < v.lb - feas_tol || xj > v.ub + feas_tol) return -2;
        if (v.kind == VarKind::binary && std::abs(xj - std::round(xj)) > int_tol) return -2;
    }
    for (std::size_t r = 0; r < model.rows.size(); ++r)
        if (!row_satisfied(model.rows[r], x, feas_tol)) return static_cast<int>(r);
    return -1;
}

inline double objective_value(const MilpModel& model, const std::vector<double>& x) {
    double s = model.objective_offset;
    for (std::size_t j = 0; j < x.size(); ++j) s += model.objective[j] * x[j];
    return s;
}

/// Right-hand side of a conditional: a variable or a constant.
using Operand = std::variant<int, double>;

namespace detail {

inline std::pair<double, double> operand_bounds(const MilpModel& model, const Operand& op) {
    if (const int* v = std::get_if<int>(&op)) {
        const auto& var = model.vars.at(static_cast<std::size_t>(*v));
        return {var.lb, var.ub};
    }
    double c = std::get<double>(op);
    return {c, c};
}

inline void require_binary_guards(const MilpModel& model, const std::vector<int>& guards) {
    if (guards.empty()) throw Error(ErrorKind::invalid_argument, "conditional needs at least one guard");
    for (int g : guards)
        if (model.vars.at(static_cast<std::size_t>(g)).kind != VarKind::binary)
            throw Error(ErrorKind::invalid_argument, "guard " + model.vars[static_cast<std::size_t>(g)].name +
                                                         " is not binary");
}

/// Appends  lhs <= rhs + M * sum_j (1 - z_j)  with lhs - rhs given as terms
/// plus a constant, choosing the smallest M that makes the row vacuous once a
/// guard is 0.
inline int add_guarded_le(MilpModel& model, const std::vector<int>& guards, std::vector<Term> diff, double diff_const,
                          const std::string& label) {
    double max_diff = diff_const;
    for (const auto& t : diff) {
        const auto& v = model.vars.at(static_cast<std::size_t>(t.var));
        double hi = t.coef > 0 ? v.ub : v.lb;
        if (!std::isfinite(hi)) throw Error(ErrorKind::unbounded_variable, "cannot bound " + v.name, label);
        max_diff += t.coef * hi;
    }
    double big_m = std::max(0.0, max_diff);
    // diff + const <= M * (k - sum z)  ->  diff + M * sum z <= M * k - const
    for (int g : guards) diff.push_back({g, big_m});
    double rhs = big_m * static_cast<double>(guards.size()) - diff_const;
    int row = model.add_row(label, std::move(diff), Sense::le, rhs);
    model.big_m.push_back({row, big_m});
    return row;
}

}  // namespace detail

/// "If every guard is 1 then x = y", as the pair
///   x <= y + M * sum_j (1 - z_j),   y <= x + M * sum_j (1 - z_j)
/// with the tightest valid M per row. Returns the two row indices.
inline std::pair<int, int> add_conditional_equality(MilpModel& model, const std::vector<int>& guards, int x,
                                                    const Operand& y, const std::string& label = "cond") {
    detail::require_binary_guards(model, guards);
    auto [xl, xu] = detail::operand_bounds(model, Operand{x});
    auto [yl, yu] = detail::operand_bounds(model, y);
    if (!std::isfinite(xl) || !std::isfinite(xu) || !std::isfinite(yl) || !std::isfinite(yu))
        throw Error(ErrorKind::unbounded_variable, "conditional equality needs bounded operands", label);
    std::vector<Term> x_minus_y{{x, 1.0}};
    std::vector<Term> y_minus_x{{x, -1.0}};
    double c_xy = 0.0, c_yx = 0.0;
    if (const int* yv = std::get_if<int>(&y)) {
        x_minus_y.push_back({*yv, -1.0});
        y_minus_x.push_back({*yv, 1.0});
    } else {
        c_xy = -std::get<double>(y);
        c_yx = std::get<double>(y);
    }
    int r1 = detail::add_guarded_le(model, guards, std::move(x_minus_y), c_xy, label + "_le");
    int r2 = detail::add_guarded_le(model, guards, std::move(y_minus_x), c_yx, label + "_ge");
    return {r1, r2};
}

/// "If every guard is 1 then lhs <= rhs" for variables lhs, rhs.
inline int add_conditional_less_equal(MilpModel& model, const std::vector<int>& guards, int lhs, int rhs,
                                      const std::string& label = "cond") {
    detail::require_binary_guards(model, guards);
    return detail::add_guarded_le(model, guards, {{lhs, 1.0}, {rhs, -1.0}}, 0.0, label);
}

}  // namespace ttg
