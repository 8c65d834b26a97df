#pragma once

#include <cctype>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ttg/model/milp_model.hpp"

namespace ttg {

/// A choice of one inventory flight per segment and one candidate stay per block.
struct Selection {
    std::vector<int> flights;  // inventory flight index, per segment
    std::vector<int> stays;    // MilpModel::stays index, per block

    friend bool operator==(const Selection&, const Selection&) = default;
};

/// Completes a selection into a full 0/1 assignment: the traveller waits at each
/// origin until departure, is airborne strictly between departure and landing
/// slots, and sleeps in every evening slot where the booked stays allow it.
inline std::vector<double> assignment_from_selection(const MilpModel& model, const Selection& sel) {
    std::vector<double> x(static_cast<std::size_t>(model.num_vars()), 0.0);
    const auto& rules = model.rules;
    const auto& grid = model.grid;
    const std::size_t n_seg = model.request.segments.size();
    std::vector<int> dep(n_seg), land(n_seg);
    for (std::size_t k = 0; k < n_seg; ++k) {
        const auto& f = model.inventory.flights.at(static_cast<std::size_t>(sel.flights.at(k)));
        dep[k] = grid.rel(rules.slot_floor(f.departure));
        land[k] = grid.rel(rules.slot_ceil(f.arrival));
        x[static_cast<std::size_t>(model.flight_var.at(static_cast<std::size_t>(sel.flights[k])))] = 1.0;
    }
    auto city_of = [&](const std::string& c) {
        for (std::size_t l = 0; l < model.locations.size(); ++l)
            if (model.locations[l] == c) return static_cast<int>(l);
        return -1;
    };
    std::vector<int> loc(static_cast<std::size_t>(grid.T));
    for (int t = 0; t < grid.T; ++t) {
        int l = city_of(model.request.segments[0].origin);
        if (t > dep[0]) {
            for (std::size_t k = 0; k < n_seg; ++k) {
                if (t < land[k]) {
                    l = model.air();
                    break;
                }
                if (k + 1 == n_seg || t <= dep[k + 1]) {
                    l = city_of(model.request.segments[k].destination);
                    break;
                }
            }
        }
        loc[static_cast<std::size_t>(t)] = l;
        x[static_cast<std::size_t>(model.u(l, t))] = 1.0;
    }
    for (std::size_t k = 0; k < n_seg; ++k) {
        x[static_cast<std::size_t>(model.e(dep[k]))] = 1.0;
        x[static_cast<std::size_t>(model.e(land[k] - 1))] = 1.0;
    }
    for (std::size_t b = 0; b < sel.stays.size(); ++b)
        x[static_cast<std::size_t>(model.stay_var.at(static_cast<std::size_t>(sel.stays[b])))] = 1.0;
    for (const auto& slots : grid.evening) {
        for (int t : slots) {
            bool covered = false, ok = true;
            for (int s : sel.stays) {
                const auto& stay = model.stays[static_cast<std::size_t>(s)];
                if (t >= stay.first_slot && t < stay.end_slot) {
                    covered = true;
                    const auto& city = model.inventory.hotels[static_cast<std::size_t>(stay.hotel)].city;
                    ok = ok && city_of(city) == loc[static_cast<std::size_t>(t)];
                }
            }
            if (covered && ok) x[static_cast<std::size_t>(model.m(t))] = 1.0;
        }
    }
    return x;
}

/// Maps an itinerary back to model indices; nothing when it names an offer or
/// date combination the model has no variable for.
inline std::optional<Selection> selection_from_itinerary(const MilpModel& model, const Itinerary& it) {
    Selection sel;
    if (it.chosen_flights.size() != model.request.segments.size()) return std::nullopt;
    for (std::size_t k = 0; k < it.chosen_flights.size(); ++k) {
        int found = -1;
        for (int j : model.segment_flights[k])
            if (model.inventory.flights[static_cast<std::size_t>(j)].id == it.chosen_flights[k]) found = j;
        if (found < 0) return std::nullopt;
        sel.flights.push_back(found);
    }
    if (it.hotel_stays.size() != model.blocks.size()) return std::nullopt;
    for (std::size_t b = 0; b < model.blocks.size(); ++b) {
        int found = -1;
        for (const auto& hs : it.hotel_stays) {
            for (int s : model.block_stays[b]) {
                const auto& stay = model.stays[static_cast<std::size_t>(s)];
                if (model.inventory.hotels[static_cast<std::size_t>(stay.hotel)].id == hs.hotel_id &&
                    stay.check_in == hs.check_in && stay.check_out == hs.check_out)
                    found = s;
            }
        }
        if (found < 0) return std::nullopt;
        sel.stays.push_back(found);
    }
    return sel;
}

/// Reads the booked flights and stays from an integral assignment that
/// satisfies every model row. Costs come from inventory prices.
inline Itinerary extract_itinerary(const MilpModel& model, const std::vector<double>& x, double feas_tol = 1e-6,
                                   double int_tol = 1e-6) {
    if (x.size() != static_cast<std::size_t>(model.num_vars()))
        throw Error(ErrorKind::invalid_argument, "assignment has the wrong length", "assignment");
    for (int j = 0; j < model.num_vars(); ++j) {
        double v = x[static_cast<std::size_t>(j)];
        if (model.is_integer(j) && std::abs(v - std::round(v)) > int_tol)
            throw Error(ErrorKind::fractional_assignment, "value " + std::to_string(v),
                        model.vars[static_cast<std::size_t>(j)].name);
    }
    for (const auto& row : model.rows)
        if (!row_satisfied(row, x, feas_tol))
            throw Error(ErrorKind::inconsistent_assignment, "row not satisfied", row.label);

    Itinerary it;
    it.objective_kind = model.objective_spec.kind;
    for (const auto& list : model.segment_flights) {
        for (int j : list) {
            if (x[static_cast<std::size_t>(model.flight_var[static_cast<std::size_t>(j)])] > 0.5) {
                const auto& f = model.inventory.flights[static_cast<std::size_t>(j)];
                it.chosen_flights.push_back(f.id);
                it.flight_cost += f.price;
            }
        }
    }
    for (const auto& list : model.block_stays) {
        for (int s : list) {
            if (x[static_cast<std::size_t>(model.stay_var[static_cast<std::size_t>(s)])] > 0.5) {
                const auto& stay = model.stays[static_cast<std::size_t>(s)];
                it.hotel_stays.push_back(
                    {model.inventory.hotels[static_cast<std::size_t>(stay.hotel)].id, stay.check_in, stay.check_out});
                it.hotel_cost += stay.cost;
            }
        }
    }
    it.total_cost = it.flight_cost + it.hotel_cost;
    it.objective_value = std::llround(objective_value(model, x));
    return it;
}

namespace detail {

inline std::string lp_name(const std::string& raw) {
    std::string out;
    for (char c : raw) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "r_" + out;
    return out;
}

inline void lp_terms(std::ostream& os, const std::vector<std::pair<double, std::string>>& terms) {
    if (terms.empty()) {
        os << " 0";
        return;
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
        double c = terms[i].first;
        if (c < 0) os << " - ";
        else if (i > 0) os << " + ";
        else os << " ";
        os << std::abs(c) << " " << terms[i].second;
    }
}

}  // namespace detail

/// Writes the model in CPLEX LP text format.
inline void write_lp(const MilpModel& model, std::ostream& os) {
    auto old_precision = os.precision(17);
    os << "Minimize\n obj:";
    std::vector<std::pair<double, std::string>> obj;
    for (int j = 0; j < model.num_vars(); ++j)
        if (model.objective[static_cast<std::size_t>(j)] != 0.0)
            obj.emplace_back(model.objective[static_cast<std::size_t>(j)],
                             detail::lp_name(model.vars[static_cast<std::size_t>(j)].name));
    detail::lp_terms(os, obj);
    if (model.objective_offset != 0.0) os << (model.objective_offset < 0 ? " - " : " + ") << std::abs(model.objective_offset);
    os << "\nSubject To\n";
    for (std::size_t r = 0; r < model.rows.size(); ++r) {
        const auto& row = model.rows[r];
        os << " c" << r << "_" << detail::lp_name(row.label) << ":";
        std::vector<std::pair<double, std::string>> terms;
        for (const auto& t : row.terms)
            terms.emplace_back(t.coef, detail::lp_name(model.vars[static_cast<std::size_t>(t.var)].name));
        detail::lp_terms(os, terms);
        os << (row.sense == Sense::le ? " <= " : row.sense == Sense::ge ? " >= " : " = ") << row.rhs << "\n";
    }
    os << "Bounds\n";
    for (const auto& v : model.vars) {
        if (v.kind == VarKind::binary) continue;
        os << " " << v.lb << " <= " << detail::lp_name(v.name) << " <= " << v.ub << "\n";
    }
    os << "Binaries\n";
    for (const auto& v : model.vars)
        if (v.kind == VarKind::binary) os << " " << detail::lp_name(v.name) << "\n";
    os << "End\n";
    os.precision(old_precision);
}

}  // namespace ttg
