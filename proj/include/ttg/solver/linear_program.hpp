#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <vector>

#include "ttg/error.hpp"
#include "ttg/model/milp_model.hpp"

namespace ttg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c'x + offset  s.t.  row_lo <= A x <= row_hi,  col_lb <= x <= col_ub.
/// A is stored column-wise.
struct LinearProgram {
    int n = 0;
    int m = 0;
    std::vector<double> cost;
    double cost_offset = 0.0;
    std::vector<double> col_lb, col_ub;
    std::vector<double> row_lo, row_hi;
    std::vector<int> col_start;  // size n + 1
    std::vector<int> row_index;
    std::vector<double> value;
    std::vector<char> integer;

    int nnz() const { return static_cast<int>(value.size()); }

    double objective(const std::vector<double>& x) const {
        double s = cost_offset;
        for (int j = 0; j < n; ++j) s += cost[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        return s;
    }

    std::vector<double> activities(const std::vector<double>& x) const {
        std::vector<double> act(static_cast<std::size_t>(m), 0.0);
        for (int j = 0; j < n; ++j) {
            double xj = x[static_cast<std::size_t>(j)];
            if (xj == 0.0) continue;
            for (int p = col_start[static_cast<std::size_t>(j)]; p < col_start[static_cast<std::size_t>(j) + 1]; ++p)
                act[static_cast<std::size_t>(row_index[static_cast<std::size_t>(p)])] +=
                    value[static_cast<std::size_t>(p)] * xj;
        }
        return act;
    }
};

/// Row-wise triplets to column-wise storage; duplicate (row, col) entries are summed.
inline void assemble_columns(LinearProgram& lp, const std::vector<std::vector<std::pair<int, double>>>& rows) {
    std::vector<std::map<int, double>> cols(static_cast<std::size_t>(lp.n));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [j, a] : rows[i]) cols[static_cast<std::size_t>(j)][static_cast<int>(i)] += a;
    lp.col_start.assign(1, 0);
    lp.row_index.clear();
    lp.value.clear();
    for (const auto& col : cols) {
        for (const auto& [i, a] : col) {
            if (a == 0.0) continue;
            lp.row_index.push_back(i);
            lp.value.push_back(a);
        }
        lp.col_start.push_back(static_cast<int>(lp.value.size()));
    }
}

inline LinearProgram to_linear_program(const MilpModel& model) {
    LinearProgram lp;
    lp.n = model.num_vars();
    lp.m = static_cast<int>(model.rows.size());
    lp.cost = model.objective;
    lp.cost_offset = model.objective_offset;
    for (const auto& v : model.vars) {
        lp.col_lb.push_back(v.lb);
        lp.col_ub.push_back(v.ub);
        lp.integer.push_back(v.kind == VarKind::binary ? 1 : 0);
    }
    std::vector<std::vector<std::pair<int, double>>> rows;
    for (const auto& row : model.rows) {
        std::vector<std::pair<int, double>> r;
        for (const auto& t : row.terms) r.emplace_back(t.var, t.coef);
        rows.push_back(std::move(r));
        lp.row_lo.push_back(row.sense == Sense::le ? -kInf : row.rhs);
        lp.row_hi.push_back(row.sense == Sense::ge ? kInf : row.rhs);
    }
    assemble_columns(lp, rows);
    return lp;
}

}  // namespace ttg
