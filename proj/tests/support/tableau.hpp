#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace ttg::testing {

enum class RowSense { le, ge, eq };

/// min c'x  s.t.  A x (sense) b,  0 <= x <= ub  (ub < 0 means no upper bound).
struct SmallLp {
    std::vector<double> c;
    std::vector<std::vector<double>> A;
    std::vector<RowSense> sense;
    std::vector<double> b;
    std::vector<double> ub;
};

enum class TableauStatus { optimal, infeasible, unbounded };

struct TableauResult {
    TableauStatus status;
    double objective = 0.0;
};

/// Two-phase full-tableau simplex with Bland's rule, the textbook version.
/// Upper bounds become explicit rows.
inline TableauResult tableau_solve(const SmallLp& lp) {
    const double eps = 1e-9;
    std::size_t n = lp.c.size();
    std::vector<std::vector<double>> A = lp.A;
    std::vector<RowSense> sense = lp.sense;
    std::vector<double> b = lp.b;
    for (std::size_t j = 0; j < n; ++j) {
        if (lp.ub[j] < 0) continue;
        std::vector<double> r(n, 0.0);
        r[j] = 1.0;
        A.push_back(r);
        sense.push_back(RowSense::le);
        b.push_back(lp.ub[j]);
    }
    std::size_t m = A.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0) {
            for (auto& a : A[i]) a = -a;
            b[i] = -b[i];
            if (sense[i] == RowSense::le) sense[i] = RowSense::ge;
            else if (sense[i] == RowSense::ge) sense[i] = RowSense::le;
        }
    }
    // Columns: x, one slack/surplus per inequality, one artificial per ge/eq row.
    std::size_t n_slack = 0, n_art = 0;
    for (auto s : sense) {
        n_slack += s != RowSense::eq;
        n_art += s != RowSense::le;
    }
    std::size_t cols = n + n_slack + n_art;
    std::vector<std::vector<double>> T(m, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(m);
    std::size_t sk = n, ak = n + n_slack;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
        T[i][cols] = b[i];
        if (sense[i] == RowSense::le) {
            T[i][sk] = 1.0;
            basis[i] = sk++;
        } else {
            if (sense[i] == RowSense::ge) T[i][sk++] = -1.0;
            T[i][ak] = 1.0;
            basis[i] = ak++;
        }
    }

    auto run = [&](const std::vector<double>& cost, std::size_t usable) -> bool {
        while (true) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < usable && enter == cols; ++j) {
                double d = cost[j];
                for (std::size_t i = 0; i < m; ++i) d -= cost[basis[i]] * T[i][j];
                if (d < -eps) enter = j;
            }
            if (enter == cols) return true;
            std::size_t leave = m;
            double best = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (T[i][enter] > eps) {
                    double ratio = T[i][cols] / T[i][enter];
                    if (leave == m || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
                        leave = i;
                        best = ratio;
                    }
                }
            }
            if (leave == m) return false;
            double piv = T[leave][enter];
            for (auto& v : T[leave]) v /= piv;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == leave || T[i][enter] == 0.0) continue;
                double f = T[i][enter];
                for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[leave][j];
            }
            basis[leave] = enter;
        }
    };

    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = n + n_slack; j < cols; ++j) phase1[j] = 1.0;
    run(phase1, cols);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] >= n + n_slack) infeas += T[i][cols];
    if (infeas > 1e-7) return {TableauStatus::infeasible};
    // Drive remaining zero-level artificials out where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n + n_slack) continue;
        for (std::size_t j = 0; j < n + n_slack; ++j) {
            if (std::abs(T[i][j]) > eps) {
                double piv = T[i][j];
                for (auto& v : T[i]) v /= piv;
                for (std::size_t r = 0; r < m; ++r) {
                    if (r == i || T[r][j] == 0.0) continue;
                    double f = T[r][j];
                    for (std::size_t k = 0; k <= cols; ++k) T[r][k] -= f * T[i][k];
                }
                basis[i] = j;
                break;
            }
        }
    }
    std::vector<double> phase2(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.c[j];
    if (!run(phase2, n + n_slack)) return {TableauStatus::unbounded};
    double obj = 0.0;
    for (std::size_t i = 0; i < m; ++i) obj += phase2[basis[i]] * T[i][cols];
    return {TableauStatus::optimal, obj};
}

}  // namespace ttg::testing
