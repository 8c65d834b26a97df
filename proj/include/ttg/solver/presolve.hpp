#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ttg/solver/linear_program.hpp"

namespace ttg {

/// Reduced problem plus what is needed to map its solutions back.
struct PresolveResult {
    bool infeasible = false;
    LinearProgram reduced;
    std::vector<int> col_map;  // reduced column -> original column
    std::vector<std::string> log;

    // Per original column: the column it was merged into (itself if none), and
    // its fixed value when it left the problem that way.
    std::vector<int> rep;
    std::vector<char> is_fixed;
    std::vector<double> fixed_value;
    std::vector<int> reduced_index;  // original representative -> reduced column, -1 if fixed

    std::vector<double> postsolve(const std::vector<double>& reduced_x) const {
        std::vector<double> x(rep.size(), 0.0);
        for (std::size_t j = 0; j < rep.size(); ++j) {
            int r = root(static_cast<int>(j));
            if (is_fixed[r]) x[j] = fixed_value[r];
            else x[j] = reduced_x[reduced_index[r]];
        }
        return x;
    }

    int root(int j) const {
        while (rep[j] != j) j = rep[j];
        return j;
    }
};

namespace detail {

class Presolver {
public:
    explicit Presolver(const LinearProgram& lp) : lp_(lp) {
        n_ = lp.n;
        lb_ = lp.col_lb;
        ub_ = lp.col_ub;
        cost_ = lp.cost;
        offset_ = lp.cost_offset;
        integer_ = lp.integer;
        rep_.resize(n_);
        for (int j = 0; j < n_; ++j) rep_[j] = j;
        fixed_.assign(n_, 0);
        fixed_value_.assign(n_, 0.0);
        rows_.assign(lp.m, {});
        for (int j = 0; j < n_; ++j)
            for (int p = lp.col_start[j]; p < lp.col_start[j + 1]; ++p)
                rows_[lp.row_index[p]].emplace_back(j, lp.value[p]);
        lo_ = lp.row_lo;
        hi_ = lp.row_hi;
        alive_.assign(lp.m, 1);
    }

    PresolveResult run() {
        PresolveResult res;
        try {
            for (int pass = 0; pass < 50; ++pass) {
                changed_ = false;
                fix_columns();
                simplify_rows();
                singleton_rows();
                activity_pass();
                dual_fixing();
                merge_parallel_rows();
                aggregate_doubletons();
                if (!changed_) break;
            }
            fix_columns();
            simplify_rows();
        } catch (const Infeasible&) {
            res.infeasible = true;
        }
        res.log = std::move(log_);
        if (res.infeasible) return res;
        res.rep = rep_;
        res.is_fixed = fixed_;
        res.fixed_value = fixed_value_;
        res.reduced_index.assign(n_, -1);

        auto& r = res.reduced;
        for (int j = 0; j < n_; ++j) {
            if (rep_[j] != j || fixed_[j]) continue;
            res.reduced_index[j] = r.n++;
            res.col_map.push_back(j);
            r.cost.push_back(cost_[j]);
            r.col_lb.push_back(lb_[j]);
            r.col_ub.push_back(ub_[j]);
            r.integer.push_back(integer_[j]);
        }
        r.cost_offset = offset_;
        std::vector<std::vector<std::pair<int, double>>> rows;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!alive_[i]) continue;
            std::vector<std::pair<int, double>> row;
            for (auto [j, a] : rows_[i]) row.emplace_back(res.reduced_index[j], a);
            rows.push_back(std::move(row));
            r.row_lo.push_back(lo_[i]);
            r.row_hi.push_back(hi_[i]);
        }
        r.m = static_cast<int>(rows.size());
        assemble_columns(r, rows);
        res.log.push_back("reduced " + std::to_string(lp_.n) + "x" + std::to_string(lp_.m) + " to " +
                          std::to_string(r.n) + "x" + std::to_string(r.m));
        return res;
    }

private:
    struct Infeasible {};

    static constexpr double kTol = 1e-9;

    int find(int j) {
        while (rep_[j] != j) {
            rep_[j] = rep_[rep_[j]];
            j = rep_[j];
        }
        return j;
    }

    void fail(const std::string& why) {
        log_.push_back("infeasible: " + why);
        throw Infeasible{};
    }

    void set_lb(int j, double v) {
        if (integer_[j]) v = std::ceil(v - 1e-6);
        if (v > lb_[j] + kTol) {
            lb_[j] = v;
            changed_ = true;
        }
        if (lb_[j] > ub_[j] + 1e-7) fail("column " + std::to_string(j) + " has crossing bounds");
    }
    void set_ub(int j, double v) {
        if (integer_[j]) v = std::floor(v + 1e-6);
        if (v < ub_[j] - kTol) {
            ub_[j] = v;
            changed_ = true;
        }
        if (lb_[j] > ub_[j] + 1e-7) fail("column " + std::to_string(j) + " has crossing bounds");
    }

    void fix_columns() {
        int count = 0;
        for (int j = 0; j < n_; ++j) {
            if (rep_[j] != j || fixed_[j]) continue;
            if (ub_[j] - lb_[j] <= kTol) {
                fixed_[j] = 1;
                fixed_value_[j] = lb_[j];
                offset_ += cost_[j] * lb_[j];
                ++count;
            }
        }
        if (count) log_.push_back("fixed " + std::to_string(count) + " columns");
    }

    void remove_row(std::size_t i) {
        alive_[i] = 0;
        rows_[i].clear();
        changed_ = true;
    }

    /// Substitutes fixed and merged columns, combines repeated columns, drops
    /// zero coefficients and checks empty rows.
    void simplify_rows() {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!alive_[i]) continue;
            std::map<int, double> acc;
            double shift = 0.0;
            for (auto [j, a] : rows_[i]) {
                int r = find(j);
                if (fixed_[r]) shift += a * fixed_value_[r];
                else acc[r] += a;
            }
            std::vector<std::pair<int, double>> row;
            for (auto [j, a] : acc)
                if (std::abs(a) > 1e-12) row.emplace_back(j, a);
            if (row != rows_[i] || shift != 0.0) changed_ = true;
            rows_[i] = std::move(row);
            lo_[i] -= shift;
            hi_[i] -= shift;
            if (rows_[i].empty()) {
                if (lo_[i] > 1e-7 || hi_[i] < -1e-7) fail("empty row " + std::to_string(i) + " violated");
                remove_row(i);
            }
        }
    }

    void singleton_rows() {
        int count = 0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!alive_[i] || rows_[i].size() != 1) continue;
            auto [j, a] = rows_[i][0];
            double l = lo_[i] / a, u = hi_[i] / a;
            if (a < 0) std::swap(l, u);
            if (std::isfinite(l)) set_lb(j, l);
            if (std::isfinite(u)) set_ub(j, u);
            remove_row(i);
            ++count;
        }
        if (count) log_.push_back("turned " + std::to_string(count) + " singleton rows into bounds");
    }

    void activity_pass() {
        int redundant = 0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!alive_[i]) continue;
            double min_act = 0.0, max_act = 0.0;
            int min_inf = 0, max_inf = 0;
            for (auto [j, a] : rows_[i]) {
                double lo_c = a > 0 ? a * lb_[j] : a * ub_[j];
                double hi_c = a > 0 ? a * ub_[j] : a * lb_[j];
                if (std::isfinite(lo_c)) min_act += lo_c;
                else ++min_inf;
                if (std::isfinite(hi_c)) max_act += hi_c;
                else ++max_inf;
            }
            if ((min_inf == 0 && min_act > hi_[i] + 1e-7) || (max_inf == 0 && max_act < lo_[i] - 1e-7))
                fail("row " + std::to_string(i) + " cannot be satisfied");
            bool lo_slack = !std::isfinite(lo_[i]) || (min_inf == 0 && min_act >= lo_[i] - kTol);
            bool hi_slack = !std::isfinite(hi_[i]) || (max_inf == 0 && max_act <= hi_[i] + kTol);
            if (lo_slack && hi_slack) {
                remove_row(i);
                ++redundant;
                continue;
            }
            // Bound tightening, integer columns only.
            for (auto [j, a] : rows_[i]) {
                if (!integer_[j]) continue;
                double lo_c = a > 0 ? a * lb_[j] : a * ub_[j];
                double hi_c = a > 0 ? a * ub_[j] : a * lb_[j];
                if (std::isfinite(hi_[i]) && min_inf == 0) {
                    double rest = min_act - lo_c;
                    double bound = (hi_[i] - rest) / a;
                    if (a > 0) set_ub(j, bound);
                    else set_lb(j, bound);
                }
                if (std::isfinite(lo_[i]) && max_inf == 0) {
                    double rest = max_act - hi_c;
                    double bound = (lo_[i] - rest) / a;
                    if (a > 0) set_lb(j, bound);
                    else set_ub(j, bound);
                }
            }
        }
        if (redundant) log_.push_back("removed " + std::to_string(redundant) + " redundant rows");
    }

    /// A column whose cost and rows all prefer it smaller (or larger) can sit at
    /// that bound in some optimal solution.
    void dual_fixing() {
        std::vector<char> down_ok(n_, 1), up_ok(n_, 1);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!alive_[i]) continue;
            for (auto [j, a] : rows_[i]) {
                bool has_lo = std::isfinite(lo_[i]), has_hi = std::isfinite(hi_[i]);
                if ((a > 0 && has_lo) || (a < 0 && has_hi)) down_ok[j] = 0;
                if ((a > 0 && has_hi) || (a < 0 && has_lo)) up_ok[j] = 0;
            }
        }
        int count = 0;
        for (int j = 0; j < n_; ++j) {
            if (rep_[j] != j || fixed_[j]) continue;
            if (cost_[j] >= 0 && down_ok[j] && std::isfinite(lb_[j])) {
                set_ub(j, lb_[j]);
                ++count;
            } else if (cost_[j] <= 0 && up_ok[j] && std::isfinite(ub_[j])) {
                set_lb(j, ub_[j]);
                ++count;
            }
        }
        if (count) {
            log_.push_back("dual-fixed " + std::to_string(count) + " columns");
            fix_columns();
        }
    }

    /// Rows that are scalar multiples of each other become one ranged row.
    void merge_parallel_rows() {
        std::map<std::vector<std::pair<int, double>>, std::size_t> seen;
        int merged = 0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!alive_[i] || rows_[i].empty()) continue;
            double s = rows_[i][0].second;
            std::vector<std::pair<int, double>> key;
            for (auto [j, a] : rows_[i]) key.emplace_back(j, a / s);
            double l = lo_[i] / s, u = hi_[i] / s;
            if (s < 0) std::swap(l, u);
            auto it = seen.find(key);
            if (it == seen.end()) {
                rows_[i] = key;
                lo_[i] = l;
                hi_[i] = u;
                seen.emplace(std::move(key), i);
                continue;
            }
            std::size_t k = it->second;
            lo_[k] = std::max(lo_[k], l);
            hi_[k] = std::min(hi_[k], u);
            if (lo_[k] > hi_[k] + 1e-7) fail("parallel rows conflict");
            if (lo_[k] > hi_[k]) hi_[k] = lo_[k];
            remove_row(i);
            ++merged;
        }
        if (merged) log_.push_back("merged " + std::to_string(merged) + " parallel rows");
    }

    /// x - y = 0 with matching column kinds: y is replaced by x.
    void aggregate_doubletons() {
        int count = 0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (!alive_[i] || rows_[i].size() != 2) continue;
            if (std::abs(lo_[i]) > kTol || std::abs(hi_[i]) > kTol) continue;
            auto [x, a] = rows_[i][0];
            auto [y, b] = rows_[i][1];
            if (std::abs(a + b) > 1e-12 || integer_[x] != integer_[y]) continue;
            x = find(x);
            y = find(y);
            if (x == y || fixed_[x] || fixed_[y]) continue;
            if (y < x) std::swap(x, y);
            rep_[y] = x;
            lb_[x] = std::max(lb_[x], lb_[y]);
            ub_[x] = std::min(ub_[x], ub_[y]);
            if (lb_[x] > ub_[x] + 1e-7) fail("merged columns have crossing bounds");
            cost_[x] += cost_[y];
            cost_[y] = 0.0;
            remove_row(i);
            ++count;
        }
        if (count) {
            log_.push_back("merged " + std::to_string(count) + " column pairs");
            simplify_rows();
        }
    }

    const LinearProgram& lp_;
    int n_ = 0;
    std::vector<double> lb_, ub_, cost_;
    double offset_ = 0.0;
    std::vector<char> integer_;
    std::vector<int> rep_;
    std::vector<char> fixed_;
    std::vector<double> fixed_value_;
    std::vector<std::vector<std::pair<int, double>>> rows_;
    std::vector<double> lo_, hi_;
    std::vector<char> alive_;
    std::vector<std::string> log_;
    bool changed_ = false;
};

}  // namespace detail

/// Problem reductions that keep the optimal value: fixed columns, singleton
/// rows, redundant rows, activity-based bound tightening on integer columns,
/// dual fixing, parallel rows and x = y merging.
inline PresolveResult presolve(const LinearProgram& lp) { return detail::Presolver(lp).run(); }

}  // namespace ttg
