#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "ttg/error.hpp"
#include "ttg/solver/linear_program.hpp"
#include "ttg/solver/params.hpp"

namespace ttg {

enum class LpStatus { optimal, infeasible, unbounded, time_limit, iteration_limit };

inline std::string_view to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::time_limit: return "time_limit";
        case LpStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

enum class VarStatus : std::uint8_t { basic, at_lower, at_upper, at_zero };

/// Status of every structural column followed by every row's logical.
struct LpBasis {
    std::vector<VarStatus> status;
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    std::vector<double> row_activity;
    double objective = 0.0;
    long iterations = 0;
    LpBasis basis;
};

using SteadyClock = std::chrono::steady_clock;

/// Bounded-variable simplex with the basis inverse kept as a product of eta
/// columns, rebuilt from the identity every kRefactorInterval updates.
/// Each row i gets a logical s_i with A x + s = 0 and -hi_i <= s_i <= -lo_i, so
/// the all-logical basis is the identity. Phase 1 minimises the sum of bound
/// infeasibilities of the basic variables, phase 2 the true cost. A warm start
/// first runs the dual simplex, since a previously optimal basis stays dual
/// feasible when only bounds change.
class BoundedSimplex {
public:
    explicit BoundedSimplex(const LinearProgram& lp, SolverParams params = {})
        : lp_(lp), params_(params), m_(lp.m), n_(lp.n), N_(lp.n + lp.m) {
        params_.validate();
        row_scale_.assign(static_cast<std::size_t>(m_), 0.0);
        for (int p = 0; p < lp.nnz(); ++p) {
            auto& s = row_scale_[static_cast<std::size_t>(lp.row_index[static_cast<std::size_t>(p)])];
            s = std::max(s, std::abs(lp.value[static_cast<std::size_t>(p)]));
        }
        for (auto& s : row_scale_) s = s > 0 ? 1.0 / s : 1.0;
        value_ = lp.value;
        for (int p = 0; p < lp.nnz(); ++p)
            value_[static_cast<std::size_t>(p)] *= row_scale_[static_cast<std::size_t>(lp.row_index[static_cast<std::size_t>(p)])];
        cost_.assign(static_cast<std::size_t>(N_), 0.0);
        double cmax = 0.0;
        for (int j = 0; j < n_; ++j) {
            cost_[static_cast<std::size_t>(j)] = lp.cost[static_cast<std::size_t>(j)];
            cmax = std::max(cmax, std::abs(lp.cost[static_cast<std::size_t>(j)]));
        }
        dual_tol_ = std::max(params_.opt_tol, 1e-11 * cmax);
    }

    /// Solves with optional column-bound overrides and an optional starting basis.
    LpSolution solve(const std::vector<double>* col_lb = nullptr, const std::vector<double>* col_ub = nullptr,
                     const LpBasis* warm = nullptr, SteadyClock::time_point deadline = SteadyClock::time_point::max()) {
        init_bounds(col_lb, col_ub);
        LpSolution sol;
        for (int j = 0; j < N_; ++j) {
            if (L_[static_cast<std::size_t>(j)] > U_[static_cast<std::size_t>(j)] + params_.feas_tol) {
                sol.status = LpStatus::infeasible;
                return sol;
            }
        }
        bool reuse = warm && same_basic_set(*warm);
        init_basis(warm);
        if (!reuse) reinvert();
        compute_basic_values();
        std::optional<LpStatus> dual;
        if (warm) dual = dual_iterate(deadline);
        sol.status = dual ? *dual : iterate(deadline);
        sol.iterations = iterations_;
        sol.x.assign(x_.begin(), x_.begin() + n_);
        sol.objective = lp_.objective(sol.x);
        sol.row_activity.resize(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i)
            sol.row_activity[static_cast<std::size_t>(i)] =
                -x_[static_cast<std::size_t>(n_ + i)] / row_scale_[static_cast<std::size_t>(i)];
        sol.basis.status = status_;
        return sol;
    }

private:
    template <class F>
    void for_column(int j, F&& f) const {
        if (j >= n_) {
            f(j - n_, 1.0);
            return;
        }
        for (int p = lp_.col_start[static_cast<std::size_t>(j)]; p < lp_.col_start[static_cast<std::size_t>(j) + 1]; ++p)
            f(lp_.row_index[static_cast<std::size_t>(p)], value_[static_cast<std::size_t>(p)]);
    }

    int column_nnz(int j) const {
        if (j >= n_) return 1;
        return lp_.col_start[static_cast<std::size_t>(j) + 1] - lp_.col_start[static_cast<std::size_t>(j)];
    }

    void init_bounds(const std::vector<double>* col_lb, const std::vector<double>* col_ub) {
        L_.assign(static_cast<std::size_t>(N_), 0.0);
        U_.assign(static_cast<std::size_t>(N_), 0.0);
        for (int j = 0; j < n_; ++j) {
            L_[static_cast<std::size_t>(j)] = col_lb ? (*col_lb)[static_cast<std::size_t>(j)] : lp_.col_lb[static_cast<std::size_t>(j)];
            U_[static_cast<std::size_t>(j)] = col_ub ? (*col_ub)[static_cast<std::size_t>(j)] : lp_.col_ub[static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < m_; ++i) {
            double r = row_scale_[static_cast<std::size_t>(i)];
            L_[static_cast<std::size_t>(n_ + i)] = -lp_.row_hi[static_cast<std::size_t>(i)] * r;
            U_[static_cast<std::size_t>(n_ + i)] = -lp_.row_lo[static_cast<std::size_t>(i)] * r;
        }
    }

    double nonbasic_value(int j) {
        auto js = static_cast<std::size_t>(j);
        auto& st = status_[js];
        bool lf = std::isfinite(L_[js]), uf = std::isfinite(U_[js]);
        if (st == VarStatus::at_upper && !uf) st = lf ? VarStatus::at_lower : VarStatus::at_zero;
        if (st == VarStatus::at_lower && !lf) st = uf ? VarStatus::at_upper : VarStatus::at_zero;
        if (st == VarStatus::at_zero && (lf || uf)) st = lf ? VarStatus::at_lower : VarStatus::at_upper;
        switch (st) {
            case VarStatus::at_lower: return L_[js];
            case VarStatus::at_upper: return U_[js];
            default: return 0.0;
        }
    }

    bool same_basic_set(const LpBasis& warm) const {
        if (!factored_ || warm.status.size() != status_.size()) return false;
        for (std::size_t j = 0; j < status_.size(); ++j)
            if ((warm.status[j] == VarStatus::basic) != (status_[j] == VarStatus::basic)) return false;
        return true;
    }

    void init_basis(const LpBasis* warm) {
        if (warm && warm->status.size() == static_cast<std::size_t>(N_)) {
            status_ = warm->status;
        } else {
            status_.assign(static_cast<std::size_t>(N_), VarStatus::at_lower);
            for (int i = 0; i < m_; ++i) status_[static_cast<std::size_t>(n_ + i)] = VarStatus::basic;
        }
        x_.assign(static_cast<std::size_t>(N_), 0.0);
        for (int j = 0; j < N_; ++j)
            if (status_[static_cast<std::size_t>(j)] != VarStatus::basic) x_[static_cast<std::size_t>(j)] = nonbasic_value(j);
        iterations_ = 0;
    }

    // B^-1 in product form: v -> B^-1 v applies the etas in order.
    void ftran_in_place(std::vector<double>& v) const {
        for (std::size_t e = 0; e < eta_row_.size(); ++e) {
            auto r = static_cast<std::size_t>(eta_row_[e]);
            double t = v[r];
            if (t == 0.0) continue;
            t /= eta_pivot_[e];
            v[r] = t;
            for (int p = eta_start_[e]; p < eta_start_[e + 1]; ++p)
                v[static_cast<std::size_t>(eta_idx_[static_cast<std::size_t>(p)])] -= eta_val_[static_cast<std::size_t>(p)] * t;
        }
    }

    /// w -> w^T B^-1, applying the etas in reverse.
    void btran_in_place(std::vector<double>& w) const {
        for (std::size_t e = eta_row_.size(); e-- > 0;) {
            auto r = static_cast<std::size_t>(eta_row_[e]);
            double acc = w[r];
            for (int p = eta_start_[e]; p < eta_start_[e + 1]; ++p)
                acc -= w[static_cast<std::size_t>(eta_idx_[static_cast<std::size_t>(p)])] * eta_val_[static_cast<std::size_t>(p)];
            w[r] = acc / eta_pivot_[e];
        }
    }

    /// Row r of B^-1.
    void inverse_row(int r, std::vector<double>& rho) const {
        rho.assign(static_cast<std::size_t>(m_), 0.0);
        rho[static_cast<std::size_t>(r)] = 1.0;
        btran_in_place(rho);
    }

    /// alpha = B^-1 a_j; returns the indices of its non-negligible entries.
    /// `alpha` must be all zero outside the `nz` of its previous call; only
    /// touched entries are visited.
    void ftran(int j, std::vector<double>& alpha, std::vector<int>& nz) {
        if (alpha.size() != static_cast<std::size_t>(m_)) alpha.assign(static_cast<std::size_t>(m_), 0.0);
        else
            for (int i : nz) alpha[static_cast<std::size_t>(i)] = 0.0;
        mark_.resize(static_cast<std::size_t>(m_), 0);
        nz.clear();
        auto touch = [&](int i) {
            if (!mark_[static_cast<std::size_t>(i)]) {
                mark_[static_cast<std::size_t>(i)] = 1;
                nz.push_back(i);
            }
        };
        for_column(j, [&](int k, double a) {
            alpha[static_cast<std::size_t>(k)] += a;
            touch(k);
        });
        for (std::size_t e = 0; e < eta_row_.size(); ++e) {
            auto r = static_cast<std::size_t>(eta_row_[e]);
            double t = alpha[r];
            if (t == 0.0) continue;
            t /= eta_pivot_[e];
            alpha[r] = t;
            for (int p = eta_start_[e]; p < eta_start_[e + 1]; ++p) {
                int i = eta_idx_[static_cast<std::size_t>(p)];
                alpha[static_cast<std::size_t>(i)] -= eta_val_[static_cast<std::size_t>(p)] * t;
                touch(i);
            }
        }
        std::size_t kept = 0;
        for (int i : nz) {
            mark_[static_cast<std::size_t>(i)] = 0;
            if (std::abs(alpha[static_cast<std::size_t>(i)]) > 1e-12) nz[kept++] = i;
            else alpha[static_cast<std::size_t>(i)] = 0.0;
        }
        nz.resize(kept);
        std::sort(nz.begin(), nz.end());
    }

    void pivot_inverse(int r, const std::vector<double>& alpha, const std::vector<int>& nz) {
        eta_row_.push_back(r);
        eta_pivot_.push_back(alpha[static_cast<std::size_t>(r)]);
        for (int i : nz) {
            if (i == r) continue;
            eta_idx_.push_back(i);
            eta_val_.push_back(alpha[static_cast<std::size_t>(i)]);
        }
        eta_start_.push_back(static_cast<int>(eta_idx_.size()));
    }

    /// Rebuilds B^-1 from the basic set by pivoting structurals into the
    /// identity. Columns that would make the basis singular are dropped and the
    /// logical they would have replaced stays basic.
    void reinvert() {
        eta_row_.clear();
        eta_pivot_.clear();
        eta_idx_.clear();
        eta_val_.clear();
        eta_start_.assign(1, 0);
        head_.resize(static_cast<std::size_t>(m_));
        std::vector<char> free_slot(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) {
            head_[static_cast<std::size_t>(i)] = n_ + i;
            free_slot[static_cast<std::size_t>(i)] = status_[static_cast<std::size_t>(n_ + i)] != VarStatus::basic;
        }
        std::vector<int> cols;
        for (int j = 0; j < n_; ++j)
            if (status_[static_cast<std::size_t>(j)] == VarStatus::basic) cols.push_back(j);
        std::stable_sort(cols.begin(), cols.end(), [&](int a, int b) { return column_nnz(a) < column_nnz(b); });
        std::vector<double> alpha;
        std::vector<int> nz;
        for (int j : cols) {
            ftran(j, alpha, nz);
            int r = -1;
            double best = 1e-9;
            for (int i : nz) {
                if (!free_slot[static_cast<std::size_t>(i)]) continue;
                if (std::abs(alpha[static_cast<std::size_t>(i)]) > best) {
                    best = std::abs(alpha[static_cast<std::size_t>(i)]);
                    r = i;
                }
            }
            if (r < 0) {
                auto js = static_cast<std::size_t>(j);
                status_[js] = std::abs(x_[js] - L_[js]) <= std::abs(x_[js] - U_[js]) ? VarStatus::at_lower
                                                                                      : VarStatus::at_upper;
                x_[js] = nonbasic_value(j);
                continue;
            }
            pivot_inverse(r, alpha, nz);
            head_[static_cast<std::size_t>(r)] = j;
            free_slot[static_cast<std::size_t>(r)] = 0;
        }
        for (int i = 0; i < m_; ++i) {
            int h = head_[static_cast<std::size_t>(i)];
            if (h >= n_) status_[static_cast<std::size_t>(h)] = VarStatus::basic;
        }
        since_reinvert_ = 0;
        factored_ = true;
    }

    void compute_basic_values() {
        std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
        for (int j = 0; j < N_; ++j) {
            if (status_[static_cast<std::size_t>(j)] == VarStatus::basic) continue;
            double v = x_[static_cast<std::size_t>(j)];
            if (v == 0.0) continue;
            for_column(j, [&](int i, double a) { rhs[static_cast<std::size_t>(i)] -= a * v; });
        }
        ftran_in_place(rhs);
        for (int i = 0; i < m_; ++i) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] = rhs[static_cast<std::size_t>(i)];
    }

    void compute_duals(std::vector<double>& y) const {
        for (int i = 0; i < m_; ++i) y[static_cast<std::size_t>(i)] = cost_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])];
        btran_in_place(y);
    }

    double reduced_cost(int j, const std::vector<double>& y) const {
        double d = cost_[static_cast<std::size_t>(j)];
        for_column(j, [&](int i, double a) { d -= y[static_cast<std::size_t>(i)] * a; });
        return d;
    }

    /// Dual simplex from a dual feasible basis, as left behind by an optimal
    /// solve before bounds were tightened. Boxed columns with the wrong sign of
    /// reduced cost are moved to their other bound. Returns nothing when the
    /// basis cannot be made dual feasible or the dual stalls; the primal then
    /// continues from wherever this stopped.
    std::optional<LpStatus> dual_iterate(SteadyClock::time_point deadline) {
        const double ftol = params_.feas_tol;
        const double dtol = dual_tol_;
        const long max_dual = 4L * (m_ + 10);
        std::vector<double> y(static_cast<std::size_t>(m_)), rho(static_cast<std::size_t>(m_)), d(static_cast<std::size_t>(N_)),
            shift(static_cast<std::size_t>(m_)), alpha;
        std::vector<int> nz;
        bool y_current = false;
        for (long it = 0;; ++it) {
            if (it >= max_dual) return std::nullopt;
            if ((iterations_ & 31) == 0 && SteadyClock::now() > deadline) return LpStatus::time_limit;
            if (since_reinvert_ >= kRefactorInterval) {
                reinvert();
                compute_basic_values();
                y_current = false;
            }
            if (!y_current) compute_duals(y);
            y_current = true;

            std::fill(shift.begin(), shift.end(), 0.0);
            bool flipped = false;
            for (int j = 0; j < N_; ++j) {
                auto js = static_cast<std::size_t>(j);
                VarStatus st = status_[js];
                if (st == VarStatus::basic || L_[js] == U_[js]) continue;
                d[js] = reduced_cost(j, y);
                bool bad = (st == VarStatus::at_lower && d[js] < -dtol) || (st == VarStatus::at_upper && d[js] > dtol) ||
                           (st == VarStatus::at_zero && std::abs(d[js]) > dtol);
                if (!bad) continue;
                if (!std::isfinite(L_[js]) || !std::isfinite(U_[js])) return std::nullopt;
                double before = x_[js];
                status_[js] = d[js] < 0 ? VarStatus::at_upper : VarStatus::at_lower;
                x_[js] = nonbasic_value(j);
                double step = x_[js] - before;
                for_column(j, [&](int i, double a) { shift[static_cast<std::size_t>(i)] += a * step; });
                flipped = true;
            }
            if (flipped) {
                ftran_in_place(shift);
                for (int i = 0; i < m_; ++i)
                    x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] -= shift[static_cast<std::size_t>(i)];
            }

            int r = -1;
            double worst = ftol;
            for (int i = 0; i < m_; ++i) {
                int b = head_[static_cast<std::size_t>(i)];
                double v = x_[static_cast<std::size_t>(b)];
                double inf = std::max(L_[static_cast<std::size_t>(b)] - v, v - U_[static_cast<std::size_t>(b)]);
                if (inf > worst) {
                    worst = inf;
                    r = i;
                }
            }
            if (r < 0) {
                if (since_reinvert_ > 0) {
                    reinvert();
                    compute_basic_values();
                    y_current = false;
                    continue;
                }
                if (residual() > 1e-6) return std::nullopt;
                return LpStatus::optimal;
            }
            int b = head_[static_cast<std::size_t>(r)];
            auto bs = static_cast<std::size_t>(b);
            bool up = x_[bs] < L_[bs];
            double target = up ? L_[bs] : U_[bs];
            inverse_row(r, rho);

            // Bound-flipping ratio test: walk the breakpoints in order while
            // flipping boxed columns still leaves the row infeasible, then pick
            // the largest pivot among the remaining candidates (Harris).
            auto row_entry = [&](int j) {
                double a = 0.0;
                for_column(j, [&](int i, double v) { a += rho[static_cast<std::size_t>(i)] * v; });
                return a;
            };
            auto slack = [&](int j, double s) -> double {
                auto js = static_cast<std::size_t>(j);
                VarStatus st = status_[js];
                if (st == VarStatus::at_lower && s > kPivotTol) return std::max(0.0, d[js]);
                if (st == VarStatus::at_upper && s < -kPivotTol) return std::max(0.0, -d[js]);
                if (st == VarStatus::at_zero && std::abs(s) > kPivotTol) return std::abs(d[js]);
                return -1.0;
            };
            struct Breakpoint {
                double ratio;
                int j;
                double a;
            };
            std::vector<Breakpoint> cand;
            for (int j = 0; j < N_; ++j) {
                auto js = static_cast<std::size_t>(j);
                if (status_[js] == VarStatus::basic || L_[js] == U_[js]) continue;
                double a = row_entry(j);
                double room = slack(j, up ? -a : a);
                if (room < 0) continue;
                cand.push_back({room / std::abs(a), j, a});
            }
            if (cand.empty()) {
                if (since_reinvert_ > 0) {
                    reinvert();
                    compute_basic_values();
                    y_current = false;
                    continue;
                }
                return LpStatus::infeasible;
            }
            std::sort(cand.begin(), cand.end(), [](const Breakpoint& x, const Breakpoint& y) {
                return x.ratio != y.ratio ? x.ratio < y.ratio : x.j < y.j;
            });
            double remaining = std::abs(x_[bs] - target);
            std::size_t first = 0;
            while (first + 1 < cand.size()) {
                auto js = static_cast<std::size_t>(cand[first].j);
                double width = std::abs(cand[first].a) * (U_[js] - L_[js]);
                if (!(width < remaining)) break;
                remaining -= width;
                ++first;
            }
            double theta_max = kInf;
            for (std::size_t c = first; c < cand.size(); ++c)
                theta_max = std::min(theta_max, cand[c].ratio + 0.5 * dtol / std::abs(cand[c].a));
            int q = -1;
            double best = 0.0;
            for (std::size_t c = first; c < cand.size() && cand[c].ratio <= theta_max; ++c) {
                if (std::abs(cand[c].a) > best) {
                    best = std::abs(cand[c].a);
                    q = cand[c].j;
                }
            }

            ftran(q, alpha, nz);
            double arq = alpha[static_cast<std::size_t>(r)];
            if (std::abs(arq) < kPivotTol) return std::nullopt;
            auto qs = static_cast<std::size_t>(q);
            double delta = (x_[bs] - target) / arq;
            x_[qs] += delta;
            for (int i : nz) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] -= delta * alpha[static_cast<std::size_t>(i)];
            status_[bs] = up ? VarStatus::at_lower : VarStatus::at_upper;
            x_[bs] = target;
            status_[qs] = VarStatus::basic;
            head_[static_cast<std::size_t>(r)] = q;
            double f = d[qs] / arq;
            for (int k = 0; k < m_; ++k) y[static_cast<std::size_t>(k)] += f * rho[static_cast<std::size_t>(k)];
            pivot_inverse(r, alpha, nz);
            ++since_reinvert_;
            ++iterations_;
        }
    }

    double residual() const {
        std::vector<double> r(static_cast<std::size_t>(m_), 0.0);
        for (int j = 0; j < N_; ++j) {
            double v = x_[static_cast<std::size_t>(j)];
            if (v == 0.0) continue;
            for_column(j, [&](int i, double a) { r[static_cast<std::size_t>(i)] += a * v; });
        }
        double worst = 0.0;
        for (double v : r) worst = std::max(worst, std::abs(v));
        return worst;
    }

    LpStatus iterate(SteadyClock::time_point deadline) {
        const double ftol = params_.feas_tol;
        const long max_iter = 200L * (N_ + 10) + 10000;
        std::vector<double> cb(static_cast<std::size_t>(m_)), y(static_cast<std::size_t>(m_)), rho, alpha;
        std::vector<int> nz;
        int degenerate = 0;
        bool bland = false;
        bool y_current = false;  // phase 2 duals kept up to date across pivots
        while (true) {
            if (iterations_ >= max_iter) return LpStatus::iteration_limit;
            if ((iterations_ & 31) == 0 && SteadyClock::now() > deadline) return LpStatus::time_limit;
            if (since_reinvert_ >= kRefactorInterval) {
                reinvert();
                compute_basic_values();
                y_current = false;
            }

            bool phase1 = false;
            for (int i = 0; i < m_; ++i) {
                int b = head_[static_cast<std::size_t>(i)];
                double v = x_[static_cast<std::size_t>(b)];
                double c = 0.0;
                if (v < L_[static_cast<std::size_t>(b)] - ftol) c = -1.0;
                else if (v > U_[static_cast<std::size_t>(b)] + ftol) c = 1.0;
                cb[static_cast<std::size_t>(i)] = c;
                phase1 = phase1 || c != 0.0;
            }
            if (phase1 || !y_current) {
                if (!phase1)
                    for (int i = 0; i < m_; ++i) cb[static_cast<std::size_t>(i)] = cost_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])];
                y = cb;
                btran_in_place(y);
                y_current = !phase1;
            }
            const double dtol = phase1 ? params_.opt_tol : dual_tol_;

            int q = -1;
            double dq = 0.0, best = 0.0;
            for (int j = 0; j < N_; ++j) {
                auto js = static_cast<std::size_t>(j);
                VarStatus st = status_[js];
                if (st == VarStatus::basic || L_[js] == U_[js]) continue;
                double d = phase1 ? 0.0 : cost_[js];
                for_column(j, [&](int i, double a) { d -= y[static_cast<std::size_t>(i)] * a; });
                bool eligible = (st == VarStatus::at_lower && d < -dtol) || (st == VarStatus::at_upper && d > dtol) ||
                                (st == VarStatus::at_zero && std::abs(d) > dtol);
                if (!eligible) continue;
                if (bland) {
                    q = j;
                    dq = d;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    q = j;
                    dq = d;
                }
            }

            if (q < 0) {
                if (since_reinvert_ > 0) {
                    reinvert();
                    compute_basic_values();
                    y_current = false;
                    continue;
                }
                if (residual() > 1e-6)
                    throw Error(ErrorKind::numerical_breakdown, "basis residual too large after refactorization");
                return phase1 ? LpStatus::infeasible : LpStatus::optimal;
            }

            ftran(q, alpha, nz);
            const double dir = dq < 0 ? 1.0 : -1.0;
            auto qs = static_cast<std::size_t>(q);
            double range = U_[qs] - L_[qs];
            if (!std::isfinite(range)) range = kInf;

            // Harris ratio test: first the step allowed with bounds relaxed by
            // ftol, then the largest pivot among rows blocking within that step.
            auto target = [&](int i, double rate, bool relaxed, double& bound) -> bool {
                int b = head_[static_cast<std::size_t>(i)];
                double v = x_[static_cast<std::size_t>(b)];
                double lb = L_[static_cast<std::size_t>(b)], ub = U_[static_cast<std::size_t>(b)];
                if (rate > 0) {
                    if (v < lb - ftol) bound = lb;
                    else if (v > ub + ftol || !std::isfinite(ub)) return false;
                    else bound = relaxed ? ub + ftol : ub;
                } else {
                    if (v > ub + ftol) bound = ub;
                    else if (v < lb - ftol || !std::isfinite(lb)) return false;
                    else bound = relaxed ? lb - ftol : lb;
                }
                return true;
            };
            double theta_max = kInf;
            if (!bland) {
                for (int i : nz) {
                    double rate = -dir * alpha[static_cast<std::size_t>(i)];
                    if (std::abs(rate) < kPivotTol) continue;
                    double bound;
                    if (!target(i, rate, true, bound)) continue;
                    double v = x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])];
                    theta_max = std::min(theta_max, std::max(0.0, (bound - v) / rate));
                }
            }
            int r = -1;
            double theta = kInf, best_pivot = 0.0;
            bool to_upper = false;
            for (int i : nz) {
                double rate = -dir * alpha[static_cast<std::size_t>(i)];
                if (std::abs(rate) < kPivotTol) continue;
                double bound;
                if (!target(i, rate, false, bound)) continue;
                int b = head_[static_cast<std::size_t>(i)];
                double ratio = std::max(0.0, (bound - x_[static_cast<std::size_t>(b)]) / rate);
                bool take;
                if (bland) {
                    take = r < 0 || ratio < theta ||
                           (ratio == theta && b < head_[static_cast<std::size_t>(r)]);
                } else {
                    take = ratio <= theta_max &&
                           (r < 0 || std::abs(rate) > best_pivot ||
                            (std::abs(rate) == best_pivot && b < head_[static_cast<std::size_t>(r)]));
                }
                if (take) {
                    r = i;
                    theta = ratio;
                    best_pivot = std::abs(rate);
                    to_upper = bound == U_[static_cast<std::size_t>(b)];
                }
            }

            bool flip = std::isfinite(range) && (r < 0 || range <= (bland ? theta : theta_max));
            if (!flip && r < 0) {
                if (phase1) {
                    if (since_reinvert_ == 0)
                        throw Error(ErrorKind::numerical_breakdown, "phase 1 ray without blocking row");
                    reinvert();
                    compute_basic_values();
                    y_current = false;
                    continue;
                }
                return LpStatus::unbounded;
            }
            if (flip) theta = range;

            ++iterations_;
            x_[qs] += dir * theta;
            for (int i : nz) x_[static_cast<std::size_t>(head_[static_cast<std::size_t>(i)])] -= dir * theta * alpha[static_cast<std::size_t>(i)];
            if (flip) {
                status_[qs] = status_[qs] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
                x_[qs] = status_[qs] == VarStatus::at_lower ? L_[qs] : U_[qs];
            } else {
                int leaving = head_[static_cast<std::size_t>(r)];
                auto ls = static_cast<std::size_t>(leaving);
                status_[ls] = to_upper ? VarStatus::at_upper : VarStatus::at_lower;
                x_[ls] = to_upper ? U_[ls] : L_[ls];
                status_[qs] = VarStatus::basic;
                head_[static_cast<std::size_t>(r)] = q;
                if (y_current) {
                    // y += d_q / alpha_r * (row r of the old inverse), so d_q becomes 0.
                    double f = dq / alpha[static_cast<std::size_t>(r)];
                    inverse_row(r, rho);
                    for (int k = 0; k < m_; ++k) y[static_cast<std::size_t>(k)] += f * rho[static_cast<std::size_t>(k)];
                }
                pivot_inverse(r, alpha, nz);
                ++since_reinvert_;
            }

            if (theta <= 1e-12) {
                if (++degenerate > kDegenerateStreak) bland = true;
            } else {
                degenerate = 0;
                bland = false;
            }
        }
    }

    static constexpr int kRefactorInterval = 100;
    static constexpr int kDegenerateStreak = 1000;
    static constexpr double kPivotTol = 1e-9;

    const LinearProgram& lp_;
    SolverParams params_;
    int m_, n_, N_;
    std::vector<double> row_scale_;
    std::vector<double> value_;
    std::vector<double> cost_;
    double dual_tol_ = 1e-7;

    std::vector<double> L_, U_, x_;
    std::vector<VarStatus> status_;
    std::vector<int> head_;
    std::vector<int> eta_row_, eta_start_{0}, eta_idx_;
    std::vector<double> eta_pivot_, eta_val_;
    std::vector<char> mark_;
    long iterations_ = 0;
    int since_reinvert_ = 0;
    bool factored_ = false;
};

inline LpSolution solve_lp(const LinearProgram& lp, const SolverParams& params = {}) {
    BoundedSimplex simplex(lp, params);
    auto deadline = SteadyClock::now() + std::chrono::microseconds(static_cast<long long>(params.time_limit_ms * 1000));
    return simplex.solve(nullptr, nullptr, nullptr, deadline);
}

/// LP relaxation of a model (integrality dropped).
inline LpSolution solve_lp(const MilpModel& model, const SolverParams& params = {}) {
    return solve_lp(to_linear_program(model), params);
}

}  // namespace ttg
