#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "ttg/model/extract.hpp"
#include "ttg/model/milp_model.hpp"
#include "ttg/solver/linear_program.hpp"
#include "ttg/solver/params.hpp"
#include "ttg/solver/presolve.hpp"
#include "ttg/solver/simplex.hpp"

namespace ttg {

enum class MilpStatus { optimal, infeasible, time_limit_with_incumbent, time_limit_no_incumbent };

inline std::string_view to_string(MilpStatus s) {
    switch (s) {
        case MilpStatus::optimal: return "optimal";
        case MilpStatus::infeasible: return "infeasible";
        case MilpStatus::time_limit_with_incumbent: return "time_limit_with_incumbent";
        case MilpStatus::time_limit_no_incumbent: return "time_limit_no_incumbent";
    }
    return "unknown";
}

/// Wall time per phase: loading (model build and presolve) and solving (search).
struct SolveTiming {
    double load_ms = 0.0;
    double solve_ms = 0.0;
    double total_ms = 0.0;
};

struct MilpResult {
    MilpStatus status = MilpStatus::infeasible;
    std::vector<double> x;  // incumbent, in model variable order
    double objective = 0.0;
    double best_bound = 0.0;
    double root_bound = 0.0;
    long node_count = 0;
    long lp_iterations = 0;
    SolveTiming timing;
    std::vector<std::string> presolve_log;

    bool has_incumbent() const {
        return status == MilpStatus::optimal || status == MilpStatus::time_limit_with_incumbent;
    }
};

namespace detail {

inline double ms_between(SteadyClock::time_point a, SteadyClock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

inline bool is_integral(const MilpModel& model, const std::vector<double>& x, double tol) {
    for (int j = 0; j < model.num_vars(); ++j)
        if (model.is_integer(j) && std::abs(x[j] - std::round(x[j])) > tol) return false;
    return true;
}

}  // namespace detail

/// Turns an LP point into a model-feasible 0/1 assignment: the largest flight
/// value per segment, the largest stay value per block (falling back to the
/// cheapest stays), completed canonically. Integral feasible input comes back
/// unchanged; anything that fails a row yields nothing.
inline std::optional<std::vector<double>> rounding_heuristic(const std::vector<double>& lp_x, const MilpModel& model,
                                                             double feas_tol = 1e-6, double int_tol = 1e-6) {
    if (detail::is_integral(model, lp_x, int_tol) && first_violation(model, lp_x, feas_tol, int_tol) == -1)
        return lp_x;
    if (model.segment_flights.empty()) return std::nullopt;
    Selection sel;
    for (const auto& list : model.segment_flights) {
        int best = -1;
        for (int j : list)
            if (best < 0 || lp_x[model.flight_var[j]] > lp_x[model.flight_var[best]]) best = j;
        sel.flights.push_back(best);
    }
    for (const auto& list : model.block_stays) {
        if (list.empty()) return std::nullopt;
        int best = -1;
        for (int s : list)
            if (best < 0 || lp_x[model.stay_var[s]] > lp_x[model.stay_var[best]]) best = s;
        sel.stays.push_back(best);
    }
    auto x = assignment_from_selection(model, sel);
    if (first_violation(model, x, feas_tol, int_tol) == -1) return x;
    for (std::size_t b = 0; b < model.block_stays.size(); ++b) {
        int best = -1;
        for (int s : model.block_stays[b])
            if (best < 0 || model.stays[s].cost < model.stays[best].cost) best = s;
        sel.stays[b] = best;
    }
    x = assignment_from_selection(model, sel);
    if (first_violation(model, x, feas_tol, int_tol) == -1) return x;
    return std::nullopt;
}

namespace detail {

inline PresolveResult identity_presolve(const LinearProgram& lp) {
    PresolveResult p;
    p.reduced = lp;
    p.rep.resize(lp.n);
    p.reduced_index.resize(lp.n);
    p.col_map.resize(lp.n);
    for (int j = 0; j < lp.n; ++j) p.rep[j] = p.reduced_index[j] = p.col_map[j] = j;
    p.is_fixed.assign(lp.n, 0);
    p.fixed_value.assign(lp.n, 0.0);
    return p;
}

struct BoundChange {
    int col;
    double lb, ub;
};

struct Node {
    std::vector<BoundChange> changes;
    double bound = 0.0;
    int depth = 0;
    long id = 0;
    std::shared_ptr<const LpBasis> basis;
    int branch_col = -1;  // last branching, for pseudo-costs
    int branch_dir = 0;
    double branch_frac = 0.0;
};

struct NodeAfter {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.id > b.id;
    }
};

class BranchAndBound {
public:
    BranchAndBound(const MilpModel& model, const PresolveResult& pre, const SolverParams& params,
                   SteadyClock::time_point deadline)
        : model_(model), pre_(pre), lp_(pre.reduced), params_(params), deadline_(deadline), simplex_(lp_, params) {
        integral_objective_ = std::abs(lp_.cost_offset - std::round(lp_.cost_offset)) < 1e-9;
        for (int j = 0; j < lp_.n; ++j) {
            double c = lp_.cost[j];
            if (lp_.integer[j] ? std::abs(c - std::round(c)) > 1e-9 : c != 0.0) integral_objective_ = false;
        }
        for (const auto& list : model_.segment_flights) {
            std::vector<std::pair<DateTime, int>> order;
            for (int f : list) {
                int v = model_.flight_var[static_cast<std::size_t>(f)];
                if (v < 0) continue;
                int r = pre_.root(v);
                if (pre_.is_fixed[static_cast<std::size_t>(r)]) continue;
                order.emplace_back(model_.inventory.flights[static_cast<std::size_t>(f)].departure,
                                   pre_.reduced_index[static_cast<std::size_t>(r)]);
            }
            std::sort(order.begin(), order.end());
            std::vector<int> cols;
            for (const auto& [dep, c] : order)
                if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
            segment_cols_.push_back(std::move(cols));
        }
        pc_sum_[0].assign(lp_.n, 0.0);
        pc_sum_[1].assign(lp_.n, 0.0);
        pc_cnt_[0].assign(lp_.n, 0);
        pc_cnt_[1].assign(lp_.n, 0);
    }

    MilpResult run() {
        MilpResult res;
        Node root;
        root.bound = -kInf;
        push(std::move(root));
        bool timed_out = false;
        double open_bound = kInf;
        while (!empty()) {
            Node node = pop();
            if (prune(node.bound)) continue;
            if (SteadyClock::now() > deadline_) {
                timed_out = true;
                open_bound = std::min(open_bound, node.bound);
                break;
            }
            process(node, timed_out, open_bound);
            if (timed_out) break;
        }
        if (timed_out) {
            while (!empty()) open_bound = std::min(open_bound, pop().bound);
        }
        res.node_count = nodes_;
        res.lp_iterations = iterations_;
        res.root_bound = root_bound_;
        if (has_incumbent_) {
            res.x = incumbent_;
            res.objective = incumbent_obj_;
        }
        if (timed_out) {
            res.status = has_incumbent_ ? MilpStatus::time_limit_with_incumbent : MilpStatus::time_limit_no_incumbent;
            res.best_bound = has_incumbent_ ? std::min(open_bound, incumbent_obj_) : open_bound;
        } else if (has_incumbent_) {
            res.status = MilpStatus::optimal;
            res.best_bound = incumbent_obj_;
        } else {
            res.status = MilpStatus::infeasible;
            res.best_bound = kInf;
        }
        return res;
    }

    long rejected() const { return rejected_; }

private:
    bool prune(double bound) const {
        if (!has_incumbent_) return false;
        double slack = integral_objective_ ? 0.5 : std::max(1e-9, 1e-9 * std::abs(incumbent_obj_));
        slack = std::max(slack, params_.gap_tol * std::abs(incumbent_obj_));
        return bound >= incumbent_obj_ - slack;
    }

    void push(Node n) {
        n.id = next_id_++;
        if (params_.node_order == NodeOrder::best_first) heap_.push(std::move(n));
        else stack_.push_back(std::move(n));
    }
    bool empty() const { return heap_.empty() && stack_.empty(); }
    Node pop() {
        if (params_.node_order == NodeOrder::best_first) {
            Node n = heap_.top();
            heap_.pop();
            return n;
        }
        Node n = std::move(stack_.back());
        stack_.pop_back();
        return n;
    }

    void consider(std::vector<double> x_orig, const char* source) {
        for (int j = 0; j < model_.num_vars(); ++j)
            if (model_.is_integer(j)) x_orig[j] = std::round(x_orig[j]);
        int bad = first_violation(model_, x_orig, std::max(params_.feas_tol, 1e-6), params_.integrality_tol);
        if (bad != -1) {
            ++rejected_;
            trace(std::string("reject ") + source + " candidate at " +
                  (bad >= 0 ? model_.rows[bad].label : std::string("bounds")));
            return;
        }
        double obj = objective_value(model_, x_orig);
        if (!has_incumbent_ || obj < incumbent_obj_ - 1e-9) {
            has_incumbent_ = true;
            incumbent_obj_ = obj;
            incumbent_ = std::move(x_orig);
            trace(std::string("incumbent ") + std::to_string(obj) + " from " + source);
        }
    }

    void trace(const std::string& line) const {
        if (params_.trace) *params_.trace << line << "\n";
    }

    int choose_branch(const std::vector<double>& x) const {
        int best = -1;
        double best_score = -1.0;
        for (int j = 0; j < lp_.n; ++j) {
            if (!lp_.integer[j]) continue;
            double f = x[j] - std::floor(x[j]);
            if (f <= params_.integrality_tol || f >= 1.0 - params_.integrality_tol) continue;
            double score;
            if (params_.branching == Branching::most_fractional) {
                score = std::min(f, 1.0 - f);
            } else {
                double down = pc_cnt_[0][j] ? pc_sum_[0][j] / pc_cnt_[0][j] : 1.0;
                double up = pc_cnt_[1][j] ? pc_sum_[1][j] / pc_cnt_[1][j] : 1.0;
                score = std::max(1e-6, down * f) * std::max(1e-6, up * (1.0 - f));
            }
            if (score > best_score) {
                best_score = score;
                best = j;
            }
        }
        return best;
    }

    /// Splits the flights of the segment with the most fractional flights,
    /// ordered by departure, where the LP weight on the early part is closest
    /// to one half. Returns the early columns, or nothing when every segment
    /// is integral.
    std::optional<std::pair<std::vector<int>, std::vector<int>>> choose_segment_split(const std::vector<double>& x) const {
        const double tol = params_.integrality_tol;
        int best_seg = -1, best_count = 1;
        for (std::size_t s = 0; s < segment_cols_.size(); ++s) {
            int count = 0;
            for (int c : segment_cols_[s]) {
                double v = x[static_cast<std::size_t>(c)];
                count += v > tol && v < 1.0 - tol;
            }
            if (count > best_count) {
                best_count = count;
                best_seg = static_cast<int>(s);
            }
        }
        if (best_seg < 0) return std::nullopt;
        const auto& cols = segment_cols_[static_cast<std::size_t>(best_seg)];
        double total = 0.0;
        for (int c : cols) total += x[static_cast<std::size_t>(c)];
        double acc = 0.0, best_gap = kInf;
        std::size_t split = 0;
        for (std::size_t k = 0; k + 1 < cols.size(); ++k) {
            acc += x[static_cast<std::size_t>(cols[k])];
            if (acc <= tol || acc >= total - tol) continue;
            double gap = std::abs(acc - 0.5 * total);
            if (gap < best_gap) {
                best_gap = gap;
                split = k + 1;
            }
        }
        if (split == 0) return std::nullopt;
        return std::make_pair(std::vector<int>(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(split)),
                              std::vector<int>(cols.begin() + static_cast<std::ptrdiff_t>(split), cols.end()));
    }

    void process(const Node& node, bool& timed_out, double& open_bound) {
        lb_ = lp_.col_lb;
        ub_ = lp_.col_ub;
        for (const auto& c : node.changes) {
            lb_[c.col] = c.lb;
            ub_[c.col] = c.ub;
        }
        LpSolution sol = simplex_.solve(&lb_, &ub_, node.basis.get(), deadline_);
        if (sol.status == LpStatus::iteration_limit && node.basis) sol = simplex_.solve(&lb_, &ub_, nullptr, deadline_);
        ++nodes_;
        iterations_ += sol.iterations;
        if (sol.status == LpStatus::time_limit) {
            timed_out = true;
            open_bound = std::min(open_bound, node.bound);
            return;
        }
        if (sol.status == LpStatus::iteration_limit)
            throw Error(ErrorKind::numerical_breakdown, "simplex iteration limit reached");
        if (sol.status == LpStatus::unbounded)
            throw Error(ErrorKind::unbounded_variable, "LP relaxation is unbounded");
        if (node.depth == 0) root_bound_ = sol.status == LpStatus::optimal ? sol.objective : kInf;
        if (sol.status == LpStatus::infeasible) {
            trace("node " + std::to_string(node.id) + " depth " + std::to_string(node.depth) + " infeasible");
            return;
        }
        if (node.branch_col >= 0 && node.branch_frac > 0) {
            pc_sum_[node.branch_dir][node.branch_col] += std::max(0.0, sol.objective - node.bound) / node.branch_frac;
            ++pc_cnt_[node.branch_dir][node.branch_col];
        }

        int j = choose_branch(sol.x);
        trace("node " + std::to_string(node.id) + " depth " + std::to_string(node.depth) + " lp " +
              std::to_string(sol.objective) + (j < 0 ? " integral" : " branch x" + std::to_string(pre_.col_map[j])));
        if (prune(sol.objective)) return;
        if (j < 0) {
            consider(pre_.postsolve(sol.x), "lp");
            return;
        }
        if (params_.heuristic && (node.depth == 0 || nodes_ % 16 == 0)) {
            if (auto h = rounding_heuristic(pre_.postsolve(sol.x), model_, std::max(params_.feas_tol, 1e-6),
                                            params_.integrality_tol))
                consider(std::move(*h), "rounding");
            if (prune(sol.objective)) return;
        }

        auto basis = std::make_shared<const LpBasis>(std::move(sol.basis));
        if (auto split = choose_segment_split(sol.x)) {
            // Each child rules out one side of the segment's flights.
            Node early{node.changes, sol.objective, node.depth + 1, 0, basis};
            for (int c : split->second) early.changes.push_back({c, lb_[static_cast<std::size_t>(c)], 0.0});
            Node late{node.changes, sol.objective, node.depth + 1, 0, basis};
            for (int c : split->first) late.changes.push_back({c, lb_[static_cast<std::size_t>(c)], 0.0});
            trace("node " + std::to_string(node.id) + " splits a segment after " + std::to_string(split->first.size()) +
                  " flights");
            push(std::move(late));
            push(std::move(early));
            return;
        }
        double v = sol.x[j];
        Node down{node.changes, sol.objective, node.depth + 1, 0, basis, j, 0, v - std::floor(v)};
        down.changes.push_back({j, lb_[j], std::floor(v)});
        Node up{node.changes, sol.objective, node.depth + 1, 0, basis, j, 1, std::ceil(v) - v};
        up.changes.push_back({j, std::ceil(v), ub_[j]});
        bool up_first = v - std::floor(v) >= 0.5;
        if (params_.node_order == NodeOrder::depth_first && !up_first) {
            push(std::move(up));
            push(std::move(down));
        } else {
            push(std::move(down));
            push(std::move(up));
        }
    }

    const MilpModel& model_;
    const PresolveResult& pre_;
    const LinearProgram& lp_;
    SolverParams params_;
    SteadyClock::time_point deadline_;
    BoundedSimplex simplex_;
    std::vector<double> lb_, ub_;
    std::vector<std::vector<int>> segment_cols_;  // reduced flight columns per segment, by departure

    std::priority_queue<Node, std::vector<Node>, NodeAfter> heap_;
    std::vector<Node> stack_;
    long next_id_ = 0;
    long nodes_ = 0;
    long iterations_ = 0;
    long rejected_ = 0;
    double root_bound_ = -kInf;

    bool integral_objective_ = false;
    bool has_incumbent_ = false;
    double incumbent_obj_ = kInf;
    std::vector<double> incumbent_;

    std::vector<double> pc_sum_[2];
    std::vector<int> pc_cnt_[2];
};

}  // namespace detail

/// Presolve plus best-first (or depth-first) branch and bound. Every accepted
/// incumbent is checked row by row against the unreduced model.
inline MilpResult solve_milp(const MilpModel& model, const SolverParams& params = {}) {
    params.validate();
    auto t0 = SteadyClock::now();
    auto deadline = t0 + std::chrono::microseconds(static_cast<long long>(params.time_limit_ms * 1000.0));
    LinearProgram lp = to_linear_program(model);
    PresolveResult pre = params.presolve ? presolve(lp) : detail::identity_presolve(lp);
    auto t1 = SteadyClock::now();

    MilpResult res;
    if (pre.infeasible) {
        res.status = MilpStatus::infeasible;
        res.best_bound = kInf;
        res.root_bound = kInf;
    } else {
        detail::BranchAndBound bnb(model, pre, params, deadline);
        res = bnb.run();
        if (bnb.rejected() > 0 && params.presolve) {
            SolverParams plain = params;
            plain.presolve = false;
            plain.time_limit_ms = std::max(1.0, params.time_limit_ms - detail::ms_between(t0, SteadyClock::now()));
            auto log = pre.log;
            log.push_back("reduced-space candidates failed the audit; solved without presolve");
            MilpResult again = solve_milp(model, plain);
            again.presolve_log = std::move(log);
            again.timing.load_ms = detail::ms_between(t0, t1);
            again.timing.solve_ms = detail::ms_between(t1, SteadyClock::now());
            again.timing.total_ms = again.timing.load_ms + again.timing.solve_ms;
            return again;
        }
    }
    auto t2 = SteadyClock::now();
    res.presolve_log = std::move(pre.log);
    res.timing.load_ms = detail::ms_between(t0, t1);
    res.timing.solve_ms = detail::ms_between(t1, t2);
    res.timing.total_ms = res.timing.load_ms + res.timing.solve_ms;
    return res;
}

}  // namespace ttg
