#pragma once

#include <ostream>
#include <string_view>

#include "ttg/error.hpp"

namespace ttg {

enum class Branching { most_fractional, pseudo_cost };
enum class NodeOrder { best_first, depth_first };

struct SolverParams {
    double feas_tol = 1e-7;
    double opt_tol = 1e-7;
    double integrality_tol = 1e-6;
    double gap_tol = 0.0;
    double time_limit_ms = 60000.0;
    Branching branching = Branching::most_fractional;
    NodeOrder node_order = NodeOrder::best_first;
    bool presolve = true;
    bool heuristic = true;
    std::ostream* trace = nullptr;

    void validate() const {
        if (!(feas_tol > 0) || !(opt_tol > 0) || !(integrality_tol > 0))
            throw Error(ErrorKind::invalid_argument, "tolerances must be positive", "params");
        if (gap_tol < 0) throw Error(ErrorKind::invalid_argument, "gap tolerance must be >= 0", "params.gap_tol");
        if (!(time_limit_ms > 0))
            throw Error(ErrorKind::invalid_argument, "time limit must be positive", "params.time_limit_ms");
    }
};

inline std::string_view to_string(Branching b) {
    return b == Branching::most_fractional ? "most_fractional" : "pseudo_cost";
}
inline std::string_view to_string(NodeOrder o) { return o == NodeOrder::best_first ? "best_first" : "depth_first"; }

}  // namespace ttg
