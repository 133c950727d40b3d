#pragma once

#include "twvort/energy.hpp"
#include "twvort/fields.hpp"
#include "twvort/mesh.hpp"
#include "twvort/params.hpp"

#include <string>
#include <vector>

namespace twvort {

enum class Method { gradient_descent, nonlinear_cg };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

struct LineSearchOpts {
    double armijo_c = 1e-4;
    double backtrack_ratio = 0.5;
    double min_step = 1e-16;
};

struct MinimizeOpts {
    long max_iter = 200000;
    double grad_tol = 1e-8;
    LineSearchOpts line_search;
    bool safeguard_truncate = false;
    Method method = Method::nonlinear_cg;
};

struct HistorySample {
    long iteration;
    double energy;
    double grad_inf_norm;
};

struct EmergentValues {
    double a_end = 0.0;    // a at r_max; expected near 1/e1
    double b_origin = 0.0; // b at r = 0; the constant usually called C1
};

struct SolveResult {
    FieldConfiguration config;
    EnergyReport energy;
    long iterations = 0;
    bool converged = false;
    double grad_inf_norm = 0.0;
    std::vector<HistorySample> history;
    EmergentValues emergent;
    std::string diagnostic;   // set on line-search failure / solver fallback
    int fallback_steps = 0;   // gradient steps taken inside newton_refine
};

// Descent with Armijo backtracking until the gradient sup norm reaches
// grad_tol or max_iter runs out. Every accepted step decreases the energy (up
// to a 1e-15 relative roundoff allowance); pinned values never move. The
// nonlinear_cg method is Polak-Ribiere with restart on non-descent, run in
// the metric of the Hessian diagonal (Jacobi preconditioner); plain
// gradient_descent is kept as a fallback.
// Throws std::runtime_error("non-finite ...") if the energy turns NaN/inf;
// line-search failure returns converged = false with a diagnostic instead.
SolveResult minimize(const ParameterSet& p, const RadialGrid& grid,
                     const FieldConfiguration& seed, const MinimizeOpts& opts);

// Solves the first entry from the default seed and each subsequent entry from
// the previous converged configuration. A failed entry is flagged in place
// and the sweep continues from its final iterate. Results in input order.
std::vector<SolveResult> continuation_sweep(const std::vector<ParameterSet>& params_list,
                                            const RadialGrid& grid,
                                            const MinimizeOpts& opts);

} // namespace twvort
