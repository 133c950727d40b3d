#pragma once

#include "twvort/fields.hpp"
#include "twvort/mesh.hpp"
#include "twvort/minimizer.hpp"
#include "twvort/params.hpp"

#include <vector>

namespace twvort {

struct ResidualNorms {
    double l2_weighted = 0.0;   // sqrt( sum res^2 r dr ) over interior nodes
    double sup_interior = 0.0;  // sup norm excluding the first/last 2% of nodes
};

// Pointwise defects of the four reduced field equations on the interior
// nodes 1..K-1, LHS - RHS with the radial operators discretized by
// second-order central differences with exact nonuniform weights.
struct ResidualReport {
    std::vector<double> res_a, res_b, res_f, res_g;
    ResidualNorms norms_a, norms_b, norms_f, norms_g;
};

// Requires at least 3 nodes. Residuals are exact zeros (no roundoff residue)
// on configurations whose fields are nodewise constant with vanishing
// right-hand sides, e.g. the vacuum.
ResidualReport residuals(const ParameterSet& p, const RadialGrid& grid,
                         const FieldConfiguration& c);

struct NewtonOpts {
    double tol = 1e-12;    // gradient sup-norm target
    int max_newton = 30;
    double damping = 0.5;  // step-halving ratio
};

// Damped Newton iteration on the discrete energy gradient using the exact
// sparse second derivative (block tridiagonal in the node ordering).
// Quadratic near a nondegenerate stationary point. A singular or non-descent
// linear solve falls back to a preconditioned gradient step and is counted in
// fallback_steps; running out of iterations or of damping returns
// converged = false rather than a garbage profile. Pins never move.
SolveResult newton_refine(const ParameterSet& p, const RadialGrid& grid,
                          const FieldConfiguration& seed, const NewtonOpts& opts);

} // namespace twvort
