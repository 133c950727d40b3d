#include "twvort/minimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace twvort {

const char* to_string(Method method) {
    return method == Method::nonlinear_cg ? "nonlinear_cg" : "gradient_descent";
}

Method method_from_string(const std::string& name) {
    if (name == "nonlinear_cg") return Method::nonlinear_cg;
    if (name == "gradient_descent") return Method::gradient_descent;
    throw std::invalid_argument("unknown method '" + name +
                                "' (expected nonlinear_cg or gradient_descent)");
}

namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

void check_finite(double energy) {
    if (!std::isfinite(energy))
        throw std::runtime_error("non-finite energy encountered during descent");
}

// Inverse Hessian diagonal, floored away from zero. The diagonal is dominated
// by the slope stiffness 2*w/h^2 and stays positive in practice; the floor
// guards stray configurations far from the admissible region.
std::vector<double> jacobi_scaling(const ParameterSet& p, const RadialGrid& grid,
                                   const FieldConfiguration& c, const DofMap& dof) {
    std::vector<double> diag = hessian_diagonal(p, grid, c, dof);
    double dmax = 0.0;
    for (double v : diag) dmax = std::max(dmax, std::abs(v));
    const double floor = std::max(1e-12 * dmax, 1e-300);
    for (double& v : diag) v = 1.0 / std::max(v, floor);
    return diag;
}

} // namespace

SolveResult minimize(const ParameterSet& p, const RadialGrid& grid,
                     const FieldConfiguration& seed, const MinimizeOpts& opts) {
    require_valid(p);
    if (!seed.matches(grid))
        throw std::invalid_argument("minimize: seed does not match grid");
    if (!(opts.grad_tol > 0.0))
        throw std::invalid_argument("minimize: grad_tol must be positive");

    const DofMap dof = DofMap::build(seed.node_count(), seed.pin_a_end);

    SolveResult res;
    // The seed's pinned entries are taken as-is and never move; the normal
    // entry points (initial_profile, the CLI) supply the admissible values,
    // while test fixtures may deliberately override them.
    res.config = seed;

    std::vector<double> grad;
    double energy = energy_and_gradient(p, grid, res.config, dof, grad);
    check_finite(energy);
    double gnorm = sup_norm(grad);

    std::vector<double> scaling = jacobi_scaling(p, grid, res.config, dof);
    std::vector<double> dir(dof.n_free);
    std::vector<double> pg(dof.n_free);  // preconditioned gradient
    std::vector<double> grad_prev, pg_prev;
    FieldConfiguration trial = res.config;
    std::vector<double> trial_grad;

    const bool use_cg = opts.method == Method::nonlinear_cg;
    bool have_prev = false;
    // The preconditioner is held fixed between refreshes so the conjugate
    // directions stay consistent with one metric.
    constexpr long kPrecondRefresh = 25;

    res.history.push_back({0, energy, gnorm});

    long iter = 0;
    for (; iter < opts.max_iter && gnorm > opts.grad_tol; ++iter) {
        if (use_cg) {
            for (int k = 0; k < dof.n_free; ++k) pg[k] = scaling[k] * grad[k];
        } else {
            pg = grad;
        }

        if (use_cg && have_prev) {
            // Polak-Ribiere+ in the preconditioner metric.
            double num = 0.0, den = 0.0;
            for (int k = 0; k < dof.n_free; ++k) {
                num += pg[k] * (grad[k] - grad_prev[k]);
                den += pg_prev[k] * grad_prev[k];
            }
            const double beta = den > 0.0 ? std::max(0.0, num / den) : 0.0;
            for (int k = 0; k < dof.n_free; ++k) dir[k] = -pg[k] + beta * dir[k];
        } else {
            for (int k = 0; k < dof.n_free; ++k) dir[k] = -pg[k];
        }

        double slope = dot(grad, dir);
        if (!(slope < 0.0)) {
            // Restart on non-descent.
            for (int k = 0; k < dof.n_free; ++k) dir[k] = -pg[k];
            slope = dot(grad, dir);
            if (!(slope < 0.0)) {
                res.diagnostic = "descent direction degenerate (slope >= 0)";
                break;
            }
        }

        // Step length from the exact quadratic model along the direction;
        // falls back to a unit preconditioned step where the curvature is not
        // positive. Armijo backtracking guards the nonquadratic regime.
        const double curvature = hessian_quadratic_form(p, grid, res.config, dof, dir);
        double alpha = curvature > 0.0 ? -slope / curvature : 1.0;
        if (!(alpha > 0.0) || !std::isfinite(alpha)) alpha = 1.0;

        // The 1e-15 relative acceptance slack keeps the test meaningful when
        // the true decrease falls below roundoff near convergence.
        const double slack = 1e-15 * std::abs(energy);
        bool accepted = false;
        double trial_energy = 0.0;
        while (alpha >= opts.line_search.min_step) {
            trial = res.config;
            add_scaled_free(trial, dof, dir, alpha);
            trial_energy = energy_and_gradient(p, grid, trial, dof, trial_grad);
            check_finite(trial_energy);
            if (trial_energy <= energy + opts.line_search.armijo_c * alpha * slope + slack) {
                accepted = true;
                break;
            }
            alpha *= opts.line_search.backtrack_ratio;
        }
        if (!accepted) {
            res.diagnostic = "line search failed: no decrease above step " +
                             std::to_string(opts.line_search.min_step);
            break;
        }

        if (opts.safeguard_truncate) {
            FieldConfiguration clipped = truncate(trial, p);
            std::vector<double> clipped_grad;
            const double clipped_energy =
                energy_and_gradient(p, grid, clipped, dof, clipped_grad);
            // Keep the clipped iterate only while the move stays non-increasing.
            if (clipped_energy <= energy + slack) {
                trial = std::move(clipped);
                trial_energy = clipped_energy;
                trial_grad = std::move(clipped_grad);
            }
        }

        grad_prev = grad;
        if (use_cg) pg_prev = pg;
        have_prev = true;

        res.config = trial;
        energy = trial_energy;
        grad = trial_grad;
        gnorm = sup_norm(grad);
        if (use_cg && (iter + 1) % kPrecondRefresh == 0)
            scaling = jacobi_scaling(p, grid, res.config, dof);

        res.history.push_back({iter + 1, energy, gnorm});
    }

    res.iterations = iter;
    res.converged = gnorm <= opts.grad_tol;
    res.grad_inf_norm = gnorm;
    res.energy.terms = energy_terms(p, grid, res.config);
    res.energy.total = energy;
    res.energy.grad_inf_norm = gnorm;
    res.emergent.a_end = res.config.a.back();
    res.emergent.b_origin = res.config.b.front();
    return res;
}

std::vector<SolveResult> continuation_sweep(const std::vector<ParameterSet>& params_list,
                                            const RadialGrid& grid,
                                            const MinimizeOpts& opts) {
    std::vector<SolveResult> results;
    results.reserve(params_list.size());
    FieldConfiguration warm;
    bool have_warm = false;
    for (const ParameterSet& p : params_list) {
        const ValidationReport report = validate(p);
        if (!report.valid) {
            SolveResult failed;
            failed.converged = false;
            failed.diagnostic = "invalid parameters: " + describe(report);
            results.push_back(std::move(failed));
            continue;
        }
        FieldConfiguration seed = have_warm ? warm : initial_profile(p, grid);
        seed.apply_pins(p);
        SolveResult res = minimize(p, grid, seed, opts);
        warm = res.config;
        have_warm = true;
        results.push_back(std::move(res));
    }
    return results;
}

} // namespace twvort
