#include "twvort/odecheck.hpp"

#include "twvort/energy.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <stdexcept>

namespace twvort {

namespace {

// Nonuniform three-point derivatives written in slope form so that nodewise
// constant data yields exact zeros: with sm, sp the one-sided slopes,
//   u'  ~ (hp*sm + hm*sp) / (hm + hp)
//   u'' ~ 2 (sp - sm) / (hm + hp).
struct NodeDerivs {
    double d1, d2;
};

NodeDerivs derivs(const std::vector<double>& u, const RadialGrid& grid, int i) {
    const double hm = grid.cell_widths[i - 1];
    const double hp = grid.cell_widths[i];
    const double sm = (u[i] - u[i - 1]) / hm;
    const double sp = (u[i + 1] - u[i]) / hp;
    return {(hp * sm + hm * sp) / (hm + hp), 2.0 * (sp - sm) / (hm + hp)};
}

ResidualNorms norms_of(const std::vector<double>& res, const RadialGrid& grid) {
    ResidualNorms norms;
    const int interior = static_cast<int>(res.size());
    // res[j] sits at node j+1; weight r * dr with dr the half-cell span.
    double l2 = 0.0;
    for (int j = 0; j < interior; ++j) {
        const int node = j + 1;
        const double dr = 0.5 * (grid.cell_widths[node - 1] + grid.cell_widths[node]);
        l2 += res[j] * res[j] * grid.nodes[node] * dr;
    }
    norms.l2_weighted = std::sqrt(l2);

    const int margin = static_cast<int>(std::ceil(0.02 * grid.node_count()));
    for (int j = 0; j < interior; ++j) {
        const int node = j + 1;
        if (node < margin || node >= grid.node_count() - margin) continue;
        norms.sup_interior = std::max(norms.sup_interior, std::abs(res[j]));
    }
    return norms;
}

} // namespace

ResidualReport residuals(const ParameterSet& p, const RadialGrid& grid,
                         const FieldConfiguration& c) {
    if (grid.node_count() < 3)
        throw std::invalid_argument("residuals: need at least 3 nodes");
    if (!c.matches(grid))
        throw std::invalid_argument("residuals: configuration does not match grid");

    const int interior = grid.node_count() - 2;
    ResidualReport rep;
    rep.res_a.resize(interior);
    rep.res_b.resize(interior);
    rep.res_f.resize(interior);
    rep.res_g.resize(interior);

    const double N = p.n_wind;
    const double M = p.m_wind;
    const double w2 = p.omega * p.omega;

    for (int i = 1; i <= interior; ++i) {
        const double r = grid.nodes[i];
        const double a = c.a[i], b = c.b[i], f = c.f[i], g = c.g[i];
        const NodeDerivs da = derivs(c.a, grid, i);
        const NodeDerivs db = derivs(c.b, grid, i);
        const NodeDerivs df = derivs(c.f, grid, i);
        const NodeDerivs dg = derivs(c.g, grid, i);

        // r (a'/r)' = 2 f^2 e1 (e1 a - 1) + 2 g^2 e2 (e2 a - M/N)
        const double rhs_a = 2.0 * f * f * p.e1 * (p.e1 * a - 1.0) +
                             2.0 * g * g * p.e2 * (p.e2 * a - M / N);
        rep.res_a[i - 1] = (da.d2 - da.d1 / r) - rhs_a;

        // (1/r)(r b')' = 2 b (e1^2 f^2 + e2^2 g^2) - 2 e2 g^2
        const double rhs_b = 2.0 * b * (p.e1 * p.e1 * f * f + p.e2 * p.e2 * g * g) -
                             2.0 * p.e2 * g * g;
        rep.res_b[i - 1] = (db.d2 + db.d1 / r) - rhs_b;

        // (1/r)(r f')' = f ((1 - e1 a)^2 N^2 / r^2 + e1^2 w^2 b^2
        //                  + beta1 (f^2 - 1) + beta' g^2)
        const double cf = 1.0 - p.e1 * a;
        const double rhs_f = f * (cf * cf * N * N / (r * r) + p.e1 * p.e1 * w2 * b * b +
                                  p.beta1 * (f * f - 1.0) + p.beta_prime * g * g);
        rep.res_f[i - 1] = (df.d2 + df.d1 / r) - rhs_f;

        // (1/r)(r g')' = g ((e2 N a - M)^2 / r^2 + w^2 (1 - e2 b)^2
        //                  + beta2 g^2 - alpha + beta' f^2)
        const double cg = p.e2 * N * a - M;
        const double eb = 1.0 - p.e2 * b;
        const double rhs_g = g * (cg * cg / (r * r) + w2 * eb * eb +
                                  p.beta2 * g * g - p.alpha + p.beta_prime * f * f);
        rep.res_g[i - 1] = (dg.d2 + dg.d1 / r) - rhs_g;
    }

    rep.norms_a = norms_of(rep.res_a, grid);
    rep.norms_b = norms_of(rep.res_b, grid);
    rep.norms_f = norms_of(rep.res_f, grid);
    rep.norms_g = norms_of(rep.res_g, grid);
    return rep;
}

SolveResult newton_refine(const ParameterSet& p, const RadialGrid& grid,
                          const FieldConfiguration& seed, const NewtonOpts& opts) {
    require_valid(p);
    if (!seed.matches(grid))
        throw std::invalid_argument("newton_refine: seed does not match grid");

    const DofMap dof = DofMap::build(seed.node_count(), seed.pin_a_end);

    SolveResult res;
    res.config = seed;  // pinned entries kept as-is, never moved

    std::vector<double> grad;
    double energy = energy_and_gradient(p, grid, res.config, dof, grad);
    double gnorm = sup_norm(grad);
    res.history.push_back({0, energy, gnorm});

    FieldConfiguration trial = res.config;
    std::vector<double> trial_grad;

    int step = 0;
    for (; step < opts.max_newton && gnorm > opts.tol; ++step) {
        const std::vector<HessianTriplet> trips = hessian_triplets(p, grid, res.config, dof);
        std::vector<Eigen::Triplet<double>> etrips;
        etrips.reserve(trips.size());
        for (const auto& t : trips) etrips.emplace_back(t.row, t.col, t.value);
        Eigen::SparseMatrix<double> H(dof.n_free, dof.n_free);
        H.setFromTriplets(etrips.begin(), etrips.end());

        Eigen::VectorXd rhs(dof.n_free);
        for (int k = 0; k < dof.n_free; ++k) rhs[k] = -grad[k];

        std::vector<double> dir(dof.n_free);
        bool have_newton_dir = false;
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(H);
        if (lu.info() == Eigen::Success) {
            const Eigen::VectorXd d = lu.solve(rhs);
            if (lu.info() == Eigen::Success && d.allFinite()) {
                for (int k = 0; k < dof.n_free; ++k) dir[k] = d[k];
                have_newton_dir = true;
            }
        }
        if (!have_newton_dir) {
            // Singular or indefinite solve: take a Jacobi-scaled gradient step.
            std::vector<double> diag = hessian_diagonal(p, grid, res.config, dof);
            double dmax = 0.0;
            for (double v : diag) dmax = std::max(dmax, std::abs(v));
            const double floor = std::max(1e-12 * dmax, 1e-300);
            for (int k = 0; k < dof.n_free; ++k)
                dir[k] = -grad[k] / std::max(diag[k], floor);
            ++res.fallback_steps;
            res.diagnostic = "linear solve failed; used scaled gradient step";
        }

        // Damped acceptance on the residual norm.
        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= 1e-10) {
            trial = res.config;
            add_scaled_free(trial, dof, dir, lambda);
            const double trial_energy = energy_and_gradient(p, grid, trial, dof, trial_grad);
            const double tnorm = sup_norm(trial_grad);
            if (std::isfinite(trial_energy) && std::isfinite(tnorm) &&
                (tnorm <= (1.0 - 0.25 * lambda) * gnorm || tnorm <= opts.tol)) {
                res.config = trial;
                energy = trial_energy;
                grad = trial_grad;
                gnorm = tnorm;
                accepted = true;
                break;
            }
            lambda *= opts.damping;
        }
        if (!accepted) {
            res.diagnostic = "newton iteration diverged: no damped step reduced the residual";
            res.iterations = step;
            res.converged = false;
            break;
        }
        res.history.push_back({step + 1, energy, gnorm});
    }

    if (res.diagnostic.find("diverged") == std::string::npos) res.iterations = step;
    res.converged = gnorm <= opts.tol;
    res.grad_inf_norm = gnorm;
    res.energy.terms = energy_terms(p, grid, res.config);
    res.energy.total = energy;
    res.energy.grad_inf_norm = gnorm;
    res.emergent.a_end = res.config.a.back();
    res.emergent.b_origin = res.config.b.front();
    return res;
}

} // namespace twvort
