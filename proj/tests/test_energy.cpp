#include "twvort/energy.hpp"

#include "twvort/runner.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>
#include <vector>

using namespace twvort;

namespace {

constexpr double kPi = std::numbers::pi;

// The zero-energy state with every pin overwritten, including the ones the
// admissible space would hold at other values.
FieldConfiguration vacuum_fixture(const ParameterSet& p, const RadialGrid& grid) {
    const int n = grid.node_count();
    FieldConfiguration c;
    c.a.assign(n, 1.0 / p.e1);
    c.b.assign(n, 0.0);
    c.f.assign(n, 1.0);
    c.g.assign(n, 0.0);
    return c;
}

FieldConfiguration random_config(const RadialGrid& grid, std::mt19937& rng,
                                 double amplitude = 1.0) {
    std::uniform_real_distribution<double> val(-amplitude, amplitude);
    const int n = grid.node_count();
    FieldConfiguration c;
    c.a.resize(n);
    c.b.resize(n);
    c.f.resize(n);
    c.g.resize(n);
    for (int i = 0; i < n; ++i) {
        c.a[i] = val(rng);
        c.b[i] = val(rng);
        c.f[i] = val(rng);
        c.g[i] = val(rng);
    }
    return c;
}

double energy_of_analytic_profile(int cells) {
    const ParameterSet p;
    const RadialGrid grid = build_grid(10.0, cells, Grading::uniform);
    FieldConfiguration c;
    const int n = grid.node_count();
    c.a.resize(n);
    c.b.resize(n);
    c.f.resize(n);
    c.g.resize(n);
    for (int i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        c.a[i] = 1.0 - std::exp(-r * r);
        c.b[i] = 0.4 * std::exp(-r);
        c.f[i] = std::tanh(r);
        c.g[i] = r * r * std::exp(-1.5 * r);
    }
    return total_energy_value(p, grid, c);
}

} // namespace

TEST_SUITE("energy") {

TEST_CASE("vacuum fixture has exactly zero energy and gradient") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(30.0, 300, Grading::geometric, 1.01);
    const FieldConfiguration c = vacuum_fixture(p, grid);
    CHECK(total_energy_value(p, grid, c) == 0.0);

    const DofMap dof = DofMap::build(c.node_count(), false);
    const std::vector<double> grad = energy_gradient(p, grid, c, dof);
    for (double gi : grad) CHECK(gi == 0.0);
}

TEST_CASE("all-zero configuration integrates the constant potential") {
    ParameterSet p;
    const double R = 7.0;
    const RadialGrid grid = build_grid(R, 1000, Grading::uniform);
    FieldConfiguration c;
    c.a.assign(grid.node_count(), 0.0);
    c.b.assign(grid.node_count(), 0.0);
    c.f.assign(grid.node_count(), 0.0);
    c.g.assign(grid.node_count(), 0.0);
    const double expected = kPi * p.beta1 * R * R / 2.0;
    CHECK(total_energy_value(p, grid, c) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("terms sum to the total and squared terms stay nonnegative") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(12.0, 150, Grading::geometric, 1.01);
    std::mt19937 rng(41);
    for (int k = 0; k < 30; ++k) {
        const FieldConfiguration c = random_config(grid, rng, 1.5);
        const double total = total_energy_value(p, grid, c);
        const EnergyBreakdown t = energy_terms(p, grid, c);
        CHECK(t.sum() == doctest::Approx(total).epsilon(1e-12));
        CHECK(t.gauge_a >= 0.0);
        CHECK(t.gauge_b >= 0.0);
        CHECK(t.grad_f >= 0.0);
        CHECK(t.grad_g >= 0.0);
        CHECK(t.cov_a_f >= 0.0);
        CHECK(t.cov_a_g >= 0.0);
        CHECK(t.twist >= 0.0);
        CHECK(t.alpha_term >= 0.0);
    }
}

TEST_CASE("analytic gradient matches central differences") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(15.0, 100, Grading::geometric, 1.02);
    const FieldConfiguration seed = initial_profile(p, grid);
    const GradCheckResult check =
        gradient_fd_check(p, grid, seed, 40, 4, 1e-6, 1234u);
    CHECK(check.max_rel_error < 1e-6);
}

TEST_CASE("gradient of a single g bump on the vacuum, against the hand formula") {
    const ParameterSet p;  // omega^2 - alpha + beta_prime = 1 > 0
    const RadialGrid grid = build_grid(10.0, 50, Grading::uniform);
    FieldConfiguration c = vacuum_fixture(p, grid);
    const int i = 20;
    const double eps = 1e-3;
    c.g[i] = eps;

    const DofMap dof = DofMap::build(c.node_count(), false);
    const std::vector<double> grad = energy_gradient(p, grid, c, dof);
    const double entry = grad[dof.index(FieldId::g, i)];

    const double h = grid.cell_widths[i];
    const double r_lo = 0.5 * (grid.nodes[i - 1] + grid.nodes[i]);
    const double r_hi = 0.5 * (grid.nodes[i] + grid.nodes[i + 1]);
    const double w_lo = 2.0 * kPi * r_lo * h;
    const double w_hi = 2.0 * kPi * r_hi * h;
    const auto mass = [&](double r) {
        const double cg = p.e2 * p.n_wind / p.e1 - p.m_wind;
        return cg * cg / (r * r) + p.omega * p.omega + p.beta_prime - p.alpha;
    };
    const double gm = 0.5 * eps;
    const double expected = 2.0 * eps * (w_lo + w_hi) / (h * h) +
                            0.5 * (w_lo * mass(r_lo) + w_hi * mass(r_hi)) * eps +
                            0.5 * (w_lo + w_hi) * 2.0 * p.beta2 * gm * gm * gm;
    CHECK(entry == doctest::Approx(expected).epsilon(1e-12));
    CHECK(entry > 0.0);  // the bump raises the energy
}

TEST_CASE("derivative terms of linear fields integrate exactly") {
    ParameterSet p;
    p.beta1 = 0.0;  // test-only couplings, validation bypassed
    const double R = 3.0;
    const RadialGrid grid = build_grid(R, 64, Grading::geometric, 1.03);
    FieldConfiguration c;
    const int n = grid.node_count();
    c.a.resize(n);
    c.b.resize(n);
    c.f.resize(n);
    c.g.resize(n);
    const double ca = 0.3, cb = -0.2, cf = 0.5, cg = 0.7;
    for (int i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        c.a[i] = ca * r;
        c.b[i] = cb * r;
        c.f[i] = cf * r;
        c.g[i] = cg * r;
    }
    const EnergyBreakdown t = energy_terms(p, grid, c);
    CHECK(t.grad_f == doctest::Approx(kPi * cf * cf * R * R).epsilon(1e-13));
    CHECK(t.grad_g == doctest::Approx(kPi * cg * cg * R * R).epsilon(1e-13));
    CHECK(t.gauge_b ==
          doctest::Approx(kPi * p.omega * p.omega * cb * cb * R * R / 2.0).epsilon(1e-13));
}

TEST_CASE("second-order mesh convergence on a smooth profile") {
    const double e1 = energy_of_analytic_profile(125);
    const double e2 = energy_of_analytic_profile(250);
    const double e3 = energy_of_analytic_profile(500);
    const double e4 = energy_of_analytic_profile(1000);
    const double p1 = std::log2(std::abs(e1 - e2) / std::abs(e2 - e3));
    const double p2 = std::log2(std::abs(e2 - e3) / std::abs(e3 - e4));
    CHECK(p1 > 1.8);
    CHECK(p1 < 2.2);
    CHECK(p2 > 1.8);
    CHECK(p2 < 2.2);
}

TEST_CASE("directional derivative converges to <grad, d> as t shrinks") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(10.0, 100, Grading::uniform);
    const FieldConfiguration c = initial_profile(p, grid);
    const DofMap dof = DofMap::build(c.node_count(), false);
    const std::vector<double> grad = energy_gradient(p, grid, c, dof);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> d(dof.n_free);
    for (double& v : d) v = val(rng);
    double gd = 0.0;
    for (int k = 0; k < dof.n_free; ++k) gd += grad[k] * d[k];

    const double e0 = total_energy_value(p, grid, c);
    double prev_err = 0.0;
    bool first = true;
    for (double t : {1e-4, 1e-5, 1e-6}) {
        FieldConfiguration shifted = c;
        add_scaled_free(shifted, dof, d, t);
        const double err =
            std::abs((total_energy_value(p, grid, shifted) - e0) / t - gd);
        if (!first) CHECK(err < prev_err);
        prev_err = err;
        first = false;
    }
}

TEST_CASE("hessian pieces agree with each other and with differenced gradients") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(6.0, 20, Grading::geometric, 1.05);
    std::mt19937 rng(77);
    FieldConfiguration c = initial_profile(p, grid);
    {
        // roughen the profile so no accidental symmetry hides errors
        const DofMap dof = DofMap::build(c.node_count(), false);
        std::vector<double> x = gather_free(c, dof);
        std::uniform_real_distribution<double> nudge(-0.2, 0.2);
        for (double& v : x) v += nudge(rng);
        set_free(c, dof, x);
    }
    const DofMap dof = DofMap::build(c.node_count(), false);
    const int n = dof.n_free;

    std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
    for (const HessianTriplet& t : hessian_triplets(p, grid, c, dof))
        H[t.row][t.col] += t.value;

    // symmetry and diagonal extraction
    const std::vector<double> diag = hessian_diagonal(p, grid, c, dof);
    for (int i = 0; i < n; ++i) {
        CHECK(diag[i] == doctest::Approx(H[i][i]).epsilon(1e-12));
        for (int j = 0; j < n; ++j)
            CHECK(H[i][j] == doctest::Approx(H[j][i]).epsilon(1e-12));
    }

    // quadratic form route
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> d(n);
    for (double& v : d) v = val(rng);
    double qf_dense = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) qf_dense += d[i] * H[i][j] * d[j];
    CHECK(hessian_quadratic_form(p, grid, c, dof, d) ==
          doctest::Approx(qf_dense).epsilon(1e-11));

    // central differences of the analytic gradient as the independent route
    const double step = 1e-6;
    std::vector<double> x = gather_free(c, dof);
    FieldConfiguration work = c;
    double max_err = 0.0, scale = 0.0;
    for (int i = 0; i < n; i += 7) {
        const double saved = x[i];
        x[i] = saved + step;
        set_free(work, dof, x);
        const std::vector<double> gp = energy_gradient(p, grid, work, dof);
        x[i] = saved - step;
        set_free(work, dof, x);
        const std::vector<double> gm = energy_gradient(p, grid, work, dof);
        x[i] = saved;
        set_free(work, dof, x);
        for (int j = 0; j < n; ++j) {
            const double fd = (gp[j] - gm[j]) / (2.0 * step);
            max_err = std::max(max_err, std::abs(fd - H[i][j]));
            scale = std::max(scale, std::abs(fd));
        }
    }
    CHECK(max_err / scale < 1e-6);
}

TEST_CASE("dimension mismatch is refused") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(5.0, 16, Grading::uniform);
    FieldConfiguration c = initial_profile(p, grid);
    c.g.pop_back();
    CHECK_THROWS_AS(total_energy_value(p, grid, c), std::invalid_argument);
}

} // TEST_SUITE
