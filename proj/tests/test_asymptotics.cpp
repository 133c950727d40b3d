#include "twvort/asymptotics.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

using namespace twvort;

namespace {

FieldConfiguration zeros(const RadialGrid& grid) {
    FieldConfiguration c;
    const int n = grid.node_count();
    c.a.assign(n, 0.0);
    c.b.assign(n, 0.0);
    c.f.assign(n, 0.0);
    c.g.assign(n, 0.0);
    return c;
}

} // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("exact power law recovers its exponent to 1e-10") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(2.0, 200, Grading::uniform);
    FieldConfiguration c = zeros(grid);
    for (int i = 0; i < grid.node_count(); ++i)
        c.f[i] = std::pow(grid.nodes[i], p.n_wind);
    const OriginFits fits = fit_origin_rates(c, grid);
    REQUIRE(fits.f.fittable);
    CHECK(fits.f.value ==
          doctest::Approx(static_cast<double>(p.n_wind)).epsilon(1e-10));
    CHECK(fits.f.points >= 8);
    CHECK(fits.f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("g = r^M (1 + r^2) fits M to 1e-2 inside r <= 0.05") {
    ParameterSet p;
    const RadialGrid grid = build_grid(1.0, 2000, Grading::uniform);
    FieldConfiguration c = zeros(grid);
    for (int i = 0; i < grid.node_count(); ++i) {
        const double r = grid.nodes[i];
        c.g[i] = std::pow(r, p.m_wind) * (1.0 + r * r);
        c.f[i] = r;  // keeps the default window selector away
    }
    FitOverrides overrides;
    overrides.origin = FitWindow{1e-3, 0.05};
    const OriginFits fits = fit_origin_rates(c, grid, overrides);
    REQUIRE(fits.g.fittable);
    CHECK(std::abs(fits.g.value - p.m_wind) < 1e-2);
}

TEST_CASE("exact exponential recovers its rate to 1e-10") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(30.0, 600, Grading::uniform);
    FieldConfiguration c = zeros(grid);
    for (int i = 0; i < grid.node_count(); ++i)
        c.g[i] = std::exp(-1.2 * grid.nodes[i]);
    const InfinityFits fits = fit_infinity_rates(p, c, grid);
    REQUIRE(fits.g.fittable);
    CHECK(fits.g.value == doctest::Approx(1.2).epsilon(1e-10));
}

TEST_CASE("synthetic profiles built from the target laws recover all entries") {
    ParameterSet p;
    p.e1 = 1.3;
    p.e2 = 0.9;
    p.beta1 = 1.7;
    p.omega = 1.4;
    REQUIRE(validate(p).valid);
    const RateTargets t = theoretical_rates(p);

    const RadialGrid grid = build_grid(24.0, 4000, Grading::uniform);
    FieldConfiguration c = zeros(grid);
    const double b0 = 0.37;
    for (int i = 0; i < grid.node_count(); ++i) {
        const double r = grid.nodes[i];
        // small amplitudes keep the origin window inside the pure power laws
        c.a[i] = 1.0 / p.e1 - std::exp(-t.a_inf * r) / p.e1;
        c.b[i] = b0 * std::exp(-t.b_inf * r);
        c.f[i] = 0.05;  // forces the widest default origin window
        c.g[i] = std::exp(-t.g_inf * r);
    }
    // keep the window where |a - 1/e1| stays far above the cancellation noise
    // of the subtraction from the limit
    FitOverrides inf_overrides;
    inf_overrides.infinity = FitWindow{2.0, 8.0};
    const InfinityFits inf = fit_infinity_rates(p, c, grid, inf_overrides);
    REQUIRE(inf.a.fittable);
    REQUIRE(inf.b.fittable);
    REQUIRE(inf.g.fittable);
    CHECK(inf.a.value == doctest::Approx(t.a_inf).epsilon(1e-8));
    CHECK(inf.b.value == doctest::Approx(t.b_inf).epsilon(1e-8));
    CHECK(inf.g.value == doctest::Approx(t.g_inf).epsilon(1e-8));

    // origin side on exact power laws, b around its limit b0
    const RadialGrid ogrid = build_grid(1.0, 800, Grading::uniform);
    FieldConfiguration oc = zeros(ogrid);
    for (int i = 0; i < ogrid.node_count(); ++i) {
        const double r = ogrid.nodes[i];
        oc.a[i] = 0.8 * std::pow(r, t.a_origin);
        oc.b[i] = b0 + 0.3 * std::pow(r, t.b_origin);
        oc.f[i] = 0.6 * std::pow(r, t.f_origin);
        oc.g[i] = 0.5 * std::pow(r, t.g_origin);
    }
    FitOverrides overrides;
    overrides.origin = FitWindow{0.01, 0.4};
    const OriginFits origin = fit_origin_rates(oc, ogrid, overrides);
    REQUIRE(origin.a.fittable);
    REQUIRE(origin.b.fittable);
    REQUIRE(origin.f.fittable);
    REQUIRE(origin.g.fittable);
    CHECK(origin.a.value == doctest::Approx(t.a_origin).epsilon(1e-8));
    CHECK(origin.b.value == doctest::Approx(t.b_origin).epsilon(1e-8));
    CHECK(origin.f.value == doctest::Approx(t.f_origin).epsilon(1e-8));
    CHECK(origin.g.value == doctest::Approx(t.g_origin).epsilon(1e-8));
}

TEST_CASE("theoretical targets at the baseline and for shifted charges") {
    const ParameterSet base;
    const RateTargets t = theoretical_rates(base);
    CHECK(t.a_origin == 2.0);
    CHECK(t.b_origin == 4.0);
    CHECK(t.f_origin == 1.0);
    CHECK(t.g_origin == 2.0);
    CHECK(t.a_inf == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(t.b_inf == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(t.f_inf_linearized == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(t.f_inf_literal == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(t.g_inf == doctest::Approx(1.0).epsilon(1e-15));

    ParameterSet charged = base;
    charged.e1 = 2.0;
    const RateTargets t2 = theoretical_rates(charged);
    CHECK(t2.a_inf == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(t2.b_inf == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));

    // g rate closes as omega^2 approaches alpha - beta_prime from above
    ParameterSet slow = base;
    slow.alpha = 1.9;
    slow.omega = std::sqrt(0.9 + 1e-6);
    const RateTargets t3 = theoretical_rates(slow);
    CHECK(t3.g_inf == doctest::Approx(1e-3).epsilon(1e-3));
}

TEST_CASE("epsilon slack is consistent with fitted/target") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(2.0, 300, Grading::uniform);
    FieldConfiguration c = zeros(grid);
    for (int i = 0; i < grid.node_count(); ++i)
        c.f[i] = std::pow(grid.nodes[i], 0.93);  // deliberately slack
    const DecayReport rep = analyze_decay(p, c, grid);
    REQUIRE(rep.origin.f.fittable);
    CHECK(rep.origin.f.epsilon_slack ==
          doctest::Approx(1.0 - rep.origin.f.value / rep.targets.f_origin)
              .epsilon(1e-12));
    CHECK(rep.origin.f.epsilon_slack == doctest::Approx(0.07).epsilon(1e-3));
}

TEST_CASE("reports are deterministic") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(20.0, 500, Grading::geometric, 1.005);
    FieldConfiguration c = zeros(grid);
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> val(0.0, 1.0);
    for (int i = 0; i < grid.node_count(); ++i) {
        const double r = grid.nodes[i];
        c.f[i] = std::tanh(r) + 1e-3 * val(rng);
        c.g[i] = std::exp(-r) * (1.0 + 0.01 * val(rng));
    }
    const DecayReport r1 = analyze_decay(p, c, grid);
    const DecayReport r2 = analyze_decay(p, c, grid);
    CHECK(r1.origin.f.value == r2.origin.f.value);
    CHECK(r1.infinity.g.value == r2.infinity.g.value);
    CHECK(r1.infinity.g.points == r2.infinity.g.points);
}

TEST_CASE("unfittable paths: too few points and sign changes") {
    const ParameterSet p;
    const RadialGrid grid = build_grid(2.0, 100, Grading::uniform);
    FieldConfiguration c = zeros(grid);  // g == 0, nothing above the floor
    for (int i = 0; i < grid.node_count(); ++i) c.f[i] = grid.nodes[i];
    const OriginFits few = fit_origin_rates(c, grid);
    CHECK_FALSE(few.g.fittable);
    CHECK(few.g.note == "fewer than 8 usable points");

    for (int i = 0; i < grid.node_count(); ++i) {
        const double r = grid.nodes[i];
        c.g[i] = (i % 2 == 0 ? 1.0 : -1.0) * (r * r + 0.01);
    }
    const OriginFits flip = fit_origin_rates(c, grid);
    CHECK_FALSE(flip.g.fittable);
    CHECK(flip.g.note == "sign change inside the fit window");
}

TEST_CASE("far-field f report names the closer of the two candidate rates") {
    const ParameterSet p;  // linearized 2, literal 2*sqrt(2)
    const RadialGrid grid = build_grid(30.0, 900, Grading::uniform);
    FieldConfiguration c = zeros(grid);
    for (int i = 0; i < grid.node_count(); ++i) {
        c.f[i] = 1.0 - 50.0 * std::exp(-2.05 * grid.nodes[i]);
        c.a[i] = 1.0;
    }
    const DecayReport rep = analyze_decay(p, c, grid);
    REQUIRE(rep.infinity.f.fittable);
    CHECK(rep.f_inf_supported == "linearized");
}

} // TEST_SUITE
