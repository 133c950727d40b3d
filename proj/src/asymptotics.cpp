#include "twvort/asymptotics.hpp"

#include <cmath>
#include <vector>

namespace twvort {

namespace {

struct LineFit {
    bool ok = false;
    double slope = 0.0;
    double r_squared = 0.0;
    int points = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit fit;
    fit.points = static_cast<int>(x.size());
    if (fit.points < 2) return fit;
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < fit.points; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / fit.points;
    const double my = sy / fit.points;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < fit.points; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.ok = true;
    return fit;
}

void attach_target(FitEntry& e, double target) {
    e.target = target;
    if (e.fittable && target != 0.0) {
        e.deviation = std::abs(e.value - target) / std::abs(target);
        e.epsilon_slack = 1.0 - e.value / target;
    }
}

// Collects (r, |series|) samples in the window, skipping magnitudes under the
// floor. A sign change among the retained samples marks the entry unfittable.
struct SeriesSamples {
    std::vector<double> r, magnitude;
    bool sign_change = false;
    int raw_in_window = 0;
};

SeriesSamples collect(const RadialGrid& grid, const std::vector<double>& series,
                      const FitWindow& window, double floor, bool skip_first_node) {
    SeriesSamples out;
    int sign = 0;
    for (int i = skip_first_node ? 1 : 0; i < grid.node_count(); ++i) {
        const double r = grid.nodes[i];
        if (r < window.r_lo || r > window.r_hi) continue;
        ++out.raw_in_window;
        const double v = series[i];
        if (std::abs(v) < floor) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) out.sign_change = true;
        out.r.push_back(r);
        out.magnitude.push_back(std::abs(v));
    }
    return out;
}

FitEntry fit_origin_series(const RadialGrid& grid, const std::vector<double>& series,
                           const FitWindow& window, double floor) {
    FitEntry e;
    e.r_lo = window.r_lo;
    e.r_hi = window.r_hi;
    const SeriesSamples s = collect(grid, series, window, floor, true);
    if (s.sign_change) {
        e.note = "sign change inside the fit window";
        return e;
    }
    if (static_cast<int>(s.r.size()) < 8) {
        e.note = "fewer than 8 usable points";
        e.points = static_cast<int>(s.r.size());
        return e;
    }
    std::vector<double> lx(s.r.size()), ly(s.r.size());
    for (std::size_t i = 0; i < s.r.size(); ++i) {
        lx[i] = std::log(s.r[i]);
        ly[i] = std::log(s.magnitude[i]);
    }
    const LineFit fit = fit_line(lx, ly);
    if (!fit.ok) {
        e.note = "degenerate regression";
        return e;
    }
    e.fittable = true;
    e.value = fit.slope;
    e.points = fit.points;
    e.r_squared = fit.r_squared;
    return e;
}

FitEntry fit_infinity_series(const RadialGrid& grid, const std::vector<double>& series,
                             const FitWindow& window, double floor) {
    FitEntry e;
    e.r_lo = window.r_lo;
    e.r_hi = window.r_hi;
    const SeriesSamples s = collect(grid, series, window, floor, false);
    if (static_cast<int>(s.r.size()) < 8) {
        e.note = "fewer than 8 usable points";
        e.points = static_cast<int>(s.r.size());
        return e;
    }
    std::vector<double> ly(s.r.size());
    for (std::size_t i = 0; i < s.r.size(); ++i) ly[i] = std::log(s.magnitude[i]);
    const LineFit fit = fit_line(s.r, ly);
    if (!fit.ok) {
        e.note = "degenerate regression";
        return e;
    }
    e.fittable = true;
    e.value = -fit.slope;  // decay rate kappa in exp(-kappa r)
    e.points = fit.points;
    e.r_squared = fit.r_squared;
    return e;
}

} // namespace

RateTargets theoretical_rates(const ParameterSet& p) {
    require_valid(p);
    RateTargets t;
    t.a_origin = 2.0;
    t.b_origin = 2.0 * p.n_wind + 2.0;
    t.f_origin = p.n_wind;
    t.g_origin = p.m_wind;
    t.a_inf = std::sqrt(2.0) * p.e1;
    t.b_inf = std::sqrt(2.0) * p.e1;
    t.f_inf_linearized = std::sqrt(2.0 * p.beta1);
    t.f_inf_literal = std::sqrt(2.0) * p.beta1;
    t.g_inf = std::sqrt(p.omega * p.omega - p.alpha + p.beta_prime);
    return t;
}

OriginFits fit_origin_rates(const FieldConfiguration& c, const RadialGrid& grid,
                            const FitOverrides& overrides) {
    FitWindow window;
    if (overrides.origin) {
        window = *overrides.origin;
    } else {
        window.r_lo = 3.0 * grid.cell_widths.front();
        window.r_hi = grid.r_max;  // fallback when f never crosses 0.1
        for (int i = 0; i < grid.node_count(); ++i) {
            if (c.f[i] >= 0.1) {
                window.r_hi = grid.nodes[i];
                break;
            }
        }
    }

    OriginFits fits;
    fits.a = fit_origin_series(grid, c.a, window, overrides.origin_floor);
    fits.f = fit_origin_series(grid, c.f, window, overrides.origin_floor);
    fits.g = fit_origin_series(grid, c.g, window, overrides.origin_floor);

    std::vector<double> b_shift(c.b.size());
    for (std::size_t i = 0; i < c.b.size(); ++i) b_shift[i] = c.b[i] - c.b[0];
    const FitWindow bw = overrides.origin_b ? *overrides.origin_b : window;
    fits.b = fit_origin_series(grid, b_shift, bw, overrides.origin_floor);
    return fits;
}

InfinityFits fit_infinity_rates(const ParameterSet& p, const FieldConfiguration& c,
                                const RadialGrid& grid, const FitOverrides& overrides) {
    FitWindow window;
    if (overrides.infinity) {
        window = *overrides.infinity;
    } else {
        window.r_lo = 0.5 * grid.r_max;
        window.r_hi = 0.8 * grid.r_max;
    }

    const int n = grid.node_count();
    std::vector<double> dev_a(n), dev_f(n);
    for (int i = 0; i < n; ++i) {
        dev_a[i] = c.a[i] - 1.0 / p.e1;
        dev_f[i] = c.f[i] - 1.0;
    }

    InfinityFits fits;
    fits.a = fit_infinity_series(grid, dev_a, window, overrides.infinity_floor);
    fits.b = fit_infinity_series(grid, c.b, window, overrides.infinity_floor);
    fits.f = fit_infinity_series(grid, dev_f, window, overrides.infinity_floor);
    fits.g = fit_infinity_series(grid, c.g, window, overrides.infinity_floor);
    return fits;
}

DecayReport analyze_decay(const ParameterSet& p, const FieldConfiguration& c,
                          const RadialGrid& grid, const FitOverrides& overrides) {
    DecayReport rep;
    rep.targets = theoretical_rates(p);
    rep.origin = fit_origin_rates(c, grid, overrides);
    rep.infinity = fit_infinity_rates(p, c, grid, overrides);

    attach_target(rep.origin.a, rep.targets.a_origin);
    attach_target(rep.origin.b, rep.targets.b_origin);
    attach_target(rep.origin.f, rep.targets.f_origin);
    attach_target(rep.origin.g, rep.targets.g_origin);
    attach_target(rep.infinity.a, rep.targets.a_inf);
    attach_target(rep.infinity.b, rep.targets.b_inf);
    attach_target(rep.infinity.g, rep.targets.g_inf);
    // f is benchmarked against the characteristic root; the literal value is
    // kept alongside and the closer one reported.
    attach_target(rep.infinity.f, rep.targets.f_inf_linearized);
    if (rep.infinity.f.fittable) {
        const double d_lin = std::abs(rep.infinity.f.value - rep.targets.f_inf_linearized);
        const double d_lit = std::abs(rep.infinity.f.value - rep.targets.f_inf_literal);
        rep.f_inf_supported = d_lin <= d_lit ? "linearized" : "literal";
    }
    return rep;
}

} // namespace twvort
