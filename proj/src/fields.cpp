#include "twvort/fields.hpp"

#include <algorithm>
#include <cmath>

namespace twvort {

void FieldConfiguration::apply_pins(const ParameterSet& p) {
    const int last = node_count() - 1;
    a[0] = 0.0;
    f[0] = 0.0;
    g[0] = 0.0;
    b[last] = 0.0;
    f[last] = 1.0;
    g[last] = 0.0;
    if (pin_a_end) a[last] = 1.0 / p.e1;
}

FieldConfiguration initial_profile(const ParameterSet& p, const RadialGrid& grid,
                                   double g_amplitude) {
    const int n = grid.node_count();
    FieldConfiguration c;
    c.a.resize(n);
    c.b.resize(n);
    c.f.resize(n);
    c.g.resize(n);
    for (int i = 0; i < n; ++i) {
        const double r = grid.nodes[i];
        const double gauss = std::exp(-r * r);
        c.a[i] = (1.0 - gauss) / p.e1;
        c.b[i] = gauss / p.e2;
        c.f[i] = std::pow(std::tanh(r), p.n_wind);
        c.g[i] = g_amplitude * std::pow(r, p.m_wind) * std::exp(-r);
    }
    c.apply_pins(p);
    return c;
}

FieldConfiguration truncate(const FieldConfiguration& config, const ParameterSet& p) {
    FieldConfiguration out = config;
    const double a_hi = 1.0 / p.e1;
    for (double& v : out.a) v = std::clamp(v, 0.0, a_hi);
    // f is a modulus: fold negative excursions back before capping, which
    // keeps f^2 (and with it every f-carrying energy term) non-increasing.
    for (double& v : out.f) v = std::min(std::abs(v), 1.0);
    return out;
}

} // namespace twvort
