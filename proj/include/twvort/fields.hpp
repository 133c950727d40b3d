#pragma once

#include "twvort/mesh.hpp"
#include "twvort/params.hpp"

#include <vector>

namespace twvort {

// Candidate profile quartet sampled on the grid nodes. The admissible space
// pins six boundary values exactly:
//   a[0] = 0, f[0] = 0, g[0] = 0, b[K] = 0, f[K] = 1, g[K] = 0.
// a[K] and b[0] stay free; their limits (1/e1 and the constant usually called
// C1) are natural boundary conditions that the minimizer reproduces rather
// than imposes. pin_a_end = true additionally pins a[K] = 1/e1 for
// cross-checks.
struct FieldConfiguration {
    std::vector<double> a;  // azimuthal gauge profile, A_phi = N a(r)
    std::vector<double> b;  // twist gauge profile, A_3 = omega b(r)
    std::vector<double> f;  // modulus of the first scalar
    std::vector<double> g;  // modulus of the second scalar
    bool pin_a_end = false;

    int node_count() const { return static_cast<int>(a.size()); }

    // Writes the pinned boundary values exactly.
    void apply_pins(const ParameterSet& p);

    bool matches(const RadialGrid& grid) const {
        return node_count() == grid.node_count() &&
               static_cast<int>(b.size()) == grid.node_count() &&
               static_cast<int>(f.size()) == grid.node_count() &&
               static_cast<int>(g.size()) == grid.node_count();
    }
};

// Descent seed:
//   a(r) = (1/e1)(1 - exp(-r^2)),  b(r) = (1/e2) exp(-r^2),
//   f(r) = tanh(r)^N,              g(r) = g_amplitude * r^M exp(-r),
// with the pinned entries overwritten exactly afterwards.
FieldConfiguration initial_profile(const ParameterSet& p, const RadialGrid& grid,
                                   double g_amplitude = 1.0);

// Pointwise clamp of a into [0, 1/e1] and f into [0, 1]; b and g untouched.
// Pinned entries already satisfy the bounds. Idempotent; configs already
// inside the bounds come back bitwise identical.
FieldConfiguration truncate(const FieldConfiguration& config, const ParameterSet& p);

} // namespace twvort
