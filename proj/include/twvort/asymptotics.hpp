#pragma once

#include "twvort/fields.hpp"
#include "twvort/mesh.hpp"
#include "twvort/params.hpp"

#include <optional>
#include <string>

namespace twvort {

struct FitWindow {
    double r_lo = 0.0;
    double r_hi = 0.0;
};

// One fitted exponent or rate. `target` is the theoretical value the entry is
// measured against, `deviation` the relative distance to it and
// `epsilon_slack` the implied slack in fitted = target * (1 - eps).
struct FitEntry {
    bool fittable = false;
    double value = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;
    int points = 0;
    double r_squared = 0.0;
    double target = 0.0;
    double deviation = 0.0;
    double epsilon_slack = 0.0;
    std::string note;  // reason when unfittable
};

// Theoretical origin exponents and far-field rates implied by the parameters:
// a ~ r^2, b - b(0) ~ r^(2N+2), f ~ r^N, g ~ r^M at the origin;
// |1/e1 - a| and |b| ~ exp(-sqrt(2) e1 r), g ~ exp(-sqrt(w^2 - alpha + b') r)
// at infinity. For f two candidates are tracked: sqrt(2 beta1), the
// characteristic root of the linearized equation F'' = 2 beta1 F, and the
// literal sqrt(2)*beta1 sometimes quoted; reports state which one the data
// supports.
struct RateTargets {
    double a_origin = 0.0;
    double b_origin = 0.0;
    double f_origin = 0.0;
    double g_origin = 0.0;
    double a_inf = 0.0;
    double b_inf = 0.0;
    double f_inf_linearized = 0.0;
    double f_inf_literal = 0.0;
    double g_inf = 0.0;
};

struct FitOverrides {
    std::optional<FitWindow> origin;       // applies to all four origin fits
    std::optional<FitWindow> origin_b;     // b-specific override
    std::optional<FitWindow> infinity;
    double origin_floor = 1e-12;  // |value| below this is unusable near r = 0
    double infinity_floor = 1e-13;
};

struct OriginFits {
    FitEntry a, b, f, g;
};

struct InfinityFits {
    FitEntry a, b, f, g;
};

struct DecayReport {
    OriginFits origin;
    InfinityFits infinity;
    RateTargets targets;
    // Which far-field f target the fit lies closer to:
    // "linearized", "literal", or "unfittable".
    std::string f_inf_supported = "unfittable";
};

RateTargets theoretical_rates(const ParameterSet& p);

// Least-squares slope of log(value) against log(r) per field; b is fitted on
// |b - b[0]|. Default window: [3 * first cell width, first r where f >= 0.1].
// In-window samples with |value| below origin_floor are unusable; entries
// with fewer than 8 usable points or sign changes among them are flagged
// unfittable instead of reported.
OriginFits fit_origin_rates(const FieldConfiguration& c, const RadialGrid& grid,
                            const FitOverrides& overrides = {});

// Least-squares slope of log|deviation from the limit| against r, limits
// (1/e1, 0, 1, 0) for (a, b, f, g). Default window [0.5, 0.8] * r_max; values
// below infinity_floor are excluded as noise. Rate reported positive.
InfinityFits fit_infinity_rates(const ParameterSet& p, const FieldConfiguration& c,
                                const RadialGrid& grid,
                                const FitOverrides& overrides = {});

// Both halves plus targets, deviations and epsilon slack. Deterministic given
// (config, grid, overrides).
DecayReport analyze_decay(const ParameterSet& p, const FieldConfiguration& c,
                          const RadialGrid& grid, const FitOverrides& overrides = {});

} // namespace twvort
