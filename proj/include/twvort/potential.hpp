#pragma once

#include "twvort/params.hpp"

#include <array>

namespace twvort {

enum class CriticalPointKind { minimum, maximum, saddle, degenerate };

const char* to_string(CriticalPointKind kind);

// Stationary point of V(x,y) with x = f^2, y = g^2, plus its classification
// from the (constant) Hessian. `closed_form_value` is the algebraic shortcut
// expression (beta1/2)(alpha-beta_prime)(alpha*beta_prime^2 +
// (beta1*beta2-beta_prime^2)*beta_prime) sometimes quoted for V(x0,y0);
// it does not always agree with direct evaluation, so both are recorded and
// compared.
struct CriticalPointReport {
    double x0 = 0.0;
    double y0 = 0.0;
    double value_at_cp = 0.0;
    double closed_form_value = 0.0;
    bool closed_form_matches = false;
    std::array<std::array<double, 2>, 2> hessian{};
    CriticalPointKind classification = CriticalPointKind::degenerate;
};

// Result of a brute-force sign scan of V over [0,x_max]x[0,y_max].
struct SignScan {
    double landscape_min = 0.0;
    double argmin_x = 0.0;
    double argmin_y = 0.0;
    bool nonneg_over_domain = false;  // landscape_min >= -1e-12
};

// V(f,g) = beta1 (f^2-1)^2 / 2 + beta2 g^4 / 2 + beta_prime f^2 g^2 - alpha g^2.
// Total function, even in f and in g.
double potential_value(const ParameterSet& p, double f, double g);

// Same potential in the substituted coordinates x = f^2, y = g^2.
double potential_value_xy(const ParameterSet& p, double x, double y);

// Gradient of V in (x,y):  (beta1 (x-1) + beta_prime y,
//                           beta2 y + beta_prime x - alpha).
std::array<double, 2> potential_gradient_xy(const ParameterSet& p, double x, double y);

// x0 = (b1 b2 - b' a) / (b1 b2 - b'^2),  y0 = b1 (a - b') / (b1 b2 - b'^2).
// Classification is derived from the Hessian eigenvalues, never assumed.
// Throws std::invalid_argument if the parameters are invalid.
CriticalPointReport critical_point(const ParameterSet& p);

// Evaluates V on a (resolution+1)^2 lattice over [0,x_max]x[0,y_max], plus the
// interior critical point if it falls inside the box. nonneg_over_domain uses
// a -1e-12 tolerance to absorb roundoff of the degree-4 polynomial.
// Requires x_max, y_max > 0 and resolution >= 16.
SignScan scan_sign(const ParameterSet& p, double x_max, double y_max, int resolution);

} // namespace twvort
