#include "twvort/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace twvort {

const char* to_string(CriticalPointKind kind) {
    switch (kind) {
        case CriticalPointKind::minimum: return "minimum";
        case CriticalPointKind::maximum: return "maximum";
        case CriticalPointKind::saddle: return "saddle";
        case CriticalPointKind::degenerate: return "degenerate";
    }
    return "degenerate";
}

double potential_value(const ParameterSet& p, double f, double g) {
    const double f2 = f * f;
    const double g2 = g * g;
    const double d = f2 - 1.0;
    return 0.5 * p.beta1 * d * d + 0.5 * p.beta2 * g2 * g2 +
           p.beta_prime * f2 * g2 - p.alpha * g2;
}

double potential_value_xy(const ParameterSet& p, double x, double y) {
    const double d = x - 1.0;
    return 0.5 * p.beta1 * d * d + 0.5 * p.beta2 * y * y + p.beta_prime * x * y -
           p.alpha * y;
}

std::array<double, 2> potential_gradient_xy(const ParameterSet& p, double x, double y) {
    return {p.beta1 * (x - 1.0) + p.beta_prime * y,
            p.beta2 * y + p.beta_prime * x - p.alpha};
}

CriticalPointReport critical_point(const ParameterSet& p) {
    require_valid(p);

    CriticalPointReport rep;
    const double det = p.beta1 * p.beta2 - p.beta_prime * p.beta_prime;
    rep.x0 = (p.beta1 * p.beta2 - p.beta_prime * p.alpha) / det;
    rep.y0 = p.beta1 * (p.alpha - p.beta_prime) / det;
    rep.value_at_cp = potential_value_xy(p, rep.x0, rep.y0);

    rep.closed_form_value = 0.5 * p.beta1 * (p.alpha - p.beta_prime) *
                            (p.alpha * p.beta_prime * p.beta_prime +
                             det * p.beta_prime);
    const double scale = std::max({1.0, std::abs(rep.value_at_cp),
                                   std::abs(rep.closed_form_value)});
    rep.closed_form_matches =
        std::abs(rep.value_at_cp - rep.closed_form_value) <= 1e-10 * scale;

    rep.hessian = {{{p.beta1, p.beta_prime}, {p.beta_prime, p.beta2}}};

    // Eigenvalues of [[b1, b'], [b', b2]].
    const double tr = p.beta1 + p.beta2;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double lo = 0.5 * (tr - disc);
    const double hi = 0.5 * (tr + disc);
    const double tol = 1e-14 * std::max(1.0, std::abs(hi));
    if (std::abs(lo) <= tol || std::abs(hi) <= tol)
        rep.classification = CriticalPointKind::degenerate;
    else if (lo > 0.0)
        rep.classification = CriticalPointKind::minimum;
    else if (hi < 0.0)
        rep.classification = CriticalPointKind::maximum;
    else
        rep.classification = CriticalPointKind::saddle;
    return rep;
}

SignScan scan_sign(const ParameterSet& p, double x_max, double y_max, int resolution) {
    if (!(x_max > 0.0) || !(y_max > 0.0))
        throw std::invalid_argument("scan_sign: x_max and y_max must be positive");
    if (resolution < 16)
        throw std::invalid_argument("scan_sign: resolution must be >= 16");

    SignScan scan;
    scan.landscape_min = potential_value_xy(p, 0.0, 0.0);
    scan.argmin_x = 0.0;
    scan.argmin_y = 0.0;

    const auto consider = [&](double x, double y) {
        const double v = potential_value_xy(p, x, y);
        if (v < scan.landscape_min) {
            scan.landscape_min = v;
            scan.argmin_x = x;
            scan.argmin_y = y;
        }
    };

    for (int i = 0; i <= resolution; ++i) {
        const double x = x_max * static_cast<double>(i) / resolution;
        for (int j = 0; j <= resolution; ++j)
            consider(x, y_max * static_cast<double>(j) / resolution);
    }

    // Include the interior stationary point, where the true minimum of the
    // smooth landscape sits whenever it lies inside the box.
    const double det = p.beta1 * p.beta2 - p.beta_prime * p.beta_prime;
    if (det > 0.0) {
        const double x0 = (p.beta1 * p.beta2 - p.beta_prime * p.alpha) / det;
        const double y0 = p.beta1 * (p.alpha - p.beta_prime) / det;
        if (x0 >= 0.0 && x0 <= x_max && y0 >= 0.0 && y0 <= y_max)
            consider(x0, y0);
    }

    scan.nonneg_over_domain = scan.landscape_min >= -1e-12;
    return scan;
}

} // namespace twvort
