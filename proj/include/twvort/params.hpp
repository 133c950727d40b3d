#pragma once

#include <string>
#include <vector>

namespace twvort {

// Couplings and topological data of the two-component abelian Higgs
// (Ginzburg-Landau) energy. beta1, beta2, beta_prime, alpha parameterize the
// U(1)xU(1) quartic potential, e1/e2 are the gauge charges of the two scalars,
// n_wind/m_wind their phase windings, omega the twist along the vortex axis.
// Immutable by convention once handed to a solver; safe to share across
// sweep workers.
struct ParameterSet {
    double beta1 = 2.0;
    double beta2 = 2.0;
    double beta_prime = 1.0;
    double alpha = 1.0;
    double e1 = 1.0;
    double e2 = 1.0;
    int n_wind = 1;       // winding N of the first scalar
    int m_wind = 2;       // winding M of the second scalar, M > N
    double omega = 1.0;   // twist; only omega^2 and omega*b enter the energy
};

struct Violation {
    std::string inequality;  // the inequality as written, e.g. "α≥β′>0"
    std::string detail;      // offending values, human readable
};

struct ValidationReport {
    bool valid = false;
    std::vector<Violation> violations;
    // Corollary of the inequalities when valid: beta1*beta2 - beta_prime^2 > 0,
    // the denominator of the potential's critical point. Recomputed and
    // asserted on every successful validation.
    bool denominator_positive = false;
};

// Checks the admissibility conditions:
//   beta1 > 0, beta2 > 0, alpha >= beta_prime > 0,
//   beta1*beta2 > beta_prime*alpha, M > N > 0, omega^2 > alpha - beta_prime.
// Lists every violated inequality, not just the first. Non-finite fields are
// reported as a distinct "non-finite" violation. Pure function.
ValidationReport validate(const ParameterSet& p);

// Throws std::invalid_argument naming the violated inequalities.
void require_valid(const ParameterSet& p);

// One line per violation, "<inequality>: <detail>".
std::string describe(const ValidationReport& report);

} // namespace twvort
