#include "twvort/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace twvort {

namespace {

bool all_finite(const ParameterSet& p, std::string& bad) {
    struct Entry { const char* name; double value; };
    const Entry entries[] = {
        {"beta1", p.beta1},   {"beta2", p.beta2}, {"beta_prime", p.beta_prime},
        {"alpha", p.alpha},   {"e1", p.e1},       {"e2", p.e2},
        {"omega", p.omega},
    };
    bool ok = true;
    std::ostringstream os;
    for (const auto& e : entries) {
        if (!std::isfinite(e.value)) {
            if (!ok) os << ", ";
            os << e.name << "=" << e.value;
            ok = false;
        }
    }
    bad = os.str();
    return ok;
}

std::string fmt2(const char* lhs, double a, const char* rhs, double b) {
    std::ostringstream os;
    os << lhs << "=" << a << ", " << rhs << "=" << b;
    return os.str();
}

} // namespace

ValidationReport validate(const ParameterSet& p) {
    ValidationReport report;

    std::string bad;
    if (!all_finite(p, bad)) {
        report.violations.push_back({"non-finite", bad});
        report.valid = false;
        return report;
    }

    if (!(p.beta1 > 0.0))
        report.violations.push_back({"β₁>0", "beta1=" + std::to_string(p.beta1)});
    if (!(p.beta2 > 0.0))
        report.violations.push_back({"β₂>0", "beta2=" + std::to_string(p.beta2)});
    if (!(p.alpha >= p.beta_prime && p.beta_prime > 0.0))
        report.violations.push_back(
            {"α≥β′>0", fmt2("alpha", p.alpha, "beta_prime", p.beta_prime)});
    if (!(p.beta1 * p.beta2 > p.beta_prime * p.alpha))
        report.violations.push_back(
            {"β₁β₂>β′α",
             fmt2("beta1*beta2", p.beta1 * p.beta2, "beta_prime*alpha",
                  p.beta_prime * p.alpha)});
    if (!(p.m_wind > p.n_wind && p.n_wind > 0))
        report.violations.push_back(
            {"M>N>0", "N=" + std::to_string(p.n_wind) + ", M=" + std::to_string(p.m_wind)});
    if (!(p.omega * p.omega > p.alpha - p.beta_prime))
        report.violations.push_back(
            {"ω²>α−β′", fmt2("omega^2", p.omega * p.omega, "alpha-beta_prime",
                             p.alpha - p.beta_prime)});

    report.valid = report.violations.empty();
    if (report.valid) {
        // alpha >= beta_prime and beta1*beta2 > beta_prime*alpha together give
        // beta1*beta2 > beta_prime^2, so the critical-point denominator is
        // strictly positive.
        report.denominator_positive =
            p.beta1 * p.beta2 - p.beta_prime * p.beta_prime > 0.0;
        if (!report.denominator_positive)
            throw std::logic_error(
                "validate: corollary β₁β₂>(β′)² failed for a valid set");
    }
    return report;
}

void require_valid(const ParameterSet& p) {
    const ValidationReport report = validate(p);
    if (!report.valid)
        throw std::invalid_argument("invalid parameters: " + describe(report));
}

std::string describe(const ValidationReport& report) {
    if (report.valid) return "valid";
    std::ostringstream os;
    for (std::size_t i = 0; i < report.violations.size(); ++i) {
        if (i) os << "; ";
        os << report.violations[i].inequality << " violated ("
           << report.violations[i].detail << ")";
    }
    return os.str();
}

} // namespace twvort
