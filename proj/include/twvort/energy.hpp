#pragma once

#include "twvort/fields.hpp"
#include "twvort/mesh.hpp"
#include "twvort/params.hpp"

#include <utility>
#include <vector>

namespace twvort {

enum class FieldId { a = 0, b = 1, f = 2, g = 3 };

// Canonical node-major numbering of the unpinned nodal values: for each node
// the surviving entries among (a, b, f, g), in that order. Couplings reach at
// most one node over, so the discrete Hessian is block tridiagonal in this
// ordering.
struct DofMap {
    int nodes = 0;
    bool pin_a_end = false;
    int n_free = 0;
    std::vector<int> index_of;  // 4*nodes, -1 for pinned entries
    std::vector<std::pair<FieldId, int>> field_node;  // inverse map, size n_free

    static DofMap build(int nodes, bool pin_a_end);

    int index(FieldId field, int node) const {
        return index_of[static_cast<std::size_t>(node) * 4 +
                        static_cast<std::size_t>(field)];
    }
};

std::vector<double> gather_free(const FieldConfiguration& c, const DofMap& dof);
void set_free(FieldConfiguration& c, const DofMap& dof, const std::vector<double>& x);
// c_free += alpha * d (pinned entries untouched)
void add_scaled_free(FieldConfiguration& c, const DofMap& dof,
                     const std::vector<double>& d, double alpha);

// Per-term breakdown of the discrete energy. Every term except `potential` is
// a sum of squares and therefore nonnegative. `alpha_term` records the
// integral of 2*pi*r*alpha*g^2 separately; it is part of `potential`, split
// out for diagnosing sign questions, and is not added again into the total.
struct EnergyBreakdown {
    double gauge_a = 0.0;   // pi N^2 (a')^2 / r
    double gauge_b = 0.0;   // pi omega^2 r (b')^2
    double grad_f = 0.0;    // 2 pi r (f')^2
    double grad_g = 0.0;    // 2 pi r (g')^2
    double cov_a_f = 0.0;   // 2 pi N^2 (1 - e1 a)^2 f^2 / r
    double cov_a_g = 0.0;   // 2 pi (e2 N a - M)^2 g^2 / r
    double twist = 0.0;     // 2 pi r omega^2 (e1^2 b^2 f^2 + (1 - e2 b)^2 g^2)
    double potential = 0.0; // 2 pi r V(f, g)
    double alpha_term = 0.0;

    double sum() const {
        return gauge_a + gauge_b + grad_f + grad_g + cov_a_f + cov_a_g + twist +
               potential;
    }
};

struct EnergyReport {
    double total = 0.0;
    EnergyBreakdown terms;
    double grad_inf_norm = 0.0;  // sup norm over free nodal values
};

// Discretization: piecewise-linear reconstruction per cell. Derivative terms
// use the exact cell slope (u_{i+1}-u_i)/h_i; everything else uses field
// values and r at the cell midpoint. Cell contribution 2*pi*r_mid*h_i*density,
// accumulated in ascending cell order (the canonical serial reduction) with
// compensated summation.
double total_energy_value(const ParameterSet& p, const RadialGrid& grid,
                          const FieldConfiguration& c);

EnergyBreakdown energy_terms(const ParameterSet& p, const RadialGrid& grid,
                             const FieldConfiguration& c);

// Full report: total, terms, and the sup norm of the analytic gradient.
EnergyReport total_energy(const ParameterSet& p, const RadialGrid& grid,
                          const FieldConfiguration& c);

// Exact partial derivatives of the discrete energy with respect to every free
// nodal value, assembled cell by cell. Entries for pinned values are absent.
std::vector<double> energy_gradient(const ParameterSet& p, const RadialGrid& grid,
                                    const FieldConfiguration& c, const DofMap& dof);

// One-pass energy plus gradient for the descent loop. Returns the energy.
double energy_and_gradient(const ParameterSet& p, const RadialGrid& grid,
                           const FieldConfiguration& c, const DofMap& dof,
                           std::vector<double>& grad);

// Diagonal of the exact second derivative of the discrete energy; used as a
// Jacobi preconditioner by the descent methods.
std::vector<double> hessian_diagonal(const ParameterSet& p, const RadialGrid& grid,
                                     const FieldConfiguration& c, const DofMap& dof);

// Exact directional curvature d^T (grad^2 E) d in one cell pass; gives the
// line search its quadratic-model step length.
double hessian_quadratic_form(const ParameterSet& p, const RadialGrid& grid,
                              const FieldConfiguration& c, const DofMap& dof,
                              const std::vector<double>& d);

struct HessianTriplet {
    int row;
    int col;
    double value;
};

// All nonzeros of the exact sparse second derivative (both triangles),
// row/col in DofMap numbering. Duplicate entries are to be summed by the
// sparse-matrix backend.
std::vector<HessianTriplet> hessian_triplets(const ParameterSet& p,
                                             const RadialGrid& grid,
                                             const FieldConfiguration& c,
                                             const DofMap& dof);

double sup_norm(const std::vector<double>& v);

} // namespace twvort
