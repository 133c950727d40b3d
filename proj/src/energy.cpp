#include "twvort/energy.hpp"

#include "twvort/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twvort {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Compensated (Kahan) accumulator; keeps the serial reduction noise near one
// ulp of the running total so the line search stays meaningful at tight
// gradient tolerances.
struct Kahan {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

void check_match(const RadialGrid& grid, const FieldConfiguration& c) {
    if (!c.matches(grid))
        throw std::invalid_argument("field configuration does not match grid");
}

// Geometry plus midpoint/slope data of one cell.
struct Cell {
    double h, rm, w;        // width, midpoint radius, quadrature weight 2*pi*rm*h
    double sa, sb, sf, sg;  // exact cell slopes
    double am, bm, fm, gm;  // midpoint field values

    Cell(const RadialGrid& grid, const FieldConfiguration& c, int i) {
        h = grid.cell_widths[i];
        rm = 0.5 * (grid.nodes[i] + grid.nodes[i + 1]);
        w = kTwoPi * rm * h;
        sa = (c.a[i + 1] - c.a[i]) / h;
        sb = (c.b[i + 1] - c.b[i]) / h;
        sf = (c.f[i + 1] - c.f[i]) / h;
        sg = (c.g[i + 1] - c.g[i]) / h;
        am = 0.5 * (c.a[i] + c.a[i + 1]);
        bm = 0.5 * (c.b[i] + c.b[i + 1]);
        fm = 0.5 * (c.f[i] + c.f[i + 1]);
        gm = 0.5 * (c.g[i] + c.g[i + 1]);
    }
};

struct TermValues {
    double gauge_a, gauge_b, grad_f, grad_g, cov_a_f, cov_a_g, twist, potential;
    double alpha_term;
    double total() const {
        return gauge_a + gauge_b + grad_f + grad_g + cov_a_f + cov_a_g + twist +
               potential;
    }
};

TermValues cell_terms(const ParameterSet& p, const Cell& cc) {
    const double n2 = static_cast<double>(p.n_wind) * p.n_wind;
    const double inv_rm2 = 1.0 / (cc.rm * cc.rm);
    const double w2 = p.omega * p.omega;
    const double cf = 1.0 - p.e1 * cc.am;
    const double cg = p.e2 * p.n_wind * cc.am - p.m_wind;

    TermValues t;
    t.gauge_a = cc.w * 0.5 * n2 * cc.sa * cc.sa * inv_rm2;
    t.gauge_b = cc.w * 0.5 * w2 * cc.sb * cc.sb;
    t.grad_f = cc.w * cc.sf * cc.sf;
    t.grad_g = cc.w * cc.sg * cc.sg;
    t.cov_a_f = cc.w * n2 * cf * cf * cc.fm * cc.fm * inv_rm2;
    t.cov_a_g = cc.w * cg * cg * cc.gm * cc.gm * inv_rm2;
    const double eb = 1.0 - p.e2 * cc.bm;
    t.twist = cc.w * w2 *
              (p.e1 * p.e1 * cc.bm * cc.bm * cc.fm * cc.fm + eb * eb * cc.gm * cc.gm);
    t.potential = cc.w * potential_value(p, cc.fm, cc.gm);
    t.alpha_term = cc.w * p.alpha * cc.gm * cc.gm;
    return t;
}

// Partial derivatives of the cell density with respect to slopes and
// midpoints; multiplied by the quadrature weight w they give the cell's
// gradient contributions via d(slope)/du = -+1/h and d(mid)/du = 1/2.
struct DensityDerivs {
    double dsa, dsb, dsf, dsg;
    double dam, dbm, dfm, dgm;
};

DensityDerivs cell_density_derivs(const ParameterSet& p, const Cell& cc) {
    const double N = p.n_wind;
    const double M = p.m_wind;
    const double n2 = N * N;
    const double inv_rm2 = 1.0 / (cc.rm * cc.rm);
    const double w2 = p.omega * p.omega;
    const double cf = 1.0 - p.e1 * cc.am;
    const double cg = p.e2 * N * cc.am - M;
    const double eb = 1.0 - p.e2 * cc.bm;

    DensityDerivs d;
    d.dsa = n2 * cc.sa * inv_rm2;
    d.dsb = w2 * cc.sb;
    d.dsf = 2.0 * cc.sf;
    d.dsg = 2.0 * cc.sg;
    d.dam = (-2.0 * n2 * p.e1 * cf * cc.fm * cc.fm +
             2.0 * p.e2 * N * cg * cc.gm * cc.gm) * inv_rm2;
    d.dbm = 2.0 * w2 * (p.e1 * p.e1 * cc.bm * cc.fm * cc.fm -
                        p.e2 * eb * cc.gm * cc.gm);
    d.dfm = 2.0 * n2 * cf * cf * cc.fm * inv_rm2 +
            2.0 * w2 * p.e1 * p.e1 * cc.bm * cc.bm * cc.fm +
            2.0 * p.beta1 * (cc.fm * cc.fm - 1.0) * cc.fm +
            2.0 * p.beta_prime * cc.fm * cc.gm * cc.gm;
    d.dgm = 2.0 * cg * cg * cc.gm * inv_rm2 + 2.0 * w2 * eb * eb * cc.gm +
            2.0 * p.beta2 * cc.gm * cc.gm * cc.gm +
            2.0 * p.beta_prime * cc.fm * cc.fm * cc.gm - 2.0 * p.alpha * cc.gm;
    return d;
}

// Second derivatives of the cell density with respect to the four midpoint
// values (symmetric 4x4, order a, b, f, g). Slope second derivatives are the
// constants {N^2/rm^2, w^2, 2, 2}; there is no slope/midpoint coupling.
void cell_midpoint_hessian(const ParameterSet& p, const Cell& cc, double psi[4][4]) {
    const double N = p.n_wind;
    const double M = p.m_wind;
    const double n2 = N * N;
    const double inv_rm2 = 1.0 / (cc.rm * cc.rm);
    const double w2 = p.omega * p.omega;
    const double cf = 1.0 - p.e1 * cc.am;
    const double cg = p.e2 * N * cc.am - M;
    const double eb = 1.0 - p.e2 * cc.bm;

    psi[0][0] = (2.0 * n2 * p.e1 * p.e1 * cc.fm * cc.fm +
                 2.0 * p.e2 * p.e2 * n2 * cc.gm * cc.gm) * inv_rm2;
    psi[0][1] = 0.0;
    psi[0][2] = -4.0 * n2 * p.e1 * cf * cc.fm * inv_rm2;
    psi[0][3] = 4.0 * p.e2 * N * cg * cc.gm * inv_rm2;
    psi[1][1] = 2.0 * w2 * (p.e1 * p.e1 * cc.fm * cc.fm + p.e2 * p.e2 * cc.gm * cc.gm);
    psi[1][2] = 4.0 * w2 * p.e1 * p.e1 * cc.bm * cc.fm;
    psi[1][3] = -4.0 * w2 * p.e2 * eb * cc.gm;
    psi[2][2] = 2.0 * n2 * cf * cf * inv_rm2 + 2.0 * w2 * p.e1 * p.e1 * cc.bm * cc.bm +
                2.0 * p.beta1 * (3.0 * cc.fm * cc.fm - 1.0) +
                2.0 * p.beta_prime * cc.gm * cc.gm;
    psi[2][3] = 4.0 * p.beta_prime * cc.fm * cc.gm;
    psi[3][3] = 2.0 * cg * cg * inv_rm2 + 2.0 * w2 * eb * eb +
                6.0 * p.beta2 * cc.gm * cc.gm +
                2.0 * p.beta_prime * cc.fm * cc.fm - 2.0 * p.alpha;
    for (int u = 1; u < 4; ++u)
        for (int v = 0; v < u; ++v) psi[u][v] = psi[v][u];
}

} // namespace

DofMap DofMap::build(int nodes, bool pin_a_end) {
    DofMap dof;
    dof.nodes = nodes;
    dof.pin_a_end = pin_a_end;
    dof.index_of.assign(static_cast<std::size_t>(nodes) * 4, -1);
    const int last = nodes - 1;
    int next = 0;
    for (int node = 0; node < nodes; ++node) {
        for (int fi = 0; fi < 4; ++fi) {
            const auto field = static_cast<FieldId>(fi);
            const bool pinned =
                (node == 0 && (field == FieldId::a || field == FieldId::f ||
                               field == FieldId::g)) ||
                (node == last && (field == FieldId::b || field == FieldId::f ||
                                  field == FieldId::g)) ||
                (node == last && pin_a_end && field == FieldId::a);
            if (pinned) continue;
            dof.index_of[static_cast<std::size_t>(node) * 4 + fi] = next;
            dof.field_node.emplace_back(field, node);
            ++next;
        }
    }
    dof.n_free = next;
    return dof;
}

std::vector<double> gather_free(const FieldConfiguration& c, const DofMap& dof) {
    std::vector<double> x(dof.n_free);
    for (int k = 0; k < dof.n_free; ++k) {
        const auto [field, node] = dof.field_node[k];
        switch (field) {
            case FieldId::a: x[k] = c.a[node]; break;
            case FieldId::b: x[k] = c.b[node]; break;
            case FieldId::f: x[k] = c.f[node]; break;
            case FieldId::g: x[k] = c.g[node]; break;
        }
    }
    return x;
}

void set_free(FieldConfiguration& c, const DofMap& dof, const std::vector<double>& x) {
    for (int k = 0; k < dof.n_free; ++k) {
        const auto [field, node] = dof.field_node[k];
        switch (field) {
            case FieldId::a: c.a[node] = x[k]; break;
            case FieldId::b: c.b[node] = x[k]; break;
            case FieldId::f: c.f[node] = x[k]; break;
            case FieldId::g: c.g[node] = x[k]; break;
        }
    }
}

void add_scaled_free(FieldConfiguration& c, const DofMap& dof,
                     const std::vector<double>& d, double alpha) {
    for (int k = 0; k < dof.n_free; ++k) {
        const auto [field, node] = dof.field_node[k];
        switch (field) {
            case FieldId::a: c.a[node] += alpha * d[k]; break;
            case FieldId::b: c.b[node] += alpha * d[k]; break;
            case FieldId::f: c.f[node] += alpha * d[k]; break;
            case FieldId::g: c.g[node] += alpha * d[k]; break;
        }
    }
}

double total_energy_value(const ParameterSet& p, const RadialGrid& grid,
                          const FieldConfiguration& c) {
    check_match(grid, c);
    Kahan total;
    for (int i = 0; i < grid.cells(); ++i)
        total.add(cell_terms(p, Cell(grid, c, i)).total());
    return total.sum;
}

EnergyBreakdown energy_terms(const ParameterSet& p, const RadialGrid& grid,
                             const FieldConfiguration& c) {
    check_match(grid, c);
    Kahan acc[9];
    for (int i = 0; i < grid.cells(); ++i) {
        const TermValues t = cell_terms(p, Cell(grid, c, i));
        acc[0].add(t.gauge_a);
        acc[1].add(t.gauge_b);
        acc[2].add(t.grad_f);
        acc[3].add(t.grad_g);
        acc[4].add(t.cov_a_f);
        acc[5].add(t.cov_a_g);
        acc[6].add(t.twist);
        acc[7].add(t.potential);
        acc[8].add(t.alpha_term);
    }
    EnergyBreakdown out;
    out.gauge_a = acc[0].sum;
    out.gauge_b = acc[1].sum;
    out.grad_f = acc[2].sum;
    out.grad_g = acc[3].sum;
    out.cov_a_f = acc[4].sum;
    out.cov_a_g = acc[5].sum;
    out.twist = acc[6].sum;
    out.potential = acc[7].sum;
    out.alpha_term = acc[8].sum;
    return out;
}

EnergyReport total_energy(const ParameterSet& p, const RadialGrid& grid,
                          const FieldConfiguration& c) {
    EnergyReport rep;
    rep.terms = energy_terms(p, grid, c);
    rep.total = total_energy_value(p, grid, c);
    const DofMap dof = DofMap::build(c.node_count(), c.pin_a_end);
    rep.grad_inf_norm = sup_norm(energy_gradient(p, grid, c, dof));
    return rep;
}

double energy_and_gradient(const ParameterSet& p, const RadialGrid& grid,
                           const FieldConfiguration& c, const DofMap& dof,
                           std::vector<double>& grad) {
    check_match(grid, c);
    grad.assign(dof.n_free, 0.0);
    Kahan total;
    for (int i = 0; i < grid.cells(); ++i) {
        const Cell cc(grid, c, i);
        total.add(cell_terms(p, cc).total());
        const DensityDerivs d = cell_density_derivs(p, cc);
        const double inv_h = 1.0 / cc.h;

        const auto scatter = [&](FieldId field, double ds, double dm) {
            const int lo = dof.index(field, i);
            const int hi = dof.index(field, i + 1);
            if (lo >= 0) grad[lo] += cc.w * (-ds * inv_h + 0.5 * dm);
            if (hi >= 0) grad[hi] += cc.w * (ds * inv_h + 0.5 * dm);
        };
        scatter(FieldId::a, d.dsa, d.dam);
        scatter(FieldId::b, d.dsb, d.dbm);
        scatter(FieldId::f, d.dsf, d.dfm);
        scatter(FieldId::g, d.dsg, d.dgm);
    }
    return total.sum;
}

std::vector<double> energy_gradient(const ParameterSet& p, const RadialGrid& grid,
                                    const FieldConfiguration& c, const DofMap& dof) {
    std::vector<double> grad;
    energy_and_gradient(p, grid, c, dof, grad);
    return grad;
}

std::vector<double> hessian_diagonal(const ParameterSet& p, const RadialGrid& grid,
                                     const FieldConfiguration& c, const DofMap& dof) {
    check_match(grid, c);
    std::vector<double> diag(dof.n_free, 0.0);
    for (int i = 0; i < grid.cells(); ++i) {
        const Cell cc(grid, c, i);
        double psi[4][4];
        cell_midpoint_hessian(p, cc, psi);
        const double n2 = static_cast<double>(p.n_wind) * p.n_wind;
        const double slope2[4] = {n2 / (cc.rm * cc.rm), p.omega * p.omega, 2.0, 2.0};
        const double inv_h2 = 1.0 / (cc.h * cc.h);
        for (int fi = 0; fi < 4; ++fi) {
            const double v = cc.w * (slope2[fi] * inv_h2 + 0.25 * psi[fi][fi]);
            const int lo = dof.index(static_cast<FieldId>(fi), i);
            const int hi = dof.index(static_cast<FieldId>(fi), i + 1);
            if (lo >= 0) diag[lo] += v;
            if (hi >= 0) diag[hi] += v;
        }
    }
    return diag;
}

double hessian_quadratic_form(const ParameterSet& p, const RadialGrid& grid,
                              const FieldConfiguration& c, const DofMap& dof,
                              const std::vector<double>& d) {
    check_match(grid, c);
    double qf = 0.0;
    for (int i = 0; i < grid.cells(); ++i) {
        const Cell cc(grid, c, i);
        double psi[4][4];
        cell_midpoint_hessian(p, cc, psi);
        const double n2 = static_cast<double>(p.n_wind) * p.n_wind;
        const double slope2[4] = {n2 / (cc.rm * cc.rm), p.omega * p.omega, 2.0, 2.0};
        const double inv_h = 1.0 / cc.h;

        double ds[4], dm[4];
        for (int fi = 0; fi < 4; ++fi) {
            const int lo = dof.index(static_cast<FieldId>(fi), i);
            const int hi = dof.index(static_cast<FieldId>(fi), i + 1);
            const double dlo = lo >= 0 ? d[lo] : 0.0;
            const double dhi = hi >= 0 ? d[hi] : 0.0;
            ds[fi] = (dhi - dlo) * inv_h;
            dm[fi] = 0.5 * (dlo + dhi);
        }
        double cell_qf = 0.0;
        for (int fi = 0; fi < 4; ++fi) cell_qf += slope2[fi] * ds[fi] * ds[fi];
        for (int u = 0; u < 4; ++u)
            for (int v = 0; v < 4; ++v) cell_qf += psi[u][v] * dm[u] * dm[v];
        qf += cc.w * cell_qf;
    }
    return qf;
}

std::vector<HessianTriplet> hessian_triplets(const ParameterSet& p,
                                             const RadialGrid& grid,
                                             const FieldConfiguration& c,
                                             const DofMap& dof) {
    check_match(grid, c);
    std::vector<HessianTriplet> trips;
    trips.reserve(static_cast<std::size_t>(grid.cells()) * 64);
    for (int i = 0; i < grid.cells(); ++i) {
        const Cell cc(grid, c, i);
        double psi[4][4];
        cell_midpoint_hessian(p, cc, psi);
        const double n2 = static_cast<double>(p.n_wind) * p.n_wind;
        const double slope2[4] = {n2 / (cc.rm * cc.rm), p.omega * p.omega, 2.0, 2.0};
        const double inv_h = 1.0 / cc.h;
        const double ds[2] = {-inv_h, inv_h};

        int idx[4][2];
        for (int fi = 0; fi < 4; ++fi) {
            idx[fi][0] = dof.index(static_cast<FieldId>(fi), i);
            idx[fi][1] = dof.index(static_cast<FieldId>(fi), i + 1);
        }
        for (int u = 0; u < 4; ++u) {
            for (int v = 0; v < 4; ++v) {
                for (int au = 0; au < 2; ++au) {
                    const int row = idx[u][au];
                    if (row < 0) continue;
                    for (int av = 0; av < 2; ++av) {
                        const int col = idx[v][av];
                        if (col < 0) continue;
                        double value = 0.25 * psi[u][v];
                        if (u == v) value += slope2[u] * ds[au] * ds[av];
                        value *= cc.w;
                        if (value != 0.0) trips.push_back({row, col, value});
                    }
                }
            }
        }
    }
    return trips;
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace twvort
