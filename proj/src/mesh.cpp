#include "twvort/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twvort {

const char* to_string(Grading grading) {
    switch (grading) {
        case Grading::uniform: return "uniform";
        case Grading::geometric: return "geometric";
        case Grading::custom: return "custom";
    }
    return "custom";
}

namespace {

void recompute_widths(RadialGrid& grid) {
    const int cells = grid.node_count() - 1;
    grid.cell_widths.resize(cells);
    for (int i = 0; i < cells; ++i)
        grid.cell_widths[i] = grid.nodes[i + 1] - grid.nodes[i];
}

} // namespace

RadialGrid build_grid(double r_max, int cells, Grading grading, double ratio) {
    if (!(r_max > 0.0))
        throw std::invalid_argument("build_grid: r_max must be positive, got " +
                                    std::to_string(r_max));
    if (cells < 8)
        throw std::invalid_argument("build_grid: need at least 8 cells, got " +
                                    std::to_string(cells));
    if (grading == Grading::custom)
        throw std::invalid_argument("build_grid: custom grading requires from_nodes");

    RadialGrid grid;
    grid.r_max = r_max;
    grid.grading = grading;
    grid.ratio = grading == Grading::geometric ? ratio : 1.0;
    grid.nodes.resize(cells + 1);

    if (grading == Grading::uniform || ratio == 1.0) {
        for (int i = 0; i <= cells; ++i)
            grid.nodes[i] = r_max * static_cast<double>(i) / cells;
    } else {
        if (!(ratio > 0.0))
            throw std::invalid_argument("build_grid: ratio must be positive");
        // Widths proportional to ratio^i; accumulate in extended precision so
        // forcing the last node onto r_max perturbs the final width by less
        // than the 1e-12 ratio invariant.
        std::vector<double> w(cells);
        long double sum = 0.0L;
        for (int i = 0; i < cells; ++i) {
            w[i] = std::pow(ratio, i);
            sum += w[i];
        }
        const long double scale = static_cast<long double>(r_max) / sum;
        long double acc = 0.0L;
        grid.nodes[0] = 0.0;
        for (int i = 0; i < cells; ++i) {
            acc += scale * w[i];
            grid.nodes[i + 1] = static_cast<double>(acc);
        }
    }
    grid.nodes[0] = 0.0;
    grid.nodes[cells] = r_max;
    recompute_widths(grid);
    for (int i = 0; i < cells; ++i)
        if (!(grid.cell_widths[i] > 0.0))
            throw std::invalid_argument("build_grid: degenerate cell " + std::to_string(i));
    return grid;
}

RadialGrid RadialGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 2)
        throw std::invalid_argument("from_nodes: need at least 2 nodes");
    if (nodes.front() != 0.0)
        throw std::invalid_argument("from_nodes: first node must be r = 0");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("from_nodes: nodes must be strictly increasing");

    RadialGrid grid;
    grid.nodes = std::move(nodes);
    grid.r_max = grid.nodes.back();
    recompute_widths(grid);

    const double h0 = grid.cell_widths.front();
    bool uniform = true;
    for (double h : grid.cell_widths)
        if (std::abs(h - h0) > 1e-12 * grid.r_max) { uniform = false; break; }
    if (uniform) {
        grid.grading = Grading::uniform;
        grid.ratio = 1.0;
        return grid;
    }
    if (grid.cells() >= 2) {
        const double q = grid.cell_widths[1] / grid.cell_widths[0];
        bool geometric = true;
        for (int i = 0; i + 1 < grid.cells(); ++i) {
            const double qi = grid.cell_widths[i + 1] / grid.cell_widths[i];
            if (std::abs(qi - q) > 1e-12 * q) { geometric = false; break; }
        }
        if (geometric) {
            grid.grading = Grading::geometric;
            grid.ratio = q;
            return grid;
        }
    }
    grid.grading = Grading::custom;
    grid.ratio = 0.0;
    return grid;
}

std::vector<double> cell_midpoint_radii(const RadialGrid& grid) {
    std::vector<double> mid(grid.cells());
    for (int i = 0; i < grid.cells(); ++i)
        mid[i] = 0.5 * (grid.nodes[i] + grid.nodes[i + 1]);
    return mid;
}

double ratio_for_first_cell(double r_max, int cells, double first_cell) {
    if (!(first_cell > 0.0) || !(r_max > 0.0) || cells < 2)
        throw std::invalid_argument("ratio_for_first_cell: bad arguments");
    const double uniform = r_max / cells;
    if (first_cell >= uniform) return 1.0;
    // Solve first_cell * (q^cells - 1)/(q - 1) = r_max for q by bisection.
    double lo = 1.0, hi = 2.0;
    const auto total = [&](double q) {
        return first_cell * std::expm1(cells * std::log(q)) / (q - 1.0);
    };
    while (total(hi) < r_max) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double q = 0.5 * (lo + hi);
        if (q == lo || q == hi) break;
        (total(q) < r_max ? lo : hi) = q;
    }
    return 0.5 * (lo + hi);
}

} // namespace twvort
