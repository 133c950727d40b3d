#pragma once

#include <vector>

namespace twvort {

enum class Grading {
    uniform,
    geometric,  // cell widths grow by a fixed ratio away from the origin
    custom,     // loaded from a file; widths carry no structure
};

const char* to_string(Grading grading);

// Truncated radial mesh r_0 = 0 < r_1 < ... < r_K = r_max. Node values carry
// the fields; all 1/r and 1/r^2 factors of the energy are evaluated at cell
// midpoints, never at r = 0. Immutable after construction.
struct RadialGrid {
    std::vector<double> nodes;        // size cells()+1
    std::vector<double> cell_widths;  // h_i = r_{i+1} - r_i
    double r_max = 0.0;
    Grading grading = Grading::uniform;
    double ratio = 1.0;  // h_{i+1}/h_i for geometric grading

    int cells() const { return static_cast<int>(cell_widths.size()); }
    int node_count() const { return static_cast<int>(nodes.size()); }

    // Builds a grid from raw nodes (strictly increasing, first node 0) and
    // classifies the grading. Throws std::invalid_argument on bad input.
    static RadialGrid from_nodes(std::vector<double> nodes);
};

// Uniform: h_i = r_max/cells. Geometric: widths h_0 * ratio^i normalized so
// they sum to r_max; ratio > 1 clusters nodes near the origin (smallest cell
// first). Requires r_max > 0, cells >= 8, ratio > 0.
RadialGrid build_grid(double r_max, int cells, Grading grading, double ratio = 1.0);

// Midpoint radii (r_i + r_{i+1})/2, one per cell.
std::vector<double> cell_midpoint_radii(const RadialGrid& grid);

// Ratio for build_grid(geometric) that makes the first cell approximately
// `first_cell` wide. Returns 1 (uniform) when first_cell >= r_max/cells.
double ratio_for_first_cell(double r_max, int cells, double first_cell);

} // namespace twvort
