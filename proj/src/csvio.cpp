#include "twvort/csvio.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace twvort {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_profile_csv(const std::string& path, const RadialGrid& grid,
                       const FieldConfiguration& c) {
    if (!c.matches(grid))
        throw std::invalid_argument("write_profile_csv: configuration does not match grid");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write profile CSV: " + path);
    out << "r,a,b,f,g\n";
    for (int i = 0; i < grid.node_count(); ++i) {
        out << format_g17(grid.nodes[i]) << ',' << format_g17(c.a[i]) << ','
            << format_g17(c.b[i]) << ',' << format_g17(c.f[i]) << ','
            << format_g17(c.g[i]) << '\n';
    }
    if (!out) throw std::runtime_error("short write on profile CSV: " + path);
}

std::pair<RadialGrid, FieldConfiguration> read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("r,a,b,f,g", 0) != 0)
        throw std::runtime_error("profile CSV missing 'r,a,b,f,g' header: " + path);

    std::vector<double> r;
    FieldConfiguration c;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        double values[5];
        std::string cell;
        for (int k = 0; k < 5; ++k) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("profile CSV line " + std::to_string(lineno) +
                                         ": expected 5 columns");
            char* end = nullptr;
            values[k] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw std::runtime_error("profile CSV line " + std::to_string(lineno) +
                                         ": bad number '" + cell + "'");
        }
        r.push_back(values[0]);
        c.a.push_back(values[1]);
        c.b.push_back(values[2]);
        c.f.push_back(values[3]);
        c.g.push_back(values[4]);
    }
    RadialGrid grid = RadialGrid::from_nodes(std::move(r));
    return {std::move(grid), std::move(c)};
}

void write_history_csv(const std::string& path, const std::vector<HistorySample>& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write history CSV: " + path);
    out << "iteration,energy,grad_inf_norm\n";
    for (const auto& h : history)
        out << h.iteration << ',' << format_g17(h.energy) << ','
            << format_g17(h.grad_inf_norm) << '\n';
}

} // namespace twvort
