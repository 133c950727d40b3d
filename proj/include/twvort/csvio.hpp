#pragma once

#include "twvort/fields.hpp"
#include "twvort/mesh.hpp"
#include "twvort/minimizer.hpp"

#include <string>
#include <utility>
#include <vector>

namespace twvort {

// Profile CSV: header "r,a,b,f,g", one row per node, 17 significant digits
// (lossless double round-trip). Byte-identical for identical inputs.
void write_profile_csv(const std::string& path, const RadialGrid& grid,
                       const FieldConfiguration& c);

std::pair<RadialGrid, FieldConfiguration> read_profile_csv(const std::string& path);

// History CSV: header "iteration,energy,grad_inf_norm".
void write_history_csv(const std::string& path, const std::vector<HistorySample>& history);

// 17-significant-digit decimal form of a double (round-trips exactly).
std::string format_g17(double v);

} // namespace twvort
