#pragma once

namespace twvort {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSummarySchemaVersion = 1;

} // namespace twvort
