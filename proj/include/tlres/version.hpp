#pragma once

namespace tlres {

inline constexpr const char* library_version = "1.0.0";
inline constexpr const char* config_schema = "tlres-config/1";
inline constexpr const char* results_schema = "tlres-results/1";

} // namespace tlres
