#pragma once

#include <string_view>

namespace speclab {

inline constexpr std::string_view kToolName = "speclab";
inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace speclab
