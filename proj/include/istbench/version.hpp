#pragma once

namespace istbench {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace istbench
