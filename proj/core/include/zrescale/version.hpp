#pragma once

namespace zrescale {

inline constexpr const char* kToolName = "zrescale";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace zrescale
