#pragma once

namespace unclab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace unclab
