#pragma once

namespace leray {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace leray
