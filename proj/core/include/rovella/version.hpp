#pragma once

namespace rovella {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rovella
