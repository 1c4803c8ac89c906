#pragma once

namespace tailfit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tailfit
