#pragma once

namespace nlv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nlv
