#pragma once

namespace eaqc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace eaqc
