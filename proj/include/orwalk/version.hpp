#pragma once

namespace orwalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace orwalk
