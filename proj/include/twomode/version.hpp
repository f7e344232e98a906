#pragma once

namespace twomode {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace twomode
