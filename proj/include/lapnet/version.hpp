#pragma once

namespace lapnet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lapnet
