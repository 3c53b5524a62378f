#pragma once

namespace vifrag {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace vifrag
