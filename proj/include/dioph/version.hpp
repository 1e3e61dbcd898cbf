#pragma once

namespace dioph {

inline constexpr const char* version = "0.1.0";

}  // namespace dioph
