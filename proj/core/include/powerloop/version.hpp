#pragma once

namespace powerloop {

inline constexpr const char* kVersion = "0.1.0";

} // namespace powerloop
