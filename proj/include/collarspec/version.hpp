#pragma once

namespace collarspec {

inline constexpr const char* kVersion = "0.1.0";

} // namespace collarspec
