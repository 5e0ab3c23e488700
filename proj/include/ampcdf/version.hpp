#pragma once

namespace ampcdf {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ampcdf
