#pragma once

namespace qmemc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace qmemc
