#pragma once

namespace pwcmm {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pwcmm
