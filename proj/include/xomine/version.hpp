#pragma once

namespace xomine {

inline constexpr const char* kToolName = "xomine";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace xomine
