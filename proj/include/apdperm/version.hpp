#pragma once

namespace apdperm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace apdperm
