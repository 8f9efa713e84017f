#pragma once

namespace causal_atlas {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace causal_atlas
