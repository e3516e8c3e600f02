#pragma once

namespace citegraph {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace citegraph
