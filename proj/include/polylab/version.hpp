#pragma once

namespace polylab {

inline constexpr const char* kVersion = "0.1.0";

}
