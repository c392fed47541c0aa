#pragma once

namespace llp {
inline constexpr const char* kVersion = "0.1.0";
}
