#pragma once

namespace nhbath {
inline constexpr const char* kVersion = "0.1.0";
}
