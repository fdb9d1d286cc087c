#pragma once

namespace ppbf {
inline constexpr const char* kVersion = "0.1.0";
}
