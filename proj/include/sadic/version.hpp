#pragma once

namespace sadic {
inline constexpr const char* kVersion = "0.1.0";
}
