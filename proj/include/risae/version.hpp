#pragma once

namespace risae {

inline constexpr const char* kVersion = "0.1.0";

} // namespace risae
