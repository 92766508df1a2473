#pragma once

namespace stbcsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stbcsim
