#pragma once

namespace pushsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pushsim
