#pragma once

namespace corrosim {

inline constexpr const char* version = "0.1.0";

} // namespace corrosim
