// version.hpp — library version reported by the command-line tool

#pragma once

namespace vnalg {
inline constexpr const char* version = "1.0.0";
}
