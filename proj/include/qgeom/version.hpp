#pragma once

namespace qgeom {
inline constexpr const char* version = "0.1.0";
}
