#pragma once

namespace xsc {

inline constexpr const char* version = "0.1.0";

} // namespace xsc
