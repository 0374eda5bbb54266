#pragma once

namespace hb {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace hb
