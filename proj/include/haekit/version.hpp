#pragma once

namespace haekit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace haekit
