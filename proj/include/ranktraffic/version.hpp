#pragma once

namespace ranktraffic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ranktraffic
