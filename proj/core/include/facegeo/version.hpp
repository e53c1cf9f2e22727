#pragma once

namespace facegeo {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever a JSON/CSV/mesh output layout changes.
inline constexpr const char* kFormatVersion = "1";

}  // namespace facegeo
