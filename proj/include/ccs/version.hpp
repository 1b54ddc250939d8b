#pragma once

namespace ccs {

inline constexpr const char* kArtifactName = "spillover-forge";
inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace ccs
