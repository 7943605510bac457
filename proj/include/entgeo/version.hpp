#pragma once

namespace entgeo {
inline constexpr const char* kToolkitVersion = "0.1.0";
}
