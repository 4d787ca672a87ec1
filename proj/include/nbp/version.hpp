#pragma once

namespace nbp {

inline constexpr const char* kVersion = "0.1.0";

}
