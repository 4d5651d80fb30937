#pragma once

namespace radcool {

inline constexpr const char* project_version = "0.1.0";

}  // namespace radcool
