#pragma once

namespace dsql {

inline constexpr const char* k_toolkit_version = "1.0.0";

} // namespace dsql
