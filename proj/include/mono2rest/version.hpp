// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace mono2rest {

inline constexpr const char* tool_name = "mono2rest";
inline constexpr const char* tool_version = "0.1.0";

} // namespace mono2rest
