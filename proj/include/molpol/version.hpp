#pragma once

namespace molpol {

inline constexpr const char *version = "0.1.0";

} // namespace molpol
