#pragma once

namespace kgflow {

inline constexpr const char *version = "0.1.0";

} // namespace kgflow
