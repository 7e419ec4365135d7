#pragma once

#include <numbers>

namespace casimir {

/// Physical constants used throughout the library. Fixed values so that
/// outputs are bit-reproducible across builds.
namespace constants {

inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double speed_of_light = 2.99792458e8; // m / s
inline constexpr double hbar_c = hbar * speed_of_light; // J m
inline constexpr double pi = std::numbers::pi;

inline constexpr const char* version_tag = "hbar=1.054571817e-34;c=2.99792458e8";

} // namespace constants

} // namespace casimir
