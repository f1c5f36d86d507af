#pragma once

#include <numbers>

namespace optomech {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// SI, exact by definition.
inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
// CODATA 2018.
inline constexpr double kHbar = 1.054571817e-34;  // J s

}  // namespace optomech
