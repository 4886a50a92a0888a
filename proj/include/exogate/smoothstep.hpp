#pragma once

namespace exogate {

// Cubic easing u^2 (3 - 2u), clamped to [0, 1] outside the unit interval.
constexpr double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * (3.0 - 2.0 * u);
}

// d/du of smoothstep; peaks at 1.5 for u = 0.5.
constexpr double smoothstep_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 6.0 * u * (1.0 - u);
}

inline constexpr double kSmoothstepMaxSlope = 1.5;

}  // namespace exogate
