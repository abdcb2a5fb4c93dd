#pragma once

#include <cmath>

namespace bqpe {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduce an angle to the canonical interval [0, 2*pi).
inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;  // fmod rounding can land exactly on 2*pi
  return a + 0.0;            // normalize -0.0
}

/// Shortest angular distance between a and b, in [0, pi].
inline double circular_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return d > kPi ? kTwoPi - d : d;
}

}  // namespace bqpe
