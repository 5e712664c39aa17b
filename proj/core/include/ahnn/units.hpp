#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ratio>

namespace ahnn {

// Simulated time is kept as an integer count of femtoseconds so that long
// runs of nanosecond samples accumulate without rounding drift.
using Femtoseconds = std::chrono::duration<std::int64_t, std::femto>;

inline Femtoseconds to_femtoseconds(double seconds) {
  return Femtoseconds{static_cast<std::int64_t>(std::llround(seconds * 1e15))};
}

inline double to_seconds(Femtoseconds t) {
  return static_cast<double>(t.count()) / 1e15;
}

}  // namespace ahnn
