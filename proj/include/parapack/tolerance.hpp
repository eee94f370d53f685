#pragma once

#include <atomic>
#include <cstdlib>
#include <string>

namespace parapack {

inline constexpr double kDefaultTolerance = 1e-9;

namespace detail {

inline double tolerance_from_env() {
  if (const char* env = std::getenv("PARAPACK_TOLERANCE")) {
    try {
      const double value = std::stod(env);
      if (value > 0.0) return value;
    } catch (...) {
    }
  }
  return kDefaultTolerance;
}

inline std::atomic<double>& tolerance_storage() {
  static std::atomic<double> value{tolerance_from_env()};
  return value;
}

}  // namespace detail

/// Absolute tolerance used by geometric predicates (packing validity, symmetry
/// checks, coplanar merging, rank detection). Initialised from the
/// PARAPACK_TOLERANCE environment variable, 1e-9 otherwise.
inline double tolerance() { return detail::tolerance_storage().load(std::memory_order_relaxed); }

inline void set_tolerance(double value) {
  detail::tolerance_storage().store(value, std::memory_order_relaxed);
}

}  // namespace parapack
