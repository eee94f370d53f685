#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parapack {

/// A body description violates the ConvexBody invariants.
class InvalidBody : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested (dimension, body) combination is not implemented.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two translates overlap: gauge distance of the pair is below 2.
class InvalidPacking : public std::runtime_error {
 public:
  InvalidPacking(std::size_t i, std::size_t j, double norm)
      : std::runtime_error("not a packing set: points " + std::to_string(i) + " and " +
                           std::to_string(j) + " have gauge distance " + std::to_string(norm) +
                           " < 2"),
        first(i),
        second(j),
        gauge_distance(norm) {}

  std::size_t first;
  std::size_t second;
  double gauge_distance;
};

class NotAPackingLattice : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed quantity contradicts a known theorem; signals bad caller input.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parapack
