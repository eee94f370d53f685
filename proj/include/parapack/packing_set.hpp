#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parapack/vec.hpp"

namespace parapack {

/// Finite set C of translation vectors. Whether C + K is a packing depends on
/// the body and is checked by validate().
template <int D>
struct PackingSet {
  static constexpr int dim = D;

  std::vector<Vec<D>> points;
  std::string label;

  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] bool empty() const { return points.empty(); }
};

/// Throws if two points coincide exactly.
template <int D>
void require_distinct(const PackingSet<D>& C) {
  for (std::size_t i = 0; i < C.size(); ++i) {
    for (std::size_t j = i + 1; j < C.size(); ++j) {
      if (C.points[i] == C.points[j]) {
        throw std::invalid_argument("packing set: points " + std::to_string(i) + " and " +
                                    std::to_string(j) + " coincide");
      }
    }
  }
}

}  // namespace parapack
