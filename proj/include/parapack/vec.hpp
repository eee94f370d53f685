#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace parapack {

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace parapack
