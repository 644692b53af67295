#pragma once

#include <Eigen/Dense>

#include <vector>

namespace polyfine {

// Vectors and small matrices live on the stack; the library does not go
// beyond kMaxDim dimensions.
inline constexpr int kMaxDim = 12;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxDim, kMaxDim>;
using PointList = std::vector<Vec>;

inline Vec zeros(int d) { return Vec::Zero(d); }

inline Vec unit(int d, int i) {
  Vec e = Vec::Zero(d);
  e(i) = 1.0;
  return e;
}

}  // namespace polyfine
