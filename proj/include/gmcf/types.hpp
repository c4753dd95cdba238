#pragma once

#include <Eigen/Core>

namespace gmcf {

/// Ambient space is R^{n+1} with n in {1, 2}, so every small vector fits in 3.
inline constexpr int kMaxAmbientDim = 3;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxAmbientDim, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, 0,
                          kMaxAmbientDim, kMaxAmbientDim>;

using Vecd = Vec<double>;
using Matd = Mat<double>;
using Index = Eigen::Index;

}  // namespace gmcf
