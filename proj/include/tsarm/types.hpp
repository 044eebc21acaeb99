#pragma once

#include <Eigen/Dense>

namespace tsarm {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Genotype = VectorX<double>;

}  // namespace tsarm
