/// @file common.hpp
/// @brief Shared linear algebra aliases for the solver library.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace oseen {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using VectorXd = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

} // namespace oseen
