#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace sphereosc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Two Cartesian components of a vector operator on the tangent plane.
using OperatorPair = std::array<ComplexMatrix, 2>;

inline constexpr Complex kI{0.0, 1.0};

}  // namespace sphereosc
