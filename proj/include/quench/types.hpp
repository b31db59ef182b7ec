#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace quench {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace quench
