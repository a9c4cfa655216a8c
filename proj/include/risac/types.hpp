#pragma once

#include <Eigen/Dense>
#include <complex>

namespace risac {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Unconjugated inner product a^T b (Eigen's dot() conjugates the left side).
inline Complex tdot(const CVec& a, const CVec& b) {
  return (a.transpose() * b).value();
}

}  // namespace risac
