#pragma once

#include "risac/types.hpp"

namespace risac {

/// Column-major vectorization of a matrix.
inline CVec vec(const CMat& A) {
  return Eigen::Map<const CVec>(A.data(), A.size());
}

/// Inverse of vec(): reinterpret a vector as a rows-by-cols matrix.
inline CMat unvec(const CVec& x, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const CMat>(x.data(), rows, cols);
}

/// Dense Kronecker product, small operands only (tests, cross-checks).
inline CMat kron(const CMat& A, const CMat& B) {
  CMat out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

/// Block-diagonal replication I_copies (x) H without forming the identity.
inline CMat kron_identity(const CMat& H, int copies) {
  CMat out = CMat::Zero(H.rows() * copies, H.cols() * copies);
  for (int i = 0; i < copies; ++i)
    out.block(i * H.rows(), i * H.cols(), H.rows(), H.cols()) = H;
  return out;
}

/// z / |z|, with the zero-input convention of returning 1.
inline Complex unit_phase_of(Complex z) {
  double m = std::abs(z);
  return m > 0.0 ? z / m : Complex(1.0, 0.0);
}

}  // namespace risac
