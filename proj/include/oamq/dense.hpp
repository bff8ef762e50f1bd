#pragma once

// Dense d x d falsifier path. The production code never inverts matrices;
// it uses the closed Sherman-Morrison trace for a*I - b*J. The dense route
// exists solely to falsify that algebra and is capped in dimension.

#include <Eigen/Dense>

#include "oamq/errors.hpp"

namespace oamq {

inline constexpr int kDenseDimCap = 512;

// Materialize a*I - b*J (J = all ones).
inline Eigen::MatrixXd dense_structured_matrix(double a, double b, int dim) {
  if (dim < 1) throw InvalidParameterError("matrix dimension must be >= 1");
  if (dim > kDenseDimCap) {
    throw InvalidParameterError("dense path capped at dimension 512");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(dim, dim, -b);
  m.diagonal().array() += a;
  return m;
}

inline double trace_inverse_dense(const Eigen::MatrixXd& m) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
  if (ldlt.info() != Eigen::Success ||
      (ldlt.vectorD().array() <= 0.0).any()) {
    throw SingularMatrixError("dense matrix is not positive definite");
  }
  return ldlt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols())).trace();
}

}  // namespace oamq
