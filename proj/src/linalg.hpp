#pragma once

// Thin deterministic wrappers around Eigen for the two dense problems the
// library needs: minimum-norm least squares and the extremal eigenpair of a
// small symmetric matrix. Eigen stays out of the public headers.

#include "stargaze/error.hpp"

#include <Eigen/Dense>

#include <vector>

namespace stargaze::linalg {

struct LstSqResult {
  std::vector<double> coeffs;
  int rank = 0;
  bool rank_deficient = false;
};

/// Minimum-norm least squares via SVD; singular values below
/// rtol * sigma_max are treated as zero.
inline LstSqResult lstsq_min_norm(const Eigen::MatrixXd& A,
                                  const Eigen::VectorXd& b,
                                  double rtol = 1e-10) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv[0] > 0.0))
    raise(errc::numerical_failure, "least squares: zero design matrix");
  const double cutoff = rtol * sv[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++rank;
  Eigen::VectorXd d = svd.matrixU().transpose() * b;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    d[i] = i < rank ? d[i] / sv[i] : 0.0;
  Eigen::VectorXd x = svd.matrixV() * d;
  LstSqResult out;
  out.coeffs.assign(x.data(), x.data() + x.size());
  out.rank = rank;
  out.rank_deficient = rank < A.cols();
  return out;
}

struct SymEigen {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors; // columns match values
};

/// Full eigendecomposition of a symmetric matrix (deterministic).
inline SymEigen sym_eigen(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
  if (solver.info() != Eigen::Success)
    raise(errc::eigen_failure, "symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

} // namespace stargaze::linalg
