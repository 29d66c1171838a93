#include "sson/shrinkage.hpp"

#include "sson/eigen_sym.hpp"

#include <cmath>

namespace sson {

Mat soft_threshold(const Mat& m, double b) {
  if (b < 0.0 || !std::isfinite(b)) {
    throw std::invalid_argument("soft_threshold: threshold must be finite and >= 0");
  }
  Mat out(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double a = m(i, j);
      const double mag = std::abs(a) - b;
      out(i, j) = mag > 0.0 ? (a > 0.0 ? mag : -mag) : 0.0;
    }
  }
  return out;
}

Mat group_soft_threshold(const Mat& c, double b_inner, double b_group) {
  if (b_group < 0.0 || !std::isfinite(b_group)) {
    throw std::invalid_argument("group_soft_threshold: b_group must be finite and >= 0");
  }
  Mat shrunk = soft_threshold(c, b_inner);
  const double norm = shrunk.norm();
  if (norm <= b_group) {
    return Mat::Zero(c.rows(), c.cols());
  }
  return (1.0 - b_group / norm) * shrunk;
}

Mat off_diag(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("off_diag: input is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected square");
  }
  Mat out = m;
  out.diagonal().setZero();
  return out;
}

SymMatrix psd_project(const SymMatrix& v) {
  const EigenResult eig = sym_eigen(v);
  const Vec clipped = eig.eigenvalues.cwiseMax(0.0);
  return SymMatrix::from_symmetric_part(eig.eigenvectors * clipped.asDiagonal() *
                                        eig.eigenvectors.transpose());
}

}  // namespace sson
