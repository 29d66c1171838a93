#include "sson/prox.hpp"

#include "sson/eigen_sym.hpp"
#include "sson/shrinkage.hpp"

#include <cmath>

namespace sson {
namespace {

void check_step(const LinearizedTarget& t) {
  if (!(t.rho > 0.0) || !(t.gamma > 0.0)) {
    throw std::invalid_argument("prox: rho and gamma must be > 0");
  }
}

}  // namespace

Mat gradient_h(const Mat& z, const Mat& b) {
  if (z.rows() != b.rows() || z.cols() != b.cols()) {
    throw std::invalid_argument("gradient_h: shape mismatch");
  }
  return 2.0 * (z + z.transpose()) - (b + b.transpose());
}

Mat linearized_point(const Mat& z_k, const Mat& b, double rho) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("linearized_point: rho must be > 0");
  }
  return z_k - gradient_h(z_k, b) / rho;
}

Mat update_z1(const LinearizedTarget& t, double lambda1) {
  check_step(t);
  if (lambda1 < 0.0) {
    throw std::invalid_argument("update_z1: lambda1 must be >= 0");
  }
  Mat out = soft_threshold(t.C, lambda1 / (t.rho * t.gamma));
  out.diagonal() = t.C.diagonal();  // diagonal is unpenalized
  return out;
}

Mat update_zi(const LinearizedTarget& t, const BlockPartition& part,
              double lambda_hat, double lambda_i) {
  check_step(t);
  if (lambda_hat < 0.0 || lambda_i < 0.0) {
    throw std::invalid_argument("update_zi: penalties must be >= 0");
  }
  if (t.C.rows() != part.dim() || t.C.cols() != part.dim()) {
    throw std::invalid_argument("update_zi: partition dim " + std::to_string(part.dim()) +
                                " does not match matrix dim " + std::to_string(t.C.rows()));
  }
  const double b_inner = lambda_hat / (t.rho * t.gamma);
  const double b_group = lambda_i / (t.rho * t.gamma);
  Mat out(part.dim(), part.dim());
  for (const IndexRect& rect : part.blocks()) {
    Mat block = t.C.block(rect.row0, rect.col0, rect.rows(), rect.cols());
    // Mask diagonal positions: they carry no penalty, so they drop out of the
    // shrinkage and the group norm, and are restored from C afterwards.
    for (int i = rect.row0; i < rect.row1; ++i) {
      if (i >= rect.col0 && i < rect.col1) {
        block(i - rect.row0, i - rect.col0) = 0.0;
      }
    }
    Mat shrunk = group_soft_threshold(block, b_inner, b_group);
    for (int i = rect.row0; i < rect.row1; ++i) {
      if (i >= rect.col0 && i < rect.col1) {
        shrunk(i - rect.row0, i - rect.col0) = t.C(i, i);
      }
    }
    out.block(rect.row0, rect.col0, rect.rows(), rect.cols()) = shrunk;
  }
  // A partition may leave diagonal cells uncovered.
  for (int i = 0; i < part.dim(); ++i) {
    bool covered = false;
    for (const IndexRect& rect : part.blocks()) {
      if (i >= rect.row0 && i < rect.row1 && i >= rect.col0 && i < rect.col1) {
        covered = true;
        break;
      }
    }
    if (!covered) out(i, i) = t.C(i, i);
  }
  return out;
}

SymMatrix update_e(const SymMatrix& b_next, double lambda_e, double gamma) {
  if (!(lambda_e > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("update_e: lambda_e and gamma must be > 0");
  }
  return SymMatrix::from_symmetric_part(gamma / (gamma + lambda_e) * b_next.mat());
}

SymMatrix prox_trace_psd(const SymMatrix& c, double lambda_np1, double gamma) {
  if (!(lambda_np1 > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("prox_trace_psd: lambda and gamma must be > 0");
  }
  const EigenResult eig = sym_eigen(c);
  const Vec shifted = (eig.eigenvalues.array() - lambda_np1 / gamma).cwiseMax(0.0);
  return SymMatrix::from_symmetric_part(eig.eigenvectors * shifted.asDiagonal() *
                                        eig.eigenvectors.transpose());
}

}  // namespace sson
