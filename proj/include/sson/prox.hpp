#pragma once

#include "sson/matrix.hpp"

namespace sson {

/// Linearization data for one Z-block subproblem: the point
/// C_i = Z_i^k - (1/rho) * gradient_h(Z_i^k, B_i) plus the step constants.
struct LinearizedTarget {
  Mat C;
  double rho = 4.0;
  double gamma = 1.0;
};

/// Gradient of H(Z) = 1/2*||Z + Z^T - B||_F^2 (the gamma factor is carried
/// outside): 2(Z + Z^T) - (B + B^T). Lipschitz constant 4.
Mat gradient_h(const Mat& z, const Mat& b);

/// Z^k - (1/rho) * gradient_h(Z^k, B).
Mat linearized_point(const Mat& z_k, const Mat& b, double rho);

/// Sparse component update: element-wise soft threshold at lambda1/(rho*gamma)
/// on the off-diagonal; diagonal entries are unpenalized and take C's values.
Mat update_z1(const LinearizedTarget& t, double lambda1);

/// Structured component update: independent sparse-group shrinkage of each
/// partition block with b_inner = lambda_hat/(rho*gamma) and
/// b_group = lambda_i/(rho*gamma). Diagonal entries are unpenalized: they are
/// masked out of the shrinkage and group norm, and take C's values.
Mat update_zi(const LinearizedTarget& t, const BlockPartition& part,
              double lambda_hat, double lambda_i);

/// Ridge update E = gamma/(gamma + lambda_e) * B_{n+1}.
SymMatrix update_e(const SymMatrix& b_next, double lambda_e, double gamma);

/// Proximal map of lambda*tr(Z) + indicator(Z psd):
/// U * max(D - lambda/gamma, 0) * U^T for C = U D U^T. Result is PSD.
SymMatrix prox_trace_psd(const SymMatrix& c, double lambda_np1, double gamma);

}  // namespace sson
