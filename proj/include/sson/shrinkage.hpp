#pragma once

#include "sson/matrix.hpp"

namespace sson {

/// Element-wise sign(a) * max(|a| - b, 0). Entries at or below the threshold
/// come out as exact 0.0 so downstream sparsity counts are well-defined.
Mat soft_threshold(const Mat& m, double b);

/// Sparse-group shrinkage of a block:
///   max(1 - b_group / ||Shrink(C, b_inner)||_F, 0) * Shrink(C, b_inner),
/// the closed-form minimizer of b_inner*||Z||_1 + b_group*||Z||_F
/// + 1/2*||Z - C||_F^2. Returns an exact zero block when the inner-shrunk
/// norm is at or below b_group.
Mat group_soft_threshold(const Mat& c, double b_inner, double b_group);

/// Copy of a square matrix with the diagonal zeroed.
Mat off_diag(const Mat& m);

/// Frobenius-nearest positive semidefinite matrix: eigenvectors kept,
/// negative eigenvalues clipped to zero.
SymMatrix psd_project(const SymMatrix& v);

}  // namespace sson
