#pragma once

#include "sson/matrix.hpp"

namespace sson {

/// Full spectral decomposition M = U diag(d) U^T of a symmetric matrix.
/// Householder tridiagonalization followed by implicit-shift QL, bounded at
/// 30 sweeps per eigenvalue (30*p total); exceeding the bound raises
/// EigenFailure naming the matrix dimension. Eigenvalues are returned in
/// descending order and the result is deterministic for a fixed input.
EigenResult sym_eigen(const SymMatrix& m);

}  // namespace sson
