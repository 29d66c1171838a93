#pragma once

#include "sson/matrix.hpp"
#include "sson/sson_norm.hpp"

#include <limits>
#include <string>
#include <vector>

namespace sson {

struct VecSolverOptions {
  double gamma = std::numeric_limits<double>::quiet_NaN();  // default 2*lambda_e
  double tau = 1e-5;
  int max_iter = 1000;
  double wall_budget_ms = std::numeric_limits<double>::infinity();
};

struct VecIterateReport {
  int k = 0;
  double objective = 0.0;  // loss + omega at the current split
  double primal_residual = 0.0;
  double stop_stat = 0.0;
  double dual_gap = 0.0;
};

struct VecRunResult {
  VecDecomposition decomposition;
  Vec theta;
  std::vector<VecIterateReport> trace;
  bool converged = false;
  int iterations = 0;
  std::string warning;
};

/// Multi-block ADMM for 1/2*||y - X*theta||_2^2 + omega(z_1..z_n, e) under
/// theta = sum_i z_i + e. The coupling is already separable per block, so
/// each z-subproblem is solved exactly: soft threshold for z_1, blockwise
/// sparse-group shrinkage for z_2..z_n, ridge scaling for e.
VecRunResult regression_solve(const Vec& y, const Mat& x, const VecSsonConfig& cfg,
                              const VecSolverOptions& opts = {});

}  // namespace sson
