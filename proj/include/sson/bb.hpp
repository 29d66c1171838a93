#pragma once

#include "sson/matrix.hpp"

#include <functional>

namespace sson {

/// Controls for the non-monotone Barzilai-Borwein solver. eta_t = eta0 / t^2
/// is summable; steps during the first `warmup` iterations are accepted
/// without a line search.
struct BbOptions {
  int warmup = 10;      // t0
  double sigma = 1e-4;  // sufficient-decrease constant
  double shrink = 0.5;  // nu, in (0,1)
  double tol = 1e-8;    // squared relative-change stopping threshold
  double eta0 = 1.0;
  int max_iter = 500;

  void validate() const;
};

struct BbProblem {
  std::function<double(const Mat&)> value;
  std::function<Mat(const Mat&)> gradient;
};

struct BbResult {
  Mat theta;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
};

/// Spectral gradient descent with non-monotone backtracking: steps
/// theta + rho*G with G = -alpha*grad, accepting when
///   value(trial) <= value(theta) + eta_t - sigma*rho^2*alpha^2*||G||^2
/// once past the warm-up, and BB steplength
/// alpha = <dTheta, dTheta>/<dGrad, dTheta> (falling back to 1 when the
/// denominator is nonpositive). Stops on the squared relative-change
/// criterion or the iteration cap (flagged non-converged).
BbResult bb_solve(const BbProblem& problem, const BbOptions& opts, const Mat& theta0);

}  // namespace sson
