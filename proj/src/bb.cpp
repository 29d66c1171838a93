#include "sson/bb.hpp"

#include <cmath>

namespace sson {

void BbOptions::validate() const {
  if (warmup < 0 || !(sigma > 0.0) || !(shrink > 0.0 && shrink < 1.0) ||
      !(tol > 0.0) || !(eta0 > 0.0) || max_iter < 1) {
    throw std::invalid_argument("BbOptions: need warmup >= 0, sigma > 0, "
                                "shrink in (0,1), tol > 0, eta0 > 0, max_iter >= 1");
  }
}

BbResult bb_solve(const BbProblem& problem, const BbOptions& opts, const Mat& theta0) {
  opts.validate();
  Mat theta = theta0;
  Mat grad = problem.gradient(theta);
  double value = problem.value(theta);
  double alpha = 1.0;

  BbResult result;
  for (int t = 1; t <= opts.max_iter; ++t) {
    const Mat direction = -alpha * grad;
    double rho = 1.0;
    double trial_value = 0.0;
    bool have_trial_value = false;
    if (t > opts.warmup) {
      const double dir_sq = direction.squaredNorm();
      const double eta = opts.eta0 / (static_cast<double>(t) * t);
      for (int backtrack = 0; backtrack < 60; ++backtrack) {
        trial_value = problem.value(theta + rho * direction);
        have_trial_value = true;
        const double bound =
            value + eta - opts.sigma * rho * rho * alpha * alpha * dir_sq;
        if (trial_value <= bound) break;
        rho *= opts.shrink;
        have_trial_value = false;
      }
    }
    const Mat theta_next = theta + rho * direction;
    const Mat grad_next = problem.gradient(theta_next);

    const Mat d_theta = theta - theta_next;
    const Mat d_grad = grad - grad_next;
    const double denom = (d_grad.array() * d_theta.array()).sum();
    alpha = denom > 0.0 ? d_theta.squaredNorm() / denom : 1.0;
    if (!std::isfinite(alpha)) alpha = 1.0;

    const double change = d_theta.squaredNorm() / std::max(1.0, theta.squaredNorm());
    theta = theta_next;
    grad = grad_next;
    value = have_trial_value ? trial_value : problem.value(theta);
    result.iterations = t;
    if (change <= opts.tol) {
      result.converged = true;
      break;
    }
  }
  result.theta = std::move(theta);
  result.objective = value;
  return result;
}

}  // namespace sson
