#include "sson/vector_admm.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>

namespace sson {
namespace {

Vec soft_threshold_vec(const Vec& v, double b) {
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i)) - b;
    out(i) = mag > 0.0 ? (v(i) > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

Vec group_shrink_vec(const Vec& v, const VecPartition& part, double b_inner,
                     double b_group) {
  Vec out(v.size());
  for (const auto& [b0, b1] : part.blocks()) {
    Vec s = soft_threshold_vec(v.segment(b0, b1 - b0), b_inner);
    const double norm = s.norm();
    if (norm <= b_group) {
      out.segment(b0, b1 - b0).setZero();
    } else {
      out.segment(b0, b1 - b0) = (1.0 - b_group / norm) * s;
    }
  }
  return out;
}

}  // namespace

VecRunResult regression_solve(const Vec& y, const Mat& x, const VecSsonConfig& cfg,
                              const VecSolverOptions& opts) {
  const int p = static_cast<int>(x.cols());
  cfg.validate(p);
  if (y.size() != x.rows()) {
    throw std::invalid_argument("regression_solve: y has " + std::to_string(y.size()) +
                                " entries, X has " + std::to_string(x.rows()) + " rows");
  }
  require_finite(y, "regression_solve y");
  require_finite(x, "regression_solve X");
  const double gamma = std::isnan(opts.gamma) ? 2.0 * cfg.lambda_e : opts.gamma;
  if (!(gamma > 0.0) || gamma < std::sqrt(2.0) * cfg.lambda_e - 1e-12) {
    throw std::invalid_argument("regression_solve: gamma must satisfy gamma >= sqrt(2)*lambda_e");
  }
  if (!(opts.tau > 0.0) || opts.max_iter < 1) {
    throw std::invalid_argument("regression_solve: tau and max_iter must be positive");
  }

  const int n = cfg.n;
  const Eigen::LLT<Mat> ridge_solver(
      Mat(x.transpose() * x + gamma * Mat::Identity(p, p)));
  const Vec xty = x.transpose() * y;

  Vec theta = Vec::Ones(p);
  std::vector<Vec> z(n, Vec::Ones(p));
  Vec e = Vec::Ones(p);
  Vec lambda = Vec::Zero(p);

  const auto z_stack_sum = [&] {
    Vec s = Vec::Zero(p);
    for (const Vec& zi : z) s += zi;
    return s;
  };

  VecRunResult out;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 1; k <= opts.max_iter; ++k) {
    const Vec theta_prev = theta;

    const Vec b0 = z_stack_sum() + e + lambda / gamma;
    theta = ridge_solver.solve(xty + gamma * b0);

    for (int i = 0; i < n; ++i) {
      Vec others = e + lambda / gamma;
      for (int j = 0; j < n; ++j) {
        if (j != i) others += z[j];
      }
      const Vec bi = theta - others;
      if (i == 0) {
        z[i] = soft_threshold_vec(bi, cfg.lambda[0] / gamma);
      } else {
        z[i] = group_shrink_vec(bi, cfg.partitions[i], cfg.lambda_hat[i] / gamma,
                                cfg.lambda[i] / gamma);
      }
    }

    const Vec b_e = theta - (z_stack_sum() + lambda / gamma);
    e = gamma / (gamma + cfg.lambda_e) * b_e;

    const Vec residual = theta - z_stack_sum() - e;
    lambda -= gamma * residual;

    VecIterateReport rep;
    rep.k = k;
    rep.primal_residual = residual.norm();
    rep.stop_stat =
        (theta - theta_prev).squaredNorm() / std::max(1.0, theta_prev.squaredNorm());
    rep.dual_gap = (lambda + cfg.lambda_e * e).norm();
    {
      VecDecomposition d;
      d.z = z;
      d.e = e;
      rep.objective = 0.5 * (y - x * theta).squaredNorm() + evaluate_omega_vec(cfg, d);
    }
    out.trace.push_back(rep);
    out.iterations = k;
    if (rep.stop_stat <= opts.tau) {
      out.converged = true;
      break;
    }
    const double wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    if (wall_ms > opts.wall_budget_ms) {
      out.warning = "wall-clock budget exhausted at k=" + std::to_string(k);
      break;
    }
  }
  if (!out.converged && out.warning.empty()) {
    out.warning = "not converged within " + std::to_string(opts.max_iter) + " iterations";
  }
  out.decomposition.z = std::move(z);
  out.decomposition.e = std::move(e);
  out.theta = std::move(theta);
  return out;
}

}  // namespace sson
