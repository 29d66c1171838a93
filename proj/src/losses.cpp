#include "sson/losses.hpp"

#include "sson/eigen_sym.hpp"
#include "sson/shrinkage.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

namespace sson {
namespace {

// log(1 + exp(v)) without overflow.
double log1pexp(double v) {
  return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v)));
}

double logistic(double v) {
  if (v >= 0.0) {
    const double e = std::exp(-v);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(v);
  return e / (1.0 + e);
}

void check_binary(const Mat& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (x(i, j) != 0.0 && x(i, j) != 1.0) {
        throw std::invalid_argument("ising: data must be binary {0,1}, found " +
                                    std::to_string(x(i, j)));
      }
    }
  }
}

// eta(i,j) = theta_jj + sum_{j'!=j} theta_{jj'} x_{ij'}
Mat conditional_fields(const Mat& x, const Mat& theta) {
  Mat eta = x * theta.transpose();
  for (Eigen::Index j = 0; j < theta.rows(); ++j) {
    const double tjj = theta(j, j);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      eta(i, j) += tjj * (1.0 - x(i, j));
    }
  }
  return eta;
}

}  // namespace

Mat gaussian_theta_update(const SymMatrix& sigma_hat, const SymMatrix& b0, double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("gaussian_theta_update: gamma must be > 0");
  }
  const Mat target = b0.mat() - sigma_hat.mat() / gamma;
  const EigenResult eig = sym_eigen(SymMatrix::from_symmetric_part(target));
  Vec vals(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double d = eig.eigenvalues(i);
    vals(i) = 0.5 * (d + std::sqrt(d * d + 4.0 / gamma));
  }
  const Mat theta = eig.eigenvectors * vals.asDiagonal() * eig.eigenvectors.transpose();
  return 0.5 * (theta + theta.transpose());
}

SymMatrix covariance_theta_update(const SymMatrix& sigma_hat, const SymMatrix& b0,
                                  double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("covariance_theta_update: gamma must be > 0");
  }
  const Mat v = (sigma_hat.mat() + gamma * b0.mat()) / (1.0 + gamma);
  return psd_project(SymMatrix::from_symmetric_part(v));
}

std::pair<double, SymMatrix> ising_objective_and_gradient(const Mat& x,
                                                          const SymMatrix& theta) {
  check_binary(x);
  if (x.cols() != theta.dim()) {
    throw std::invalid_argument("ising: data has " + std::to_string(x.cols()) +
                                " columns, theta dim is " + std::to_string(theta.dim()));
  }
  const Mat a = x.transpose() * x;
  const Mat eta = conditional_fields(x, theta.mat());

  double value = -(theta.mat().array() * a.array()).sum();
  Mat p(eta.rows(), eta.cols());
  for (Eigen::Index j = 0; j < eta.cols(); ++j) {
    for (Eigen::Index i = 0; i < eta.rows(); ++i) {
      value += log1pexp(eta(i, j));
      p(i, j) = logistic(eta(i, j));
    }
  }

  Mat grad = p.transpose() * x - a;
  for (Eigen::Index j = 0; j < grad.rows(); ++j) {
    grad(j, j) = p.col(j).sum() - a(j, j);
  }
  return {value, SymMatrix::from_symmetric_part(grad)};
}

ThetaUpdate ising_theta_update(const Mat& x, const Mat& b0, double gamma,
                               const BbOptions& opts, const Mat& warm) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("ising_theta_update: gamma must be > 0");
  }
  const SymMatrix b0_sym = SymMatrix::from_symmetric_part(b0);
  BbProblem composite;
  composite.value = [&x, &b0_sym, gamma](const Mat& theta) {
    const auto [v, g] = ising_objective_and_gradient(x, SymMatrix::from_symmetric_part(theta));
    (void)g;
    return v + 0.5 * gamma * (theta - b0_sym.mat()).squaredNorm();
  };
  composite.gradient = [&x, &b0_sym, gamma](const Mat& theta) {
    const auto [v, g] = ising_objective_and_gradient(x, SymMatrix::from_symmetric_part(theta));
    (void)v;
    return Mat(g.mat() + gamma * (theta - b0_sym.mat()));
  };
  const BbResult res = bb_solve(composite, opts, 0.5 * (warm + warm.transpose()));
  ThetaUpdate out;
  out.theta = 0.5 * (res.theta + res.theta.transpose());
  out.converged = res.converged;
  out.inner_iterations = res.iterations;
  return out;
}

Mat var_theta_update(const Mat& y, const Mat& x, const Mat& b0, double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("var_theta_update: gamma must be > 0");
  }
  if (y.rows() != x.rows()) {
    throw std::invalid_argument("var_theta_update: Y and X row counts differ");
  }
  if (b0.rows() != x.cols() || b0.cols() != y.cols()) {
    throw std::invalid_argument("var_theta_update: B0 shape mismatch");
  }
  const Mat lhs = x.transpose() * x + gamma * Mat::Identity(x.cols(), x.cols());
  const Mat rhs = x.transpose() * y + gamma * b0;
  return Eigen::LLT<Mat>(lhs).solve(rhs);
}

double GaussianLoss::objective(const Mat& theta) const {
  const double trace_term = (sigma_hat_.mat().array() * theta.array()).sum();
  Eigen::LLT<Mat> llt(0.5 * (theta + theta.transpose()));
  if (llt.info() != Eigen::Success) {
    return std::numeric_limits<double>::infinity();  // outside the log-det domain
  }
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < theta.rows(); ++i) {
    logdet += 2.0 * std::log(llt.matrixL()(i, i));
  }
  return trace_term - logdet;
}

ThetaUpdate GaussianLoss::theta_update(const Mat& b0, double gamma, const Mat&) const {
  return {gaussian_theta_update(sigma_hat_, SymMatrix::from_symmetric_part(b0), gamma),
          true, 0};
}

double CovarianceLoss::objective(const Mat& theta) const {
  return 0.5 * (theta - sigma_hat_.mat()).squaredNorm();
}

ThetaUpdate CovarianceLoss::theta_update(const Mat& b0, double gamma, const Mat&) const {
  return {covariance_theta_update(sigma_hat_, SymMatrix::from_symmetric_part(b0), gamma)
              .mat(),
          true, 0};
}

IsingLoss::IsingLoss(Mat x, BbOptions bb) : x_(std::move(x)), bb_(bb) {
  check_binary(x_);
  bb_.validate();
}

double IsingLoss::objective(const Mat& theta) const {
  return ising_objective_and_gradient(x_, SymMatrix::from_symmetric_part(theta)).first;
}

ThetaUpdate IsingLoss::theta_update(const Mat& b0, double gamma, const Mat& warm) const {
  return ising_theta_update(x_, b0, gamma, bb_, warm);
}

VarLoss::VarLoss(Mat y, Mat x) : y_(std::move(y)), x_(std::move(x)) {
  if (y_.rows() != x_.rows()) {
    throw std::invalid_argument("VarLoss: Y and X row counts differ");
  }
  if (y_.cols() != x_.cols()) {
    throw std::invalid_argument("VarLoss: the solver estimates a square transition "
                                "matrix; Y and X must have the same column count");
  }
  require_finite(y_, "VarLoss Y");
  require_finite(x_, "VarLoss X");
  xtx_eig_ = sym_eigen(SymMatrix::from_symmetric_part(x_.transpose() * x_));
  const Mat xty = x_.transpose() * y_;
  sym_xty_ = 0.5 * (xty + xty.transpose());
}

double VarLoss::objective(const Mat& theta) const {
  return 0.5 * (y_ - x_ * theta).squaredNorm();
}

ThetaUpdate VarLoss::theta_update(const Mat& b0, double gamma, const Mat&) const {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("VarLoss: gamma must be > 0");
  }
  const Mat& v = xtx_eig_.eigenvectors;
  const Vec& d = xtx_eig_.eigenvalues;
  const Mat s = v.transpose() * (2.0 * (sym_xty_ + gamma * b0)) * v;
  Mat scaled(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      scaled(i, j) = s(i, j) / (d(i) + d(j) + 2.0 * gamma);
    }
  }
  const Mat theta = v * scaled * v.transpose();
  return {0.5 * (theta + theta.transpose()), true, 0};
}

}  // namespace sson
