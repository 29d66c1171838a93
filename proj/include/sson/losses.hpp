#pragma once

#include "sson/bb.hpp"
#include "sson/matrix.hpp"

#include <memory>
#include <string>
#include <utility>

namespace sson {

/// Outcome of one proximal theta-update.
struct ThetaUpdate {
  Mat theta;
  bool converged = true;
  int inner_iterations = 0;
};

/// Binds a statistical loss G(X, Theta) to its objective evaluation and its
/// theta-update, argmin G(X, Theta) + gamma/2*||Theta - B0||_F^2 over the
/// loss domain. Implementations are read-only after construction.
class LossProblem {
 public:
  virtual ~LossProblem() = default;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual double objective(const Mat& theta) const = 0;
  virtual ThetaUpdate theta_update(const Mat& b0, double gamma, const Mat& warm) const = 0;
};

/// tr(Sigma_hat*Theta) - log det Theta. The update is
/// 1/2*U*(D + sqrt(D^2 + 4/gamma*I))*U^T where U D U^T eigendecomposes
/// B0 - Sigma_hat/gamma; the result is symmetric positive definite.
Mat gaussian_theta_update(const SymMatrix& sigma_hat, const SymMatrix& b0, double gamma);

/// 1/2*||Theta - Sigma_hat||_F^2 over the PSD cone: PSD projection of
/// (Sigma_hat + gamma*B0)/(1 + gamma).
SymMatrix covariance_theta_update(const SymMatrix& sigma_hat, const SymMatrix& b0,
                                  double gamma);

/// Convex negative log-pseudo-likelihood of the binary pairwise model,
///   -sum_{j,j'} theta_{jj'} (X^T X)_{jj'}
///   + sum_i sum_j log(1 + exp(theta_jj + sum_{j'!=j} theta_{jj'} x_{ij'})),
/// and its gradient in the symmetric matrix space (off-diagonal entries
/// accumulate both logistic regressions sharing the parameter).
std::pair<double, SymMatrix> ising_objective_and_gradient(const Mat& x,
                                                          const SymMatrix& theta);

/// Minimizes the Ising composite (negative pseudo-likelihood plus
/// gamma/2*||Theta - B0||^2) by the non-monotone BB method, warm-started.
ThetaUpdate ising_theta_update(const Mat& x, const Mat& b0, double gamma,
                               const BbOptions& opts, const Mat& warm);

/// Least squares 1/2*||Y - X*Theta||_F^2 ridge-coupled to B0: solves the SPD
/// normal equations (X^T X + gamma*I) Theta = X^T Y + gamma*B0.
Mat var_theta_update(const Mat& y, const Mat& x, const Mat& b0, double gamma);

class GaussianLoss final : public LossProblem {
 public:
  explicit GaussianLoss(SymMatrix sigma_hat) : sigma_hat_(std::move(sigma_hat)) {}
  int dim() const override { return sigma_hat_.dim(); }
  std::string name() const override { return "gaussian"; }
  double objective(const Mat& theta) const override;
  ThetaUpdate theta_update(const Mat& b0, double gamma, const Mat& warm) const override;
  const SymMatrix& sigma_hat() const { return sigma_hat_; }

 private:
  SymMatrix sigma_hat_;
};

class CovarianceLoss final : public LossProblem {
 public:
  explicit CovarianceLoss(SymMatrix sigma_hat) : sigma_hat_(std::move(sigma_hat)) {}
  int dim() const override { return sigma_hat_.dim(); }
  std::string name() const override { return "covariance"; }
  double objective(const Mat& theta) const override;
  ThetaUpdate theta_update(const Mat& b0, double gamma, const Mat& warm) const override;

 private:
  SymMatrix sigma_hat_;
};

class IsingLoss final : public LossProblem {
 public:
  IsingLoss(Mat x, BbOptions bb);
  int dim() const override { return static_cast<int>(x_.cols()); }
  std::string name() const override { return "ising"; }
  double objective(const Mat& theta) const override;
  ThetaUpdate theta_update(const Mat& b0, double gamma, const Mat& warm) const override;

 private:
  Mat x_;
  BbOptions bb_;
};

/// Stacked regression loss for square transition matrices (Y, X with the
/// same column count), 1/2*||Y - X*Theta||_F^2. The solver's iterates live in
/// the symmetric subspace, so the update solves the symmetric-constrained
/// normal equations A*Theta + Theta*A + 2*gamma*Theta = 2*(sym(X^T Y)
/// + gamma*B0) with A = X^T X, via A's cached eigenbasis.
class VarLoss final : public LossProblem {
 public:
  VarLoss(Mat y, Mat x);
  int dim() const override { return static_cast<int>(x_.cols()); }
  std::string name() const override { return "var"; }
  double objective(const Mat& theta) const override;
  ThetaUpdate theta_update(const Mat& b0, double gamma, const Mat& warm) const override;

 private:
  Mat y_;
  Mat x_;
  EigenResult xtx_eig_;
  Mat sym_xty_;
};

}  // namespace sson
