#pragma once

#include "sson/losses.hpp"
#include "sson/matrix.hpp"
#include "sson/sson_norm.hpp"

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sson {

enum class UpdateMode { kGaussSeidel, kJacobian };

/// Raised when strict monitoring detects an augmented-Lagrangian increase
/// (symptom of a rho/gamma misconfiguration).
struct MonitorViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  /// Augmented-Lagrangian penalty; defaults to 2*lambda_e and must satisfy
  /// gamma >= sqrt(2)*lambda_e.
  double gamma = std::numeric_limits<double>::quiet_NaN();
  /// Proximal damping of the linearized Z steps. Gauss-Seidel sweeps need
  /// rho > 4 for guaranteed descent; simultaneous (Jacobian) sweeps need
  /// roughly rho >= 2*(n+1) to stay stable.
  double rho = 4.0;
  double tau = 1e-5;
  int max_iter = 1000;
  UpdateMode mode = UpdateMode::kGaussSeidel;
  /// Abort on an augmented-Lagrangian increase instead of recording it.
  bool strict_monitor = false;
  double wall_budget_ms = std::numeric_limits<double>::infinity();
  /// Enables the trace-penalized PSD component Z_{n+1} (latent-variable
  /// models); the value is its trace penalty.
  std::optional<double> latent_lambda;
  /// Worker cap for Jacobian Z-block fan-out; 0 = auto (SSON_THREADS-capped).
  int threads = 1;
  /// When set, every iterate report is streamed as a CSV row.
  std::ostream* trace_stream = nullptr;

  double resolved_gamma(double lambda_e) const;
};

struct SolverState {
  Mat Theta;
  std::vector<Mat> Z;
  std::optional<Mat> Z_latent;
  Mat E;
  Mat Lambda;
  int k = 0;

  /// Algorithm start: Theta, every Z (and the latent block) and E at the
  /// identity, Lambda at zero.
  static SolverState initial(int p, int n, bool latent);
};

struct IterateReport {
  int k = 0;
  double L_gamma = 0.0;
  double primal_residual = 0.0;
  double stop_stat = 0.0;
  double stationarity_residual = 0.0;
  double dual_gap = 0.0;     // ||Lambda + lambda_e * E||_F
  double lambda_norm = 0.0;  // ||Lambda||_F
  double theta_step = 0.0;
  std::vector<double> z_steps;
  double latent_step = 0.0;
  double e_step = 0.0;
  double lambda_step = 0.0;
  double max_asymmetry = 0.0;
  double wall_ms = 0.0;
  bool inner_converged = true;
};

struct RunResult {
  Decomposition decomposition;
  SymMatrix theta;
  std::vector<IterateReport> trace;
  bool converged = false;
  int iterations = 0;
  std::string warning;
};

/// Linearized multi-block ADMM driver for
///   min G(X,Theta) + Omega(Z_1..Z_n, E)  s.t.  Theta = sum(Z_i + Z_i^T) + E
/// (latent mode inserts -Z_{n+1} into the constraint and adds its trace
/// penalty). Owns no data; the loss problem and config are borrowed.
class AdmmDriver {
 public:
  AdmmDriver(const LossProblem& problem, SsonConfig cfg, SolverOptions opts);

  /// Bookkeeping matrix for one update stage, read off the state as-is:
  ///   stage 0:      sum(Z+Z^T) [-Z_lat] + E + Lambda/gamma          (no Theta)
  ///   stage 1..n:   Theta - (sum_{j!=i}(Z_j+Z_j^T) [-Z_lat] + E + Lambda/gamma)
  ///   stage n+1:    Theta - (sum(Z+Z^T) [-Z_lat] + Lambda/gamma)    (no E)
  /// Gauss-Seidel vs Jacobian staging is realized by which state values are
  /// live when this is called.
  Mat compute_b(const SolverState& s, int stage) const;

  /// Prox point for the latent block: sum(Z+Z^T) + E + Lambda/gamma - Theta.
  Mat latent_prox_point(const SolverState& s) const;

  IterateReport step_gauss_seidel(SolverState& s) const;
  IterateReport step_jacobian(SolverState& s) const;
  IterateReport step(SolverState& s) const;

  /// Iterates from the standard start until the stopping statistic
  /// ||Theta^k - Theta^{k-1}||_F^2 / max(1, ||Theta^{k-1}||_F^2) <= tau,
  /// the iteration cap, or the wall budget.
  RunResult run() const;

  double augmented_lagrangian(const SolverState& s) const;
  Mat constraint_residual(const SolverState& s) const;
  double gamma() const { return gamma_; }
  const SolverOptions& options() const { return opts_; }
  const SsonConfig& config() const { return cfg_; }

 private:
  IterateReport make_report(const SolverState& prev, const SolverState& next,
                            bool inner_converged) const;
  double penalty_term(int i, const Mat& z) const;  // f_i

  const LossProblem& problem_;
  SsonConfig cfg_;
  SolverOptions opts_;
  double gamma_ = 0.0;
};

/// Indices k where L_gamma increased beyond 1e-10*(1+|L_gamma|) relative to
/// the previous report.
std::vector<int> monitor_decrease(const std::vector<IterateReport>& reports);

/// Norm of the subgradient certificate assembled from successive-iterate
/// differences and the multiplier change; zero at a fixed point.
double stationarity_residual(const SolverState& prev, const SolverState& next,
                             const SsonConfig& cfg, double gamma, double rho);

/// Streams one iterate report as CSV (header written by trace_csv_header).
void trace_csv_header(std::ostream& os);
void trace_csv_row(std::ostream& os, const IterateReport& r);

}  // namespace sson
