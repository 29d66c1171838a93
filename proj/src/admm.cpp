#include "sson/admm.hpp"

#include "sson/parallel.hpp"
#include "sson/prox.hpp"
#include "sson/shrinkage.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <ostream>

namespace sson {

double SolverOptions::resolved_gamma(double lambda_e) const {
  const double g = std::isnan(gamma) ? 2.0 * lambda_e : gamma;
  if (!(g > 0.0) || g < std::sqrt(2.0) * lambda_e - 1e-12) {
    throw std::invalid_argument("SolverOptions: gamma must satisfy gamma >= sqrt(2)*lambda_e (got gamma=" +
                                std::to_string(g) + ", lambda_e=" + std::to_string(lambda_e) + ")");
  }
  return g;
}

SolverState SolverState::initial(int p, int n, bool latent) {
  SolverState s;
  s.Theta = Mat::Identity(p, p);
  s.Z.assign(n, Mat::Identity(p, p));
  if (latent) s.Z_latent = Mat::Identity(p, p);
  s.E = Mat::Identity(p, p);
  s.Lambda = Mat::Zero(p, p);
  s.k = 0;
  return s;
}

AdmmDriver::AdmmDriver(const LossProblem& problem, SsonConfig cfg, SolverOptions opts)
    : problem_(problem), cfg_(std::move(cfg)), opts_(opts) {
  cfg_.validate(problem_.dim());
  gamma_ = opts_.resolved_gamma(cfg_.lambda_e);
  if (!(opts_.rho > 0.0)) {
    throw std::invalid_argument("SolverOptions: rho must be > 0");
  }
  if (!(opts_.tau > 0.0) || opts_.max_iter < 1) {
    throw std::invalid_argument("SolverOptions: tau and max_iter must be positive");
  }
  if (opts_.latent_lambda && !(*opts_.latent_lambda > 0.0)) {
    throw std::invalid_argument("SolverOptions: latent_lambda must be > 0");
  }
}

Mat AdmmDriver::compute_b(const SolverState& s, int stage) const {
  const int n = cfg_.n;
  assert(stage >= 0 && stage <= n + 1);
  const Eigen::Index p = s.Theta.rows();
  Mat sum = Mat::Zero(p, p);
  for (int j = 0; j < n; ++j) {
    if (j + 1 == stage) continue;  // stage i excludes its own Z_i
    sum += s.Z[j] + s.Z[j].transpose();
  }
  if (s.Z_latent) sum -= *s.Z_latent;
  if (stage <= n) sum += s.E;  // the E stage (n+1) excludes E itself
  sum += s.Lambda / gamma_;
  if (stage == 0) return sum;
  return s.Theta - sum;
}

Mat AdmmDriver::latent_prox_point(const SolverState& s) const {
  Mat sum = s.E + s.Lambda / gamma_;
  for (const Mat& z : s.Z) sum += z + z.transpose();
  return sum - s.Theta;
}

double AdmmDriver::penalty_term(int i, const Mat& z) const {
  const Mat od = off_diag(z);
  if (i == 0) return cfg_.lambda[0] * od.cwiseAbs().sum();
  double blocks = 0.0;
  for (const IndexRect& b : cfg_.partitions[i].blocks()) {
    blocks += od.block(b.row0, b.col0, b.rows(), b.cols()).norm();
  }
  return cfg_.lambda_hat[i] * od.cwiseAbs().sum() + cfg_.lambda[i] * blocks;
}

Mat AdmmDriver::constraint_residual(const SolverState& s) const {
  Mat r = s.Theta - s.E;
  for (const Mat& z : s.Z) r -= z + z.transpose();
  if (s.Z_latent) r += *s.Z_latent;
  return r;
}

double AdmmDriver::augmented_lagrangian(const SolverState& s) const {
  double value = problem_.objective(s.Theta);
  for (int i = 0; i < cfg_.n; ++i) value += penalty_term(i, s.Z[i]);
  if (s.Z_latent && opts_.latent_lambda) {
    value += *opts_.latent_lambda * s.Z_latent->trace();
  }
  value += 0.5 * cfg_.lambda_e * s.E.squaredNorm();
  const Mat r = constraint_residual(s);
  value -= (s.Lambda.array() * r.array()).sum();
  value += 0.5 * gamma_ * r.squaredNorm();
  return value;
}

namespace {

double max_asym(const Mat& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

#ifndef NDEBUG
// Lemma-style sufficient decrease of f_i + H_i for one linearized block step,
// checked only when rho > 4 (the Lipschitz bound of the normalized gradient).
void assert_block_decrease(double f_old, double f_new, const Mat& z_old,
                           const Mat& z_new, const Mat& b, double rho, double gamma) {
  if (rho <= 4.0) return;
  const double h_old = 0.5 * gamma * (z_old + z_old.transpose() - b).squaredNorm();
  const double h_new = 0.5 * gamma * (z_new + z_new.transpose() - b).squaredNorm();
  const double drop = (f_old + h_old) - (f_new + h_new);
  const double need = 0.5 * (rho * gamma - 4.0 * gamma) * (z_new - z_old).squaredNorm();
  assert(drop >= need - 1e-9 * (1.0 + std::abs(f_old + h_old)));
}
#endif

}  // namespace

IterateReport AdmmDriver::step_gauss_seidel(SolverState& s) const {
  const SolverState prev = s;
  const int n = cfg_.n;

  const ThetaUpdate tu = problem_.theta_update(compute_b(s, 0), gamma_, s.Theta);
  s.Theta = tu.theta;

  for (int i = 0; i < n; ++i) {
    const Mat b = compute_b(s, i + 1);
    LinearizedTarget t;
    t.rho = opts_.rho;
    t.gamma = gamma_;
    t.C = linearized_point(s.Z[i], b, opts_.rho);
#ifndef NDEBUG
    const Mat z_old = s.Z[i];
    const double f_old = penalty_term(i, z_old);
#endif
    s.Z[i] = i == 0 ? update_z1(t, cfg_.lambda[0])
                    : update_zi(t, cfg_.partitions[i], cfg_.lambda_hat[i], cfg_.lambda[i]);
#ifndef NDEBUG
    assert_block_decrease(f_old, penalty_term(i, s.Z[i]), z_old, s.Z[i], b, opts_.rho,
                          gamma_);
#endif
  }

  if (s.Z_latent) {
    const Mat c = latent_prox_point(s);
    s.Z_latent = prox_trace_psd(SymMatrix::from_symmetric_part(c), *opts_.latent_lambda,
                                gamma_)
                     .mat();
  }

  s.E = update_e(SymMatrix::from_symmetric_part(compute_b(s, n + 1)), cfg_.lambda_e,
                 gamma_)
            .mat();
  s.Lambda -= gamma_ * constraint_residual(s);
  s.k = prev.k + 1;
  return make_report(prev, s, tu.converged);
}

IterateReport AdmmDriver::step_jacobian(SolverState& s) const {
  const SolverState prev = s;
  const int n = cfg_.n;

  // The theta and Z prox points are all evaluated at iterate k before
  // anything moves, so the Z blocks (and the latent block) can be computed
  // in parallel. The E update stays sequential: it must see the fresh Theta
  // and Z values, otherwise the multiplier identity Lambda = -lambda_e * E
  // breaks and the fully simultaneous sweep is not convergent.
  const Mat b0 = compute_b(s, 0);
  std::vector<Mat> c(n);
  for (int i = 0; i < n; ++i) {
    c[i] = linearized_point(s.Z[i], compute_b(s, i + 1), opts_.rho);
  }
  Mat latent_c;
  if (s.Z_latent) latent_c = latent_prox_point(s);

  const ThetaUpdate tu = problem_.theta_update(b0, gamma_, s.Theta);
  s.Theta = tu.theta;

  parallel_for(n, opts_.threads, [&](int i) {
    LinearizedTarget t;
    t.rho = opts_.rho;
    t.gamma = gamma_;
    t.C = c[i];
    s.Z[i] = i == 0 ? update_z1(t, cfg_.lambda[0])
                    : update_zi(t, cfg_.partitions[i], cfg_.lambda_hat[i], cfg_.lambda[i]);
  });

  if (s.Z_latent) {
    s.Z_latent = prox_trace_psd(SymMatrix::from_symmetric_part(latent_c),
                                *opts_.latent_lambda, gamma_)
                     .mat();
  }
  s.E = update_e(SymMatrix::from_symmetric_part(compute_b(s, n + 1)), cfg_.lambda_e,
                 gamma_)
            .mat();
  s.Lambda -= gamma_ * constraint_residual(s);
  s.k = prev.k + 1;
  return make_report(prev, s, tu.converged);
}

IterateReport AdmmDriver::step(SolverState& s) const {
  return opts_.mode == UpdateMode::kGaussSeidel ? step_gauss_seidel(s) : step_jacobian(s);
}

IterateReport AdmmDriver::make_report(const SolverState& prev, const SolverState& next,
                                      bool inner_converged) const {
  IterateReport r;
  r.k = next.k;
  r.L_gamma = augmented_lagrangian(next);
  r.primal_residual = constraint_residual(next).norm();
  r.theta_step = (next.Theta - prev.Theta).norm();
  r.stop_stat = (next.Theta - prev.Theta).squaredNorm() /
                std::max(1.0, prev.Theta.squaredNorm());
  r.z_steps.resize(cfg_.n);
  for (int i = 0; i < cfg_.n; ++i) r.z_steps[i] = (next.Z[i] - prev.Z[i]).norm();
  if (next.Z_latent && prev.Z_latent) {
    r.latent_step = (*next.Z_latent - *prev.Z_latent).norm();
  }
  r.e_step = (next.E - prev.E).norm();
  r.lambda_step = (next.Lambda - prev.Lambda).norm();
  r.dual_gap = (next.Lambda + cfg_.lambda_e * next.E).norm();
  r.lambda_norm = next.Lambda.norm();
  r.stationarity_residual = stationarity_residual(prev, next, cfg_, gamma_, opts_.rho);
  r.max_asymmetry = std::max({max_asym(next.Theta), max_asym(next.E), max_asym(next.Lambda)});
  r.inner_converged = inner_converged;
  return r;
}

namespace {

bool state_finite(const SolverState& s) {
  if (!s.Theta.allFinite() || !s.E.allFinite() || !s.Lambda.allFinite()) return false;
  for (const Mat& z : s.Z) {
    if (!z.allFinite()) return false;
  }
  return !(s.Z_latent && !s.Z_latent->allFinite());
}

}  // namespace

RunResult AdmmDriver::run() const {
  const auto t0 = std::chrono::steady_clock::now();
  const int p = problem_.dim();
  SolverState s = SolverState::initial(p, cfg_.n, opts_.latent_lambda.has_value());

  RunResult out;
  if (opts_.mode == UpdateMode::kJacobian && opts_.rho < 2.0 * (cfg_.n + 1)) {
    out.warning = "rho=" + std::to_string(opts_.rho) +
                  " is weak damping for simultaneous updates of " +
                  std::to_string(cfg_.n) + " blocks; consider rho >= " +
                  std::to_string(2 * (cfg_.n + 1));
  }
  double prev_l = augmented_lagrangian(s);
  bool trace_decimated = false;
  if (opts_.trace_stream) trace_csv_header(*opts_.trace_stream);

  for (int k = 1; k <= opts_.max_iter; ++k) {
    IterateReport rep;
    const SolverState snapshot = s;
    try {
      rep = step(s);
      if (!state_finite(s)) {
        throw std::runtime_error("non-finite iterate");
      }
    } catch (const std::exception& e) {
      s = snapshot;
      out.warning = "diverged at k=" + std::to_string(k) + " (" + e.what() +
                    "); returning the last finite state";
      break;
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (opts_.trace_stream) trace_csv_row(*opts_.trace_stream, rep);
    if (!rep.inner_converged && out.warning.empty()) {
      out.warning = "inner theta solver hit its iteration cap at k=" + std::to_string(k);
    }
    if (opts_.strict_monitor && rep.L_gamma > prev_l + 1e-10 * (1.0 + std::abs(prev_l))) {
      throw MonitorViolation(
          "augmented Lagrangian increased at k=" + std::to_string(k) + " (" +
          std::to_string(prev_l) + " -> " + std::to_string(rep.L_gamma) +
          "); check rho > 4 and gamma >= sqrt(2)*lambda_e (rho=" +
          std::to_string(opts_.rho) + ", gamma=" + std::to_string(gamma_) + ")");
    }
    prev_l = rep.L_gamma;

    // In-memory trace policy: dense up to 10k reports, 1-in-10 afterwards.
    if (out.trace.size() >= 10000 && !trace_decimated) {
      std::vector<IterateReport> kept;
      kept.reserve(out.trace.size() / 10 + 1);
      for (size_t idx = 0; idx < out.trace.size(); idx += 10) kept.push_back(out.trace[idx]);
      out.trace = std::move(kept);
      trace_decimated = true;
    }
    if (!trace_decimated || rep.k % 10 == 0) out.trace.push_back(rep);
    out.iterations = k;

    if (rep.stop_stat <= opts_.tau) {
      out.converged = true;
      break;
    }
    if (rep.wall_ms > opts_.wall_budget_ms) {
      out.warning = "wall-clock budget exhausted at k=" + std::to_string(k);
      break;
    }
  }
  if (!out.converged && out.warning.empty()) {
    out.warning = "not converged within " + std::to_string(opts_.max_iter) + " iterations";
  }

  out.decomposition.Z = s.Z;
  out.decomposition.Z_latent = s.Z_latent;
  out.decomposition.E = SymMatrix::from_symmetric_part(s.E);
  out.theta = SymMatrix::from_symmetric_part(s.Theta);
  return out;
}

std::vector<int> monitor_decrease(const std::vector<IterateReport>& reports) {
  std::vector<int> violations;
  for (size_t i = 1; i < reports.size(); ++i) {
    const double prev = reports[i - 1].L_gamma;
    if (reports[i].L_gamma > prev + 1e-10 * (1.0 + std::abs(prev))) {
      violations.push_back(reports[i].k);
    }
  }
  return violations;
}

double stationarity_residual(const SolverState& prev, const SolverState& next,
                             const SsonConfig& cfg, double gamma, double rho) {
  const int n = cfg.n;
  const Mat d_lambda = prev.Lambda - next.Lambda;
  const Mat d_theta = next.Theta - prev.Theta;
  const Mat d_e = prev.E - next.E;
  const Eigen::Index p = d_theta.rows();

  Mat z_sum = Mat::Zero(p, p);  // sum over all i of (dZ_i + dZ_i^T)
  std::vector<Mat> dz(n);
  for (int i = 0; i < n; ++i) {
    dz[i] = prev.Z[i] - next.Z[i];
    z_sum += dz[i] + dz[i].transpose();
  }
  Mat d_lat = Mat::Zero(p, p);
  if (prev.Z_latent && next.Z_latent) d_lat = *prev.Z_latent - *next.Z_latent;

  double total = 0.0;
  const Mat h_theta = d_lambda + gamma * (d_theta + z_sum - d_lat + d_e);
  total += h_theta.squaredNorm();

  // Trailing sums run from block i to n; certificate terms for the Z blocks
  // carry both a term and its transpose.
  Mat tail = z_sum;
  const Mat sym_common =
      d_lambda + d_lambda.transpose() +
      gamma * (d_theta + d_theta.transpose() - 2.0 * d_lat + d_e + d_e.transpose());
  for (int i = 0; i < n; ++i) {
    if (i > 0) tail -= dz[i - 1] + dz[i - 1].transpose();
    const Mat h_z = sym_common + gamma * rho * dz[i] + gamma * tail;
    total += h_z.squaredNorm();
  }
  if (prev.Z_latent && next.Z_latent) {
    const Mat h_lat = d_lambda + gamma * d_e;
    total += h_lat.squaredNorm();
  }
  total += d_lambda.squaredNorm();                    // E block
  total += (d_lambda / gamma).squaredNorm();          // multiplier block
  return std::sqrt(total);
}

void trace_csv_header(std::ostream& os) {
  os << "k,L_gamma,primal_residual,stop_stat,stationarity_residual,wall_ms\n";
}

void trace_csv_row(std::ostream& os, const IterateReport& r) {
  os << r.k << ',' << r.L_gamma << ',' << r.primal_residual << ',' << r.stop_stat << ','
     << r.stationarity_residual << ',' << r.wall_ms << '\n';
}

}  // namespace sson
