#pragma once

#include "sson/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sson {

/// Penalty schedule for the structured overlap norm. Component 1 is the
/// globally sparse part (its partition slot and lambda_hat are unused and
/// lambda_hat[0] is pinned to 0); components 2..n carry blockwise structure.
struct SsonConfig {
  int n = 0;
  std::vector<double> lambda;            // lambda_1..lambda_n, >= 0
  std::vector<double> lambda_hat;        // lambda_hat_1(=0)..lambda_hat_n, >= 0
  double lambda_e = 0.0;                 // > 0
  std::vector<BlockPartition> partitions;  // size n; [0] unused

  /// Default schedule: five components, block sides p/2, p/5, p/10, p/20,
  /// lambda_e = 1, lambda_1 = lambda_2 = 0.5*lambda_e,
  /// lambda_hat_i = 0.25*lambda_e, lambda_{i+1} = 2*lambda_i for i >= 2.
  static SsonConfig default_schedule(int p);

  void validate(int p) const;
};

/// The stack (Z_1..Z_n, E) plus the optional trace-penalized PSD component
/// produced by latent-variable runs (entering the reconstruction with a
/// minus sign).
struct Decomposition {
  std::vector<Mat> Z;
  std::optional<Mat> Z_latent;
  SymMatrix E;

  /// sum_i (Z_i + Z_i^T) - Z_latent + E; symmetric by construction.
  SymMatrix reconstruct() const;
};

SymMatrix reconstruct_theta(const Decomposition& d);

/// Penalty value
///   lambda_1*||Z_1 - diag||_1
/// + sum_{i>=2} [ lambda_hat_i*||Z_i - diag||_1
///              + lambda_i * sum_j ||(Z_i - diag)_j||_F ]
/// + lambda_e/2*||E||_F^2.
/// The latent component is not part of the norm; its trace penalty is
/// accounted for by the solver.
double evaluate_omega(const SsonConfig& cfg, const Decomposition& d);

/// Contiguous 1-D blocks covering [0, dim).
class VecPartition {
 public:
  VecPartition(int dim, std::vector<std::pair<int, int>> blocks);  // half-open
  static VecPartition contiguous(int dim, int block_len);

  int dim() const { return dim_; }
  const std::vector<std::pair<int, int>>& blocks() const { return blocks_; }

 private:
  int dim_ = 0;
  std::vector<std::pair<int, int>> blocks_;
};

struct VecSsonConfig {
  int n = 0;
  std::vector<double> lambda;
  std::vector<double> lambda_hat;
  double lambda_e = 0.0;
  std::vector<VecPartition> partitions;  // size n; [0] unused

  static VecSsonConfig default_schedule(int p);
  void validate(int p) const;
};

struct VecDecomposition {
  std::vector<Vec> z;
  Vec e;

  Vec reconstruct() const;  // sum_i z_i + e
};

/// Vector analogue: lambda_1*||z_1||_1
/// + sum_{i>=2} [ lambda_hat_i*||z_i||_1 + lambda_i * sum_j ||z_{i_j}||_2 ]
/// + lambda_e/2*||e||_2^2. No diagonal exclusion for vectors.
double evaluate_omega_vec(const VecSsonConfig& cfg, const VecDecomposition& d);

/// Writes one CSV per component (Z_1.csv.., E.csv, Z_latent.csv when present)
/// plus a key-value manifest naming component kind, block side and penalties.
void write_decomposition(const std::string& dir, const Decomposition& d,
                         const SsonConfig& cfg);

}  // namespace sson
