#pragma once

#include "sson/matrix.hpp"
#include "sson/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sson {

enum class GraphFamily { kErdosRenyi, kNearestNeighbor, kScaleFree };

struct GraphSpec {
  int p = 0;
  GraphFamily family = GraphFamily::kErdosRenyi;
  double edge_prob = 0.1;  // Erdos-Renyi
  int neighbors = 4;       // nearest-neighbor k
  int attach = 2;          // scale-free attachment count
  std::uint64_t seed = 0;

  void validate() const;
  std::string family_name() const;
};

/// Symmetric 0/1 adjacency with a zero diagonal. Nearest-neighbor graphs
/// connect each of p uniform points on the unit square to its k nearest
/// (ties broken by index); scale-free graphs grow by preferential attachment.
SymMatrix gen_adjacency(const GraphSpec& spec);

/// Precision matrix E + (0.1 - lambda_min(E)) * I; smallest eigenvalue 0.1.
SymMatrix build_precision(const SymMatrix& adjacency);

/// m draws from N(0, Sigma) given the precision Sigma^{-1} (must be PD),
/// as an m x p matrix; seeded and reproducible.
Mat sample_gaussian(const SymMatrix& sigma_inv, int m, std::uint64_t seed);

/// Same draw parameterized by the covariance itself.
Mat sample_gaussian_from_covariance(const SymMatrix& sigma, int m, std::uint64_t seed);

struct LatentInstance {
  SymMatrix theta_obs;            // observed-block precision, the ground truth
  SymMatrix theta_lowrank;        // PSD, rank <= r
  SymMatrix marginal_precision;   // theta_obs - theta_lowrank, PD
};

/// Builds a (p+r)-dimensional precision via build_precision, splits off the
/// observed p x p block and the low-rank correction
/// C * D^{-1} * C^T from the cross/latent blocks.
LatentInstance build_latent_instance(int p, int r, const GraphSpec& spec);

/// Single-site Gibbs sampler for the pairwise binary model with conditional
/// flip probability logistic(theta_jj + sum_{j'!=j} theta_{jj'} x_{j'}).
/// Sites are scanned cyclically; burn_in and thin count single-site updates.
Mat gibbs_ising(const SymMatrix& theta, int m, int burn_in, int thin,
                std::uint64_t seed);

struct VarData {
  Mat trajectory;  // m x p
  Mat Y;           // (m - d) x p, rows x_t for t = d..m-1
  Mat X;           // (m - d) x (d*p), rows [x_{t-1}, ..., x_{t-d}]
};

/// Simulates x_t = sum_k Theta_k^T x_{t-k} + eps_t with Gaussian innovations
/// after checking that the companion matrix has spectral radius < 1
/// (otherwise "unstable VAR"). Also emits the stacked regression pair.
VarData simulate_var(const std::vector<Mat>& theta_lags, const SymMatrix& sigma_noise,
                     int m, std::uint64_t seed);

}  // namespace sson
