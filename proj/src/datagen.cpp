#include "sson/datagen.hpp"

#include "sson/eigen_sym.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace sson {

void GraphSpec::validate() const {
  if (p < 2) {
    throw std::invalid_argument("GraphSpec: p must be >= 2");
  }
  switch (family) {
    case GraphFamily::kErdosRenyi:
      if (edge_prob < 0.0 || edge_prob > 1.0) {
        throw std::invalid_argument("GraphSpec: edge_prob must lie in [0,1], got " +
                                    std::to_string(edge_prob));
      }
      break;
    case GraphFamily::kNearestNeighbor:
      if (neighbors < 1 || neighbors >= p) {
        throw std::invalid_argument("GraphSpec: neighbors must lie in [1, p-1], got " +
                                    std::to_string(neighbors));
      }
      break;
    case GraphFamily::kScaleFree:
      if (attach < 1 || attach >= p) {
        throw std::invalid_argument("GraphSpec: attach must lie in [1, p-1], got " +
                                    std::to_string(attach));
      }
      break;
  }
}

std::string GraphSpec::family_name() const {
  switch (family) {
    case GraphFamily::kErdosRenyi: return "erdos-renyi";
    case GraphFamily::kNearestNeighbor: return "nearest-neighbor";
    case GraphFamily::kScaleFree: return "scale-free";
  }
  return "unknown";
}

namespace {

SymMatrix erdos_renyi(const GraphSpec& spec, CounterRng& rng) {
  Mat a = Mat::Zero(spec.p, spec.p);
  for (int i = 0; i < spec.p; ++i) {
    for (int j = i + 1; j < spec.p; ++j) {
      if (rng.next_uniform() < spec.edge_prob) a(i, j) = a(j, i) = 1.0;
    }
  }
  return SymMatrix(std::move(a));
}

SymMatrix nearest_neighbor(const GraphSpec& spec, CounterRng& rng) {
  const int p = spec.p;
  std::vector<std::pair<double, double>> pts(p);
  for (auto& pt : pts) {
    pt.first = rng.next_uniform();
    pt.second = rng.next_uniform();
  }
  Mat a = Mat::Zero(p, p);
  std::vector<std::pair<double, int>> dist(p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      const double dx = pts[i].first - pts[j].first;
      const double dy = pts[i].second - pts[j].second;
      dist[j] = {dx * dx + dy * dy, j};
    }
    dist[i].first = std::numeric_limits<double>::infinity();  // no self-loop
    std::stable_sort(dist.begin(), dist.end());  // ties resolved by index
    for (int k = 0; k < spec.neighbors; ++k) {
      const int j = dist[k].second;
      a(i, j) = a(j, i) = 1.0;
    }
  }
  return SymMatrix(std::move(a));
}

SymMatrix scale_free(const GraphSpec& spec, CounterRng& rng) {
  const int p = spec.p;
  const int m = spec.attach;
  Mat a = Mat::Zero(p, p);
  // Degree-weighted endpoint pool; seeded with a clique on the first m+1 nodes.
  std::vector<int> endpoints;
  const int seed_nodes = std::min(m + 1, p);
  for (int i = 0; i < seed_nodes; ++i) {
    for (int j = i + 1; j < seed_nodes; ++j) {
      a(i, j) = a(j, i) = 1.0;
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  for (int t = seed_nodes; t < p; ++t) {
    std::vector<int> chosen;
    const int want = std::min(m, t);
    int guard = 0;
    while (static_cast<int>(chosen.size()) < want) {
      int candidate;
      if (guard++ < 64 * want) {
        candidate = endpoints[rng.next_int(static_cast<int>(endpoints.size()))];
      } else {
        candidate = rng.next_int(t);  // degenerate pool; fall back to uniform
      }
      if (candidate == t) continue;
      if (std::find(chosen.begin(), chosen.end(), candidate) != chosen.end()) continue;
      chosen.push_back(candidate);
    }
    for (int c : chosen) {
      a(t, c) = a(c, t) = 1.0;
      endpoints.push_back(t);
      endpoints.push_back(c);
    }
  }
  return SymMatrix(std::move(a));
}

}  // namespace

SymMatrix gen_adjacency(const GraphSpec& spec) {
  spec.validate();
  CounterRng rng(spec.seed);
  switch (spec.family) {
    case GraphFamily::kErdosRenyi: return erdos_renyi(spec, rng);
    case GraphFamily::kNearestNeighbor: return nearest_neighbor(spec, rng);
    case GraphFamily::kScaleFree: return scale_free(spec, rng);
  }
  throw std::invalid_argument("GraphSpec: unknown family");
}

SymMatrix build_precision(const SymMatrix& adjacency) {
  const EigenResult eig = sym_eigen(adjacency);
  const double lambda_min = eig.eigenvalues(eig.eigenvalues.size() - 1);
  Mat precision = adjacency.mat();
  precision.diagonal().array() += 0.1 - lambda_min;
  return SymMatrix(std::move(precision));
}

Mat sample_gaussian(const SymMatrix& sigma_inv, int m, std::uint64_t seed) {
  if (m < 0) {
    throw std::invalid_argument("sample_gaussian: m must be >= 0");
  }
  const int p = sigma_inv.dim();
  Eigen::LLT<Mat> llt(sigma_inv.mat());
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("sample_gaussian: precision matrix is not positive definite");
  }
  CounterRng rng(seed);
  Mat samples(m, p);
  Vec z(p);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < p; ++j) z(j) = rng.next_normal();
    // x = K^{-T} z for Sigma^{-1} = K K^T gives cov(x) = Sigma.
    samples.row(i) = llt.matrixU().solve(z).transpose();
  }
  return samples;
}

Mat sample_gaussian_from_covariance(const SymMatrix& sigma, int m, std::uint64_t seed) {
  if (m < 0) {
    throw std::invalid_argument("sample_gaussian_from_covariance: m must be >= 0");
  }
  const int p = sigma.dim();
  Eigen::LLT<Mat> llt(sigma.mat());
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(
        "sample_gaussian_from_covariance: covariance is not positive definite");
  }
  const Mat chol_lower = llt.matrixL();
  CounterRng rng(seed);
  Mat samples(m, p);
  Vec z(p);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < p; ++j) z(j) = rng.next_normal();
    samples.row(i) = (chol_lower * z).transpose();
  }
  return samples;
}

LatentInstance build_latent_instance(int p, int r, const GraphSpec& spec) {
  if (p < 1 || r < 1) {
    throw std::invalid_argument("build_latent_instance: p and r must be >= 1");
  }
  if (spec.p != p + r) {
    throw std::invalid_argument("build_latent_instance: spec.p must equal p + r");
  }
  const SymMatrix full = build_precision(gen_adjacency(spec));
  const Mat theta_obs = full.mat().topLeftCorner(p, p);
  const Mat cross = full.mat().block(0, p, p, r);
  const Mat latent_block = full.mat().block(p, p, r, r);
  Eigen::LLT<Mat> llt(latent_block);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("build_latent_instance: singular latent block");
  }
  const Mat theta_lowrank = cross * llt.solve(cross.transpose());

  LatentInstance out;
  out.theta_obs = SymMatrix::from_symmetric_part(theta_obs);
  out.theta_lowrank = SymMatrix::from_symmetric_part(theta_lowrank);
  out.marginal_precision =
      SymMatrix::from_symmetric_part(theta_obs - theta_lowrank);
  return out;
}

Mat gibbs_ising(const SymMatrix& theta, int m, int burn_in, int thin,
                std::uint64_t seed) {
  if (m <= 0) {
    throw std::invalid_argument("gibbs_ising: m must be positive");
  }
  if (burn_in < 0 || thin < 1) {
    throw std::invalid_argument("gibbs_ising: need burn_in >= 0 and thin >= 1");
  }
  const int p = theta.dim();
  CounterRng rng(seed);
  Vec state(p);
  for (int j = 0; j < p; ++j) state(j) = rng.next_uniform() < 0.5 ? 1.0 : 0.0;

  int site = 0;
  const auto update_site = [&] {
    double field = theta(site, site);
    for (int j = 0; j < p; ++j) {
      if (j != site) field += theta(site, j) * state(j);
    }
    const double prob = 1.0 / (1.0 + std::exp(-field));
    state(site) = rng.next_uniform() < prob ? 1.0 : 0.0;
    site = (site + 1) % p;
  };

  for (int t = 0; t < burn_in; ++t) update_site();
  Mat samples(m, p);
  for (int i = 0; i < m; ++i) {
    for (int t = 0; t < thin; ++t) update_site();
    samples.row(i) = state.transpose();
  }
  return samples;
}

VarData simulate_var(const std::vector<Mat>& theta_lags, const SymMatrix& sigma_noise,
                     int m, std::uint64_t seed) {
  const int d = static_cast<int>(theta_lags.size());
  if (d < 1) {
    throw std::invalid_argument("simulate_var: need at least one lag matrix");
  }
  const int p = sigma_noise.dim();
  for (const Mat& t : theta_lags) {
    if (t.rows() != p || t.cols() != p) {
      throw std::invalid_argument("simulate_var: lag matrices must be p x p");
    }
    require_finite(t, "simulate_var lag");
  }
  if (m <= d) {
    throw std::invalid_argument("simulate_var: m must exceed the lag count");
  }

  // Stability: spectral radius of the companion matrix must stay below 1.
  Mat companion = Mat::Zero(d * p, d * p);
  for (int k = 0; k < d; ++k) {
    companion.block(0, k * p, p, p) = theta_lags[k].transpose();
  }
  if (d > 1) {
    companion.block(p, 0, (d - 1) * p, (d - 1) * p) =
        Mat::Identity((d - 1) * p, (d - 1) * p);
  }
  const Eigen::EigenSolver<Mat> es(companion);
  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(radius < 1.0 - 1e-9)) {
    throw std::invalid_argument("simulate_var: unstable VAR (companion spectral radius " +
                                std::to_string(radius) + " >= 1)");
  }

  Eigen::LLT<Mat> llt(sigma_noise.mat());
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("simulate_var: noise covariance is not positive definite");
  }
  const Mat chol_lower = llt.matrixL();

  CounterRng rng(seed);
  Vec z(p);
  const auto noise = [&] {
    for (int j = 0; j < p; ++j) z(j) = rng.next_normal();
    return Vec(chol_lower * z);
  };

  VarData out;
  out.trajectory.resize(m, p);
  for (int t = 0; t < m; ++t) {
    Vec x = noise();
    if (t >= d) {
      for (int k = 0; k < d; ++k) {
        x += theta_lags[k].transpose() * out.trajectory.row(t - 1 - k).transpose();
      }
    }
    out.trajectory.row(t) = x.transpose();
  }

  const int rows = m - d;
  out.Y.resize(rows, p);
  out.X.resize(rows, d * p);
  for (int t = d; t < m; ++t) {
    out.Y.row(t - d) = out.trajectory.row(t);
    for (int k = 0; k < d; ++k) {
      out.X.block(t - d, k * p, 1, p) = out.trajectory.row(t - 1 - k);
    }
  }
  return out;
}

}  // namespace sson
