#include "sson/sson_norm.hpp"

#include "sson/matrix_io.hpp"
#include "sson/shrinkage.hpp"

#include <filesystem>
#include <fstream>

namespace sson {

SsonConfig SsonConfig::default_schedule(int p) {
  if (p < 2) {
    throw std::invalid_argument("SsonConfig::default_schedule: p must be >= 2");
  }
  SsonConfig cfg;
  cfg.n = 5;
  cfg.lambda_e = 1.0;
  cfg.lambda = {0.5, 0.5, 1.0, 2.0, 4.0};
  cfg.lambda_hat = {0.0, 0.25, 0.25, 0.25, 0.25};
  const int divisors[] = {2, 5, 10, 20};
  cfg.partitions.push_back(BlockPartition::grid(p, p));  // slot for Z_1, unused
  for (int d : divisors) {
    cfg.partitions.push_back(BlockPartition::grid(p, std::max(1, p / d)));
  }
  return cfg;
}

void SsonConfig::validate(int p) const {
  if (n < 1) {
    throw std::invalid_argument("SsonConfig: n must be >= 1");
  }
  if (static_cast<int>(lambda.size()) != n || static_cast<int>(lambda_hat.size()) != n ||
      static_cast<int>(partitions.size()) != n) {
    throw std::invalid_argument("SsonConfig: lambda/lambda_hat/partitions must have length n");
  }
  if (!(lambda_e > 0.0)) {
    throw std::invalid_argument("SsonConfig: lambda_e must be > 0");
  }
  for (int i = 0; i < n; ++i) {
    if (lambda[i] < 0.0 || lambda_hat[i] < 0.0) {
      throw std::invalid_argument("SsonConfig: penalties must be nonnegative");
    }
  }
  if (lambda_hat[0] != 0.0) {
    throw std::invalid_argument("SsonConfig: lambda_hat[0] is fixed to 0");
  }
  for (int i = 1; i < n; ++i) {
    if (partitions[i].dim() != p) {
      throw std::invalid_argument("SsonConfig: partition " + std::to_string(i + 1) +
                                  " has dim " + std::to_string(partitions[i].dim()) +
                                  ", model dim is " + std::to_string(p));
    }
  }
}

SymMatrix Decomposition::reconstruct() const {
  if (Z.empty()) {
    throw std::invalid_argument("Decomposition: empty Z stack");
  }
  const Eigen::Index p = E.mat().rows();
  Mat sum = Mat::Zero(p, p);
  for (const Mat& zi : Z) {
    if (zi.rows() != p || zi.cols() != p) {
      throw std::invalid_argument("Decomposition: component dimension mismatch");
    }
    sum += zi + zi.transpose();
  }
  if (Z_latent) {
    if (Z_latent->rows() != p || Z_latent->cols() != p) {
      throw std::invalid_argument("Decomposition: latent component dimension mismatch");
    }
    sum -= *Z_latent;
  }
  sum += E.mat();
  return SymMatrix::from_symmetric_part(sum);
}

SymMatrix reconstruct_theta(const Decomposition& d) { return d.reconstruct(); }

namespace {

double block_fro_sum(const Mat& zod, const BlockPartition& part) {
  double sum = 0.0;
  for (const IndexRect& b : part.blocks()) {
    sum += zod.block(b.row0, b.col0, b.rows(), b.cols()).norm();
  }
  return sum;
}

}  // namespace

double evaluate_omega(const SsonConfig& cfg, const Decomposition& d) {
  const int p = d.E.dim();
  cfg.validate(p);
  if (static_cast<int>(d.Z.size()) != cfg.n) {
    throw std::invalid_argument("evaluate_omega: decomposition has " +
                                std::to_string(d.Z.size()) + " components, config has " +
                                std::to_string(cfg.n));
  }
  for (const Mat& zi : d.Z) {
    if (zi.rows() != p || zi.cols() != p) {
      throw std::invalid_argument("evaluate_omega: component dimension mismatch");
    }
  }
  double omega = 0.0;
  {
    const Mat z1od = off_diag(d.Z[0]);
    omega += cfg.lambda[0] * z1od.cwiseAbs().sum();
  }
  for (int i = 1; i < cfg.n; ++i) {
    const Mat ziod = off_diag(d.Z[i]);
    omega += cfg.lambda_hat[i] * ziod.cwiseAbs().sum();
    omega += cfg.lambda[i] * block_fro_sum(ziod, cfg.partitions[i]);
  }
  omega += 0.5 * cfg.lambda_e * d.E.mat().squaredNorm();
  return omega;
}

VecPartition::VecPartition(int dim, std::vector<std::pair<int, int>> blocks)
    : dim_(dim), blocks_(std::move(blocks)) {
  if (dim <= 0) {
    throw std::invalid_argument("VecPartition: dim must be positive");
  }
  std::vector<char> seen(dim, 0);
  for (const auto& [b0, b1] : blocks_) {
    if (b0 < 0 || b1 > dim || b0 >= b1) {
      throw std::invalid_argument("VecPartition: block out of range or empty");
    }
    for (int k = b0; k < b1; ++k) {
      if (seen[k]) {
        throw std::invalid_argument("VecPartition: overlapping blocks at " + std::to_string(k));
      }
      seen[k] = 1;
    }
  }
  for (int k = 0; k < dim; ++k) {
    if (!seen[k]) {
      throw std::invalid_argument("VecPartition: position " + std::to_string(k) +
                                  " not covered");
    }
  }
}

VecPartition VecPartition::contiguous(int dim, int block_len) {
  if (dim <= 0 || block_len <= 0) {
    throw std::invalid_argument("VecPartition::contiguous: dim and block_len must be positive");
  }
  std::vector<std::pair<int, int>> blocks;
  for (int k = 0; k < dim; k += block_len) {
    blocks.emplace_back(k, std::min(k + block_len, dim));
  }
  return VecPartition(dim, std::move(blocks));
}

VecSsonConfig VecSsonConfig::default_schedule(int p) {
  if (p < 2) {
    throw std::invalid_argument("VecSsonConfig::default_schedule: p must be >= 2");
  }
  VecSsonConfig cfg;
  cfg.n = 5;
  cfg.lambda_e = 1.0;
  cfg.lambda = {0.5, 0.5, 1.0, 2.0, 4.0};
  cfg.lambda_hat = {0.0, 0.25, 0.25, 0.25, 0.25};
  const int divisors[] = {2, 5, 10, 20};
  cfg.partitions.push_back(VecPartition::contiguous(p, p));  // slot for z_1, unused
  for (int d : divisors) {
    cfg.partitions.push_back(VecPartition::contiguous(p, std::max(1, p / d)));
  }
  return cfg;
}

void VecSsonConfig::validate(int p) const {
  if (n < 1) {
    throw std::invalid_argument("VecSsonConfig: n must be >= 1");
  }
  if (static_cast<int>(lambda.size()) != n || static_cast<int>(lambda_hat.size()) != n ||
      static_cast<int>(partitions.size()) != n) {
    throw std::invalid_argument("VecSsonConfig: lambda/lambda_hat/partitions must have length n");
  }
  if (!(lambda_e > 0.0)) {
    throw std::invalid_argument("VecSsonConfig: lambda_e must be > 0");
  }
  for (int i = 0; i < n; ++i) {
    if (lambda[i] < 0.0 || lambda_hat[i] < 0.0) {
      throw std::invalid_argument("VecSsonConfig: penalties must be nonnegative");
    }
  }
  if (lambda_hat[0] != 0.0) {
    throw std::invalid_argument("VecSsonConfig: lambda_hat[0] is fixed to 0");
  }
  for (int i = 1; i < n; ++i) {
    if (partitions[i].dim() != p) {
      throw std::invalid_argument("VecSsonConfig: partition " + std::to_string(i + 1) +
                                  " dim mismatch");
    }
  }
}

Vec VecDecomposition::reconstruct() const {
  if (z.empty()) {
    throw std::invalid_argument("VecDecomposition: empty z stack");
  }
  Vec sum = e;
  for (const Vec& zi : z) {
    if (zi.size() != e.size()) {
      throw std::invalid_argument("VecDecomposition: component dimension mismatch");
    }
    sum += zi;
  }
  return sum;
}

double evaluate_omega_vec(const VecSsonConfig& cfg, const VecDecomposition& d) {
  const int p = static_cast<int>(d.e.size());
  cfg.validate(p);
  if (static_cast<int>(d.z.size()) != cfg.n) {
    throw std::invalid_argument("evaluate_omega_vec: component count mismatch");
  }
  for (const Vec& zi : d.z) {
    if (zi.size() != p) {
      throw std::invalid_argument("evaluate_omega_vec: component dimension mismatch");
    }
  }
  double omega = cfg.lambda[0] * d.z[0].cwiseAbs().sum();
  for (int i = 1; i < cfg.n; ++i) {
    omega += cfg.lambda_hat[i] * d.z[i].cwiseAbs().sum();
    double groups = 0.0;
    for (const auto& [b0, b1] : cfg.partitions[i].blocks()) {
      groups += d.z[i].segment(b0, b1 - b0).norm();
    }
    omega += cfg.lambda[i] * groups;
  }
  omega += 0.5 * cfg.lambda_e * d.e.squaredNorm();
  return omega;
}

void write_decomposition(const std::string& dir, const Decomposition& d,
                         const SsonConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (size_t i = 0; i < d.Z.size(); ++i) {
    write_csv_matrix(dir + "/Z_" + std::to_string(i + 1) + ".csv", d.Z[i]);
  }
  write_csv_matrix(dir + "/E.csv", d.E.mat());
  if (d.Z_latent) {
    write_csv_matrix(dir + "/Z_latent.csv", *d.Z_latent);
  }
  std::ofstream manifest(dir + "/components.manifest");
  if (!manifest) {
    throw IoError("cannot write '" + dir + "/components.manifest'");
  }
  manifest << "n=" << cfg.n << "\n";
  manifest << "lambda_e=" << format_double(cfg.lambda_e) << "\n";
  for (int i = 0; i < cfg.n; ++i) {
    const std::string key = "component." + std::to_string(i + 1);
    manifest << key << ".kind=" << (i == 0 ? "sparse" : "structured") << "\n";
    manifest << key << ".lambda=" << format_double(cfg.lambda[i]) << "\n";
    if (i > 0) {
      manifest << key << ".lambda_hat=" << format_double(cfg.lambda_hat[i]) << "\n";
      manifest << key << ".block_side=" << cfg.partitions[i].block_side() << "\n";
      manifest << key << ".block_count=" << cfg.partitions[i].block_count() << "\n";
    }
  }
  if (d.Z_latent) {
    manifest << "component.latent.kind=trace_psd\n";
  }
}

}  // namespace sson
