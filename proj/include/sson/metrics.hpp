#pragma once

#include "sson/matrix.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace sson {

struct Edge {
  int i = 0;  // 0-based, i < j
  int j = 0;
  double weight = 0.0;
};

/// Unordered node pairs (stored with i < j), no self-loops, unique.
struct EdgeSet {
  int p = 0;
  std::vector<Edge> edges;  // sorted by (i, j)

  void validate() const;
  bool contains(int i, int j) const;
};

/// Count of off-diagonal pairs j < j' with |theta_hat| > threshold at a true
/// edge (theta_true != 0).
int correct_edges(const SymMatrix& theta_hat, const SymMatrix& theta_true,
                  double threshold = 1e-4);

/// Strictly upper-triangular sum of squared errors.
double squared_error(const SymMatrix& theta_hat, const SymMatrix& theta_true);

/// Metric table for profiles: values[problem][solver]; non-finite entries
/// are failures.
struct ProfileTable {
  std::vector<std::string> solvers;
  std::vector<std::vector<double>> values;
};

struct ProfilePoint {
  double tau = 1.0;
  std::string solver;
  double rho = 0.0;
};

/// Dolan-More performance profile on a log2 tau grid. Ratios are
/// value/best-per-problem when minimizing, best/value when
/// higher_is_better; failures get ratio +inf, so rho_s plateaus below 1.
std::vector<ProfilePoint> performance_profile(const ProfileTable& results,
                                              bool higher_is_better);

struct BootstrapResult {
  EdgeSet edges;       // weight = retention fraction
  int total_replicates = 0;
  int failed_replicates = 0;
};

/// Resamples rows of X with replacement n_boot times, re-estimates, and
/// keeps edges whose |entry| exceeds the threshold in at least an omega
/// fraction of the successful replicates. Failing replicates are skipped
/// and counted. Replicates may run concurrently; the merge is
/// order-independent.
BootstrapResult bootstrap_stability(const std::function<Mat(const Mat&)>& estimator,
                                    const Mat& x, int n_boot, double omega,
                                    double threshold, std::uint64_t seed,
                                    int threads = 1);

/// "j j' weight" lines, 1-based.
void write_edges(std::ostream& os, const EdgeSet& edges);
void write_edges(const std::string& path, const EdgeSet& edges);
EdgeSet edges_from_matrix(const SymMatrix& theta, double threshold);

/// CSV with columns (tau, solver, rho).
void write_profile(const std::string& path, const std::vector<ProfilePoint>& points);

}  // namespace sson
