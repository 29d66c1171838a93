#include "sson/metrics.hpp"

#include "sson/matrix_io.hpp"
#include "sson/parallel.hpp"
#include "sson/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace sson {

void EdgeSet::validate() const {
  for (size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (e.i < 0 || e.j >= p || e.i >= e.j) {
      throw std::invalid_argument("EdgeSet: bad edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ") for p=" + std::to_string(p));
    }
    if (k > 0) {
      const Edge& prev = edges[k - 1];
      if (std::pair(prev.i, prev.j) >= std::pair(e.i, e.j)) {
        throw std::invalid_argument("EdgeSet: edges must be sorted and unique");
      }
    }
  }
}

bool EdgeSet::contains(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(edges.begin(), edges.end(), Edge{i, j, 0.0},
                            [](const Edge& a, const Edge& b) {
                              return std::pair(a.i, a.j) < std::pair(b.i, b.j);
                            });
}

namespace {

void check_dims(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("metrics: dimension mismatch (" + std::to_string(a.dim()) +
                                " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

int correct_edges(const SymMatrix& theta_hat, const SymMatrix& theta_true,
                  double threshold) {
  check_dims(theta_hat, theta_true);
  int count = 0;
  for (int j = 0; j < theta_hat.dim(); ++j) {
    for (int jp = j + 1; jp < theta_hat.dim(); ++jp) {
      if (std::abs(theta_hat(j, jp)) > threshold && theta_true(j, jp) != 0.0) {
        ++count;
      }
    }
  }
  return count;
}

double squared_error(const SymMatrix& theta_hat, const SymMatrix& theta_true) {
  check_dims(theta_hat, theta_true);
  double total = 0.0;
  for (int j = 0; j < theta_hat.dim(); ++j) {
    for (int jp = j + 1; jp < theta_hat.dim(); ++jp) {
      const double d = std::abs(theta_hat(j, jp) - theta_true(j, jp));
      total += d * d;
    }
  }
  return total;
}

std::vector<ProfilePoint> performance_profile(const ProfileTable& results,
                                              bool higher_is_better) {
  const size_t n_solvers = results.solvers.size();
  const size_t n_problems = results.values.size();
  if (n_solvers == 0 || n_problems == 0) {
    throw std::invalid_argument("performance_profile: empty table");
  }
  for (const auto& row : results.values) {
    if (row.size() != n_solvers) {
      throw std::invalid_argument("performance_profile: ragged table");
    }
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> ratios(n_problems, std::vector<double>(n_solvers, inf));
  double max_finite_ratio = 1.0;
  for (size_t prob = 0; prob < n_problems; ++prob) {
    double best = higher_is_better ? -inf : inf;
    for (double v : results.values[prob]) {
      if (!std::isfinite(v)) continue;
      best = higher_is_better ? std::max(best, v) : std::min(best, v);
    }
    if (!std::isfinite(best)) continue;  // every solver failed on this problem
    for (size_t s = 0; s < n_solvers; ++s) {
      const double v = results.values[prob][s];
      if (!std::isfinite(v)) continue;
      double r;
      if (higher_is_better) {
        r = v == best ? 1.0 : (v == 0.0 ? inf : best / v);
      } else {
        r = v == best ? 1.0 : (best == 0.0 ? inf : v / best);
      }
      ratios[prob][s] = r;
      if (std::isfinite(r)) max_finite_ratio = std::max(max_finite_ratio, r);
    }
  }

  const int max_exp =
      std::max(1, static_cast<int>(std::ceil(std::log2(max_finite_ratio))));
  std::vector<ProfilePoint> out;
  for (int e = 0; e <= max_exp; ++e) {
    const double tau = std::ldexp(1.0, e);
    for (size_t s = 0; s < n_solvers; ++s) {
      int solved = 0;
      for (size_t prob = 0; prob < n_problems; ++prob) {
        if (ratios[prob][s] <= tau) ++solved;
      }
      out.push_back({tau, results.solvers[s],
                     static_cast<double>(solved) / static_cast<double>(n_problems)});
    }
  }
  return out;
}

BootstrapResult bootstrap_stability(const std::function<Mat(const Mat&)>& estimator,
                                    const Mat& x, int n_boot, double omega,
                                    double threshold, std::uint64_t seed, int threads) {
  if (n_boot < 1) {
    throw std::invalid_argument("bootstrap_stability: n_boot must be >= 1");
  }
  if (!(omega > 0.0) || omega > 1.0) {
    throw std::invalid_argument("bootstrap_stability: omega must lie in (0,1]");
  }
  const int m = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (m < 1) {
    throw std::invalid_argument("bootstrap_stability: empty data");
  }

  const size_t n_pairs = static_cast<size_t>(p) * (p - 1) / 2;
  std::vector<std::vector<char>> hits(n_boot);
  std::vector<char> failed(n_boot, 0);

  parallel_for(n_boot, threads, [&](int b) {
    // Per-replicate stream so the merge is order-independent.
    CounterRng rng(CounterRng(seed + static_cast<std::uint64_t>(b)).next_u64());
    Mat resampled(m, p);
    for (int r = 0; r < m; ++r) {
      resampled.row(r) = x.row(rng.next_int(m));
    }
    try {
      const Mat est = estimator(resampled);
      if (est.rows() != p || est.cols() != p) {
        throw std::invalid_argument("estimator returned wrong shape");
      }
      std::vector<char> flag(n_pairs, 0);
      size_t idx = 0;
      for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j, ++idx) {
          if (std::abs(est(i, j)) > threshold) flag[idx] = 1;
        }
      }
      hits[b] = std::move(flag);
    } catch (const std::exception&) {
      failed[b] = 1;
    }
  });

  BootstrapResult out;
  out.total_replicates = n_boot;
  out.failed_replicates = static_cast<int>(std::count(failed.begin(), failed.end(), 1));
  const int ok = n_boot - out.failed_replicates;
  out.edges.p = p;
  if (ok == 0) return out;

  size_t idx = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j, ++idx) {
      int count = 0;
      for (int b = 0; b < n_boot; ++b) {
        if (!failed[b] && !hits[b].empty() && hits[b][idx]) ++count;
      }
      const double fraction = static_cast<double>(count) / ok;
      if (fraction >= omega - 1e-12) {
        out.edges.edges.push_back({i, j, fraction});
      }
    }
  }
  return out;
}

void write_edges(std::ostream& os, const EdgeSet& edges) {
  for (const Edge& e : edges.edges) {
    os << (e.i + 1) << ' ' << (e.j + 1) << ' ' << format_double(e.weight) << '\n';
  }
}

void write_edges(const std::string& path, const EdgeSet& edges) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  write_edges(out, edges);
}

EdgeSet edges_from_matrix(const SymMatrix& theta, double threshold) {
  EdgeSet out;
  out.p = theta.dim();
  for (int i = 0; i < out.p; ++i) {
    for (int j = i + 1; j < out.p; ++j) {
      if (std::abs(theta(i, j)) > threshold) {
        out.edges.push_back({i, j, theta(i, j)});
      }
    }
  }
  return out;
}

void write_profile(const std::string& path, const std::vector<ProfilePoint>& points) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out << "tau,solver,rho\n";
  for (const ProfilePoint& pt : points) {
    out << format_double(pt.tau) << ',' << pt.solver << ',' << format_double(pt.rho)
        << '\n';
  }
}

}  // namespace sson
