#include <doctest.h>

#include "sson/datagen.hpp"
#include "sson/eigen_sym.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <vector>

using namespace sson;

TEST_CASE("erdos-renyi edge probability extremes and determinism") {
  GraphSpec spec;
  spec.p = 4;
  spec.family = GraphFamily::kErdosRenyi;
  spec.seed = 3;

  spec.edge_prob = 0.0;
  CHECK(gen_adjacency(spec).mat().cwiseAbs().maxCoeff() == 0.0);

  spec.edge_prob = 1.0;
  const Mat complete = gen_adjacency(spec).mat();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      CHECK(complete(i, j) == (i == j ? 0.0 : 1.0));
    }
  }

  spec.edge_prob = 0.4;
  const Mat a = gen_adjacency(spec).mat();
  const Mat b = gen_adjacency(spec).mat();
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  spec.edge_prob = 1.5;
  CHECK_THROWS_AS(gen_adjacency(spec), std::invalid_argument);
}

TEST_CASE("nearest-neighbor degrees and symmetry") {
  GraphSpec spec;
  spec.p = 30;
  spec.family = GraphFamily::kNearestNeighbor;
  spec.neighbors = 3;
  spec.seed = 5;
  const Mat a = gen_adjacency(spec).mat();
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.diagonal().cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < spec.p; ++i) {
    CHECK(a.row(i).sum() >= spec.neighbors);  // unions can only add edges
  }

  spec.neighbors = 30;
  CHECK_THROWS_AS(gen_adjacency(spec), std::invalid_argument);
}

TEST_CASE("scale-free degree sequence is heavy tailed") {
  GraphSpec spec;
  spec.p = 200;
  spec.family = GraphFamily::kScaleFree;
  spec.attach = 2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    spec.seed = seed;
    const Mat a = gen_adjacency(spec).mat();
    std::vector<double> degrees(spec.p);
    for (int i = 0; i < spec.p; ++i) degrees[i] = a.row(i).sum();
    std::sort(degrees.begin(), degrees.end());
    const double median = degrees[spec.p / 2];
    const double max_deg = degrees.back();
    CHECK(max_deg >= 5.0 * median);
  }
}

TEST_CASE("build_precision: shift, pattern, factorizability") {
  const SymMatrix zero = SymMatrix::zero(5);
  const SymMatrix base = build_precision(zero);
  CHECK((base.mat() - 0.1 * Mat::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-12);

  GraphSpec spec;
  spec.p = 20;
  spec.family = GraphFamily::kErdosRenyi;
  spec.edge_prob = 0.2;
  spec.seed = 11;
  const SymMatrix adj = gen_adjacency(spec);
  const SymMatrix precision = build_precision(adj);

  const auto eig = sym_eigen(precision);
  CHECK(eig.eigenvalues(eig.eigenvalues.size() - 1) == doctest::Approx(0.1).epsilon(1e-8));

  for (int i = 0; i < spec.p; ++i) {
    for (int j = 0; j < spec.p; ++j) {
      if (i != j) CHECK(precision(i, j) == adj(i, j));
    }
  }
  Eigen::LLT<Mat> llt(precision.mat());
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("sample_gaussian: law of large numbers, empty, determinism") {
  const int p = 4;
  const SymMatrix identity = SymMatrix::identity(p);
  const Mat x = sample_gaussian(identity, 10000, 17);
  const Mat cov = x.transpose() * x / 10000.0;
  CHECK((cov - Mat::Identity(p, p)).cwiseAbs().maxCoeff() <= 0.1);

  CHECK(sample_gaussian(identity, 0, 17).rows() == 0);

  const Mat a = sample_gaussian(identity, 50, 23);
  const Mat b = sample_gaussian(identity, 50, 23);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);

  // Covariance actually follows the requested precision.
  GraphSpec spec;
  spec.p = 3;
  spec.family = GraphFamily::kErdosRenyi;
  spec.edge_prob = 0.8;
  spec.seed = 29;
  const SymMatrix prec = build_precision(gen_adjacency(spec));
  const Mat sigma = prec.mat().inverse();
  const Mat y = sample_gaussian(prec, 60000, 31);
  const Mat cov2 = y.transpose() * y / 60000.0;
  CHECK((cov2 - sigma).cwiseAbs().maxCoeff() <= 0.25);

  Mat indef = Mat::Identity(2, 2);
  indef(1, 1) = -1.0;
  CHECK_THROWS_AS(sample_gaussian(SymMatrix{indef}, 5, 1), std::invalid_argument);
}

TEST_CASE("latent instance: block-diagonal reduction, rank bound, PD marginal") {
  GraphSpec empty;
  empty.p = 8;
  empty.family = GraphFamily::kErdosRenyi;
  empty.edge_prob = 0.0;
  empty.seed = 1;
  const LatentInstance plain = build_latent_instance(6, 2, empty);
  CHECK(plain.theta_lowrank.mat().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((plain.theta_obs.mat() - 0.1 * Mat::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);

  GraphSpec spec;
  spec.p = 12;
  spec.family = GraphFamily::kErdosRenyi;
  spec.edge_prob = 0.4;
  spec.seed = 37;
  const int p = 9;
  const int r = 3;
  const LatentInstance inst = build_latent_instance(p, r, spec);

  const auto eig = sym_eigen(inst.theta_lowrank);
  for (int i = r; i < p; ++i) {
    CHECK(std::abs(eig.eigenvalues(i)) <= 1e-10);  // rank <= r
  }
  Eigen::LLT<Mat> llt(inst.marginal_precision.mat());
  CHECK(llt.info() == Eigen::Success);

  GraphSpec wrong = spec;
  wrong.p = 10;
  CHECK_THROWS_AS(build_latent_instance(p, r, wrong), std::invalid_argument);
}

TEST_CASE("gibbs_ising: uniform marginals at zero interaction") {
  const int p = 4;
  const Mat x = gibbs_ising(SymMatrix::zero(p), 10000, 2000, 2 * p, 41);
  for (int j = 0; j < p; ++j) {
    CHECK(x.col(j).mean() == doctest::Approx(0.5).epsilon(0.04));
  }
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < p; ++j) {
      CHECK((x(i, j) == 0.0 || x(i, j) == 1.0));
    }
  }

  const Mat again = gibbs_ising(SymMatrix::zero(p), 100, 500, 2 * p, 41);
  const Mat again2 = gibbs_ising(SymMatrix::zero(p), 100, 500, 2 * p, 41);
  CHECK((again - again2).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(gibbs_ising(SymMatrix::zero(p), 0, 100, 1, 1), std::invalid_argument);
}

TEST_CASE("gibbs_ising: pairwise association matches exact enumeration") {
  Mat t(2, 2);
  t << 0.2, 0.9, 0.9, -0.3;
  const SymMatrix theta{t};

  // Exact 4-state distribution of the pairwise binary model.
  double z = 0.0;
  double probs[2][2];
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      probs[a][b] = std::exp(t(0, 0) * a + t(1, 1) * b + t(0, 1) * a * b);
      z += probs[a][b];
    }
  }
  double mean0 = 0.0, mean1 = 0.0, cross = 0.0;
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      probs[a][b] /= z;
      mean0 += a * probs[a][b];
      mean1 += b * probs[a][b];
      cross += a * b * probs[a][b];
    }
  }
  const double exact_cov = cross - mean0 * mean1;
  CHECK(exact_cov > 0.0);  // positive interaction

  const Mat x = gibbs_ising(theta, 40000, 5000, 20, 47);
  const double emp_cov =
      (x.col(0).array() * x.col(1).array()).mean() - x.col(0).mean() * x.col(1).mean();
  CHECK(emp_cov == doctest::Approx(exact_cov).epsilon(0.15));
  CHECK(emp_cov > 0.0);
}

TEST_CASE("gibbs_ising: thinned chain has low autocorrelation") {
  const int p = 5;
  const Mat x = gibbs_ising(SymMatrix::zero(p), 4000, 1000, p * p, 53);
  Vec sums = x.rowwise().sum();
  const double mean = sums.mean();
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i + 1 < sums.size(); ++i) {
    num += (sums(i) - mean) * (sums(i + 1) - mean);
  }
  for (int i = 0; i < sums.size(); ++i) den += (sums(i) - mean) * (sums(i) - mean);
  CHECK(std::abs(num / den) <= 0.1);
}

TEST_CASE("simulate_var: white noise, AR(1), shapes, stability check") {
  // All-zero transition: iid noise, negligible lag-1 autocorrelation.
  {
    const std::vector<Mat> lags = {Mat::Zero(2, 2)};
    const VarData data = simulate_var(lags, SymMatrix::identity(2), 10000, 59);
    for (int j = 0; j < 2; ++j) {
      const Vec col = data.trajectory.col(j);
      const double mean = col.mean();
      double num = 0.0;
      double den = 0.0;
      for (int i = 0; i + 1 < col.size(); ++i) num += (col(i) - mean) * (col(i + 1) - mean);
      for (int i = 0; i < col.size(); ++i) den += (col(i) - mean) * (col(i) - mean);
      CHECK(std::abs(num / den) <= 0.05);
    }
    CHECK(data.Y.rows() == 9999);
    CHECK(data.X.rows() == 9999);
    CHECK(data.X.cols() == 2);
  }

  // AR(1) with coefficient 0.5.
  {
    const std::vector<Mat> lags = {0.5 * Mat::Identity(1, 1)};
    const VarData data = simulate_var(lags, SymMatrix::identity(1), 10000, 61);
    const Vec col = data.trajectory.col(0);
    const double mean = col.mean();
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i + 1 < col.size(); ++i) num += (col(i) - mean) * (col(i + 1) - mean);
    for (int i = 0; i < col.size(); ++i) den += (col(i) - mean) * (col(i) - mean);
    CHECK(num / den == doctest::Approx(0.5).epsilon(0.1));
  }

  // Two lags: stacked X gains a second slab.
  {
    const std::vector<Mat> lags = {0.3 * Mat::Identity(2, 2), 0.2 * Mat::Identity(2, 2)};
    const VarData data = simulate_var(lags, SymMatrix::identity(2), 500, 67);
    CHECK(data.Y.rows() == 498);
    CHECK(data.X.cols() == 4);
  }

  const std::vector<Mat> unstable = {1.1 * Mat::Identity(2, 2)};
  CHECK_THROWS_WITH_AS(simulate_var(unstable, SymMatrix::identity(2), 100, 71),
                       doctest::Contains("unstable VAR"), std::invalid_argument);
}
