#include <doctest.h>

#include "oracles.hpp"
#include "sson/eigen_sym.hpp"
#include "sson/matrix.hpp"
#include "sson/matrix_io.hpp"
#include "sson/shrinkage.hpp"

#include <filesystem>
#include <fstream>
#include <random>

using namespace sson;

TEST_CASE("SymMatrix construction enforces symmetry and finiteness") {
  Mat ok(2, 2);
  ok << 1.0, 2.0, 2.0, 3.0;
  CHECK_NOTHROW(SymMatrix{ok});

  Mat asym(2, 2);
  asym << 1.0, 2.0, 2.5, 3.0;
  CHECK_THROWS_AS(SymMatrix{asym}, std::invalid_argument);

  Mat nan = ok;
  nan(0, 1) = nan(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(SymMatrix{nan}, std::invalid_argument);

  Mat rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(SymMatrix{rect}, std::invalid_argument);
}

TEST_CASE("BlockPartition grid covers, is disjoint, handles ragged edges") {
  const auto part = BlockPartition::grid(5, 2);
  CHECK(part.block_count() == 9);
  CHECK(part.block_side() == 2);

  // Explicit partitions get validated.
  CHECK_THROWS_AS(BlockPartition(2, {{0, 1, 0, 1}}), std::invalid_argument);  // misses (0,1)
  CHECK_THROWS_AS(BlockPartition(2, {{0, 2, 0, 2}, {0, 1, 0, 1}}), std::invalid_argument);
  CHECK_NOTHROW(BlockPartition(2, {{0, 2, 0, 2}}));

  const auto slabs = BlockPartition::column_slabs(6, 2);
  CHECK(slabs.block_count() == 3);
  for (const auto& b : slabs.blocks()) {
    CHECK(b.row0 == 0);
    CHECK(b.row1 == 6);
  }
}

TEST_CASE("sym_eigen: identity and diagonal cases") {
  const auto id = sym_eigen(SymMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id.eigenvalues(i) == doctest::Approx(1.0));
  CHECK((id.eigenvectors.transpose() * id.eigenvectors - Mat::Identity(3, 3)).norm() <
        1e-12);

  Mat d(2, 2);
  d << 5.0, 0.0, 0.0, -2.0;
  const auto res = sym_eigen(SymMatrix{d});
  CHECK(res.eigenvalues(0) == doctest::Approx(5.0));
  CHECK(res.eigenvalues(1) == doctest::Approx(-2.0));
  CHECK(std::abs(res.eigenvectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(res.eigenvectors(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eigen: reconstruction, orthonormality, trace identity") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 7;
    const Mat m = oracle::random_symmetric(gen, p, 2.0);
    const SymMatrix sm{m};
    const auto res = sym_eigen(sm);
    const double scale = 1e-8 * p * std::max(1.0, m.cwiseAbs().maxCoeff());
    const Mat recon =
        res.eigenvectors * res.eigenvalues.asDiagonal() * res.eigenvectors.transpose();
    CHECK((recon - m).norm() <= std::max(scale, 1e-8));
    CHECK((res.eigenvectors.transpose() * res.eigenvectors - Mat::Identity(p, p))
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
    CHECK(std::abs(res.eigenvalues.sum() - m.trace()) <= std::max(scale, 1e-10));
    for (int i = 0; i + 1 < p; ++i) CHECK(res.eigenvalues(i) >= res.eigenvalues(i + 1));
  }
}

TEST_CASE("sym_eigen matches an independent eigensolver") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    const int p = 6;
    const Mat m = oracle::random_symmetric(gen, p, 1.5);
    const auto res = sym_eigen(SymMatrix{m});
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    for (int i = 0; i < p; ++i) {
      CHECK(res.eigenvalues(i) == doctest::Approx(es.eigenvalues()(p - 1 - i)).epsilon(1e-9));
    }
  }
}

TEST_CASE("sym_eigen is deterministic") {
  std::mt19937 gen(3);
  const Mat m = oracle::random_symmetric(gen, 8);
  const auto a = sym_eigen(SymMatrix{m});
  const auto b = sym_eigen(SymMatrix{m});
  CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("soft_threshold basics and properties") {
  Mat m(1, 1);
  m << 3.0;
  CHECK(soft_threshold(m, 1.0)(0, 0) == doctest::Approx(2.0));
  m << -0.5;
  CHECK(soft_threshold(m, 1.0)(0, 0) == 0.0);

  std::mt19937 gen(5);
  const Mat r = oracle::random_matrix(gen, 4, 4, 2.0);
  CHECK((soft_threshold(r, 0.0) - r).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(soft_threshold(r, -0.1), std::invalid_argument);

  for (double b : {0.1, 0.7, 3.0}) {
    const Mat s = soft_threshold(r, b);
    CHECK(s.cwiseAbs().sum() <= r.cwiseAbs().sum());
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        CHECK((s(i, j) == 0.0 || s(i, j) * r(i, j) > 0.0));
      }
    }
  }
}

TEST_CASE("group_soft_threshold: forced cases") {
  Mat c(1, 1);
  c << 0.3;
  CHECK(group_soft_threshold(c, 0.25, 0.1)(0, 0) == 0.0);

  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 4.0;
  const Mat out = group_soft_threshold(d, 0.0, 1.0);
  CHECK(out(0, 0) == doctest::Approx(2.4));
  CHECK(out(1, 1) == doctest::Approx(3.2));

  // Tie at the boundary kills the block.
  Mat t(1, 1);
  t << 1.0;
  CHECK(group_soft_threshold(t, 0.0, 1.0)(0, 0) == 0.0);
}

TEST_CASE("group_soft_threshold matches coordinate-descent oracle") {
  std::mt19937 gen(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Mat c = oracle::random_matrix(gen, 3, 3, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.2);
    const double bi = u(gen);
    const double bg = u(gen);
    const Mat got = group_soft_threshold(c, bi, bg);
    const Mat want = oracle::sparse_group_prox_cd(c, bi, bg);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-4);
  }
}

TEST_CASE("group_soft_threshold reduces to its extremes") {
  std::mt19937 gen(23);
  const Mat c = oracle::random_matrix(gen, 3, 3, 1.0);
  CHECK((group_soft_threshold(c, 0.4, 0.0) - soft_threshold(c, 0.4)).norm() == 0.0);
  const Mat pure = group_soft_threshold(c, 0.0, 0.8);
  const double factor = std::max(1.0 - 0.8 / c.norm(), 0.0);
  CHECK((pure - factor * c).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("off_diag") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  CHECK(off_diag(d).cwiseAbs().maxCoeff() == 0.0);

  Mat m(2, 2);
  m << 1.0, 2.0, 3.0, 4.0;
  const Mat od = off_diag(m);
  CHECK(od(0, 1) == 2.0);
  CHECK(od(1, 0) == 3.0);
  CHECK(od(0, 0) == 0.0);
  CHECK((off_diag(od) - od).cwiseAbs().maxCoeff() == 0.0);

  Mat rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(off_diag(rect), std::invalid_argument);
}

TEST_CASE("psd_project: diagonal, fixed point, oracle match") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = -3.0;
  const SymMatrix proj = psd_project(SymMatrix{d});
  CHECK(proj(0, 0) == doctest::Approx(2.0));
  CHECK(proj(1, 1) == doctest::Approx(0.0));

  std::mt19937 gen(29);
  const Mat base = oracle::random_matrix(gen, 4, 4, 1.0);
  const Mat psd = base * base.transpose();
  const SymMatrix same = psd_project(SymMatrix::from_symmetric_part(psd));
  CHECK((same.mat() - psd).cwiseAbs().maxCoeff() <= 1e-10);

  for (int trial = 0; trial < 10; ++trial) {
    const Mat v = oracle::random_symmetric(gen, 5, 2.0);
    const Mat got = psd_project(SymMatrix{v}).mat();
    const Mat want = oracle::psd_project_eigen(v);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-8);
    Eigen::SelfAdjointEigenSolver<Mat> es(got);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("csv round trip and error reporting") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sson_io_test";
  fs::create_directories(dir);

  std::mt19937 gen(31);
  const Mat m = oracle::random_matrix(gen, 3, 4, 5.0);
  const std::string path = (dir / "m.csv").string();
  write_csv_matrix(path, m);
  const Mat back = read_csv_matrix(path);
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);

  {
    std::ofstream bad(dir / "bad.csv");
    bad << "1.0,2.0\n3.0,inf\n";
  }
  CHECK_THROWS_AS(read_csv_matrix((dir / "bad.csv").string()), IoError);
  CHECK_THROWS_AS(read_csv_matrix((dir / "missing.csv").string()), IoError);

  {
    std::ofstream ragged(dir / "ragged.csv");
    ragged << "1.0,2.0\n3.0\n";
  }
  CHECK_THROWS_AS(read_csv_matrix((dir / "ragged.csv").string()), IoError);
}

TEST_CASE("triplet format with and without header") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sson_io_test";
  fs::create_directories(dir);

  {
    std::ofstream t(dir / "t.mtx");
    t << "%%MatrixMarket matrix coordinate real general\n";
    t << "% comment\n";
    t << "3 3 2\n";
    t << "1 2 4.5\n";
    t << "3 3 -1.0\n";
  }
  const Mat m = read_triplet_matrix((dir / "t.mtx").string());
  CHECK(m.rows() == 3);
  CHECK(m(0, 1) == 4.5);
  CHECK(m(2, 2) == -1.0);
  CHECK(m(1, 0) == 0.0);

  {
    std::ofstream t(dir / "bare.txt");
    t << "1 2 4.5\n2 1 4.5\n2 2 1.0\n";
  }
  const Mat b = read_triplet_matrix((dir / "bare.txt").string());
  CHECK(b.rows() == 2);
  CHECK(b(0, 1) == 4.5);

  // Symmetric reader mirrors missing transposes.
  {
    std::ofstream t(dir / "sym.txt");
    t << "1 2 4.5\n2 2 1.0\n";
  }
  const SymMatrix s = read_triplet_sym((dir / "sym.txt").string());
  CHECK(s(1, 0) == 4.5);

  {
    std::ofstream t(dir / "nonfinite.txt");
    t << "1 1 nan\n";
  }
  CHECK_THROWS_AS(read_triplet_matrix((dir / "nonfinite.txt").string()), IoError);
}
