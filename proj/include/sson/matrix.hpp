#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace sson {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Thrown when the symmetric eigensolver fails to converge.
struct EigenFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown on malformed or non-finite input files.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_finite(const Mat& m, const std::string& what);
void require_finite(const Vec& v, const std::string& what);

/// Dense symmetric matrix. Construction rejects asymmetric or non-finite
/// input; storage is mirrored so entries(i,j) == entries(j,i) holds exactly.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Mat m);

  static SymMatrix identity(int p);
  static SymMatrix zero(int p);
  /// Builds (m + m^T)/2 without the asymmetry check. Intended for results of
  /// floating-point arithmetic that are symmetric up to rounding.
  static SymMatrix from_symmetric_part(const Mat& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Mat& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Mat m_;
};

/// Half-open index rectangle [row0,row1) x [col0,col1).
struct IndexRect {
  int row0 = 0;
  int row1 = 0;
  int col0 = 0;
  int col1 = 0;

  int rows() const { return row1 - row0; }
  int cols() const { return col1 - col0; }
};

/// Tiling of a p x p index grid into disjoint blocks that jointly cover all
/// off-diagonal positions. Diagonal positions may be covered; operations that
/// consume a partition mask them out.
class BlockPartition {
 public:
  BlockPartition(int dim, std::vector<IndexRect> blocks, int block_side_hint = 0);

  /// Contiguous side x side tiles in row-major order, ragged last row/column.
  static BlockPartition grid(int dim, int side);
  /// Full-height column slabs of the given width, ragged last slab. Used to
  /// group coefficients per lag in stacked autoregression problems.
  static BlockPartition column_slabs(int dim, int width);

  int dim() const { return dim_; }
  int block_side() const { return block_side_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<IndexRect>& blocks() const { return blocks_; }

 private:
  int dim_ = 0;
  int block_side_ = 0;
  std::vector<IndexRect> blocks_;
};

struct EigenResult {
  Vec eigenvalues;   // descending
  Mat eigenvectors;  // orthonormal columns, same order
};

}  // namespace sson
