#include "sson/matrix.hpp"

#include <cmath>

namespace sson {

void require_finite(const Mat& m, const std::string& what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(what + ": non-finite entries");
  }
}

void require_finite(const Vec& v, const std::string& what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(what + ": non-finite entries");
  }
}

SymMatrix::SymMatrix(Mat m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("SymMatrix: input is " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()) + ", expected square");
  }
  require_finite(m, "SymMatrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw std::invalid_argument("SymMatrix: asymmetric input (max |m - m^T| = " +
                                std::to_string(asym) + ")");
  }
  // Mirror the upper triangle so the symmetry invariant holds exactly.
  const int p = static_cast<int>(m.rows());
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      m(j, i) = m(i, j);
    }
  }
  m_ = std::move(m);
}

SymMatrix SymMatrix::identity(int p) {
  SymMatrix s;
  s.m_ = Mat::Identity(p, p);
  return s;
}

SymMatrix SymMatrix::zero(int p) {
  SymMatrix s;
  s.m_ = Mat::Zero(p, p);
  return s;
}

SymMatrix SymMatrix::from_symmetric_part(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("SymMatrix::from_symmetric_part: non-square input");
  }
  require_finite(m, "SymMatrix::from_symmetric_part");
  SymMatrix s;
  s.m_ = 0.5 * (m + m.transpose());
  return s;
}

BlockPartition::BlockPartition(int dim, std::vector<IndexRect> blocks, int block_side_hint)
    : dim_(dim), block_side_(block_side_hint), blocks_(std::move(blocks)) {
  if (dim <= 0) {
    throw std::invalid_argument("BlockPartition: dim must be positive");
  }
  // Disjointness and off-diagonal coverage, checked via an occupancy bitmap.
  std::vector<char> seen(static_cast<size_t>(dim) * dim, 0);
  for (const IndexRect& b : blocks_) {
    if (b.row0 < 0 || b.col0 < 0 || b.row1 > dim || b.col1 > dim ||
        b.row0 >= b.row1 || b.col0 >= b.col1) {
      throw std::invalid_argument("BlockPartition: block out of range or empty");
    }
    for (int i = b.row0; i < b.row1; ++i) {
      for (int j = b.col0; j < b.col1; ++j) {
        char& cell = seen[static_cast<size_t>(i) * dim + j];
        if (cell) {
          throw std::invalid_argument("BlockPartition: overlapping blocks at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
        }
        cell = 1;
      }
    }
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (i != j && !seen[static_cast<size_t>(i) * dim + j]) {
        throw std::invalid_argument("BlockPartition: off-diagonal position (" +
                                    std::to_string(i) + "," + std::to_string(j) +
                                    ") not covered");
      }
    }
  }
}

BlockPartition BlockPartition::grid(int dim, int side) {
  if (dim <= 0 || side <= 0) {
    throw std::invalid_argument("BlockPartition::grid: dim and side must be positive");
  }
  std::vector<IndexRect> blocks;
  for (int i = 0; i < dim; i += side) {
    for (int j = 0; j < dim; j += side) {
      blocks.push_back({i, std::min(i + side, dim), j, std::min(j + side, dim)});
    }
  }
  return BlockPartition(dim, std::move(blocks), side);
}

BlockPartition BlockPartition::column_slabs(int dim, int width) {
  if (dim <= 0 || width <= 0) {
    throw std::invalid_argument("BlockPartition::column_slabs: dim and width must be positive");
  }
  std::vector<IndexRect> blocks;
  for (int j = 0; j < dim; j += width) {
    blocks.push_back({0, dim, j, std::min(j + width, dim)});
  }
  return BlockPartition(dim, std::move(blocks), width);
}

}  // namespace sson
