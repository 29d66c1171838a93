#pragma once

#include "sson/matrix.hpp"

#include <iosfwd>
#include <string>

namespace sson {

/// Formats a double with 17 significant digits (lossless round-trip).
std::string format_double(double v);

/// CSV: one row per line, comma-separated, '.' decimal point.
Mat read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Mat& m);
void write_csv_matrix(std::ostream& os, const Mat& m);

/// Coordinate triplets "i j value" (1-based), zeros elsewhere. Lines starting
/// with '%' are skipped; when a comment banner is present the first
/// non-comment line must be a "rows cols nnz" size line (Matrix Market
/// style), otherwise dimensions come from the largest index seen.
Mat read_triplet_matrix(const std::string& path);

/// Triplet read for symmetric data: entries given for only one of
/// (i,j)/(j,i) are mirrored, then the symmetry invariant is enforced.
SymMatrix read_triplet_sym(const std::string& path);

SymMatrix read_csv_sym(const std::string& path);

/// Vector as a single CSV column.
Vec read_csv_vector(const std::string& path);
void write_csv_vector(const std::string& path, const Vec& v);

}  // namespace sson
