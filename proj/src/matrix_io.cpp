#include "sson/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace sson {
namespace {

double parse_double(const std::string& token, const std::string& path, size_t line_no) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw IoError(path + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
  }
  if (pos != token.size()) {
    throw IoError(path + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
  }
  if (!std::isfinite(v)) {
    throw IoError(path + ":" + std::to_string(line_no) + ": non-finite value '" + token + "'");
  }
  return v;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Mat read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(body);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(parse_double(strip(cell), path, line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path + ":" + std::to_string(line_no) + ": ragged row (" +
                    std::to_string(row.size()) + " vs " +
                    std::to_string(rows.front().size()) + " columns)");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw IoError(path + ": empty matrix");
  }
  Mat m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_csv_matrix(std::ostream& os, const Mat& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

void write_csv_matrix(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  write_csv_matrix(out, m);
  if (!out) {
    throw IoError("write failed for '" + path + "'");
  }
}

namespace {

struct Triplet {
  int i;
  int j;
  double v;
};

std::vector<Triplet> read_triplets_impl(const std::string& path, int& rows, int& cols) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::vector<Triplet> entries;
  std::string line;
  size_t line_no = 0;
  bool saw_comment = false;
  bool want_size_line = false;
  rows = cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip(line);
    if (body.empty()) continue;
    if (body[0] == '%') {
      if (entries.empty() && rows == 0) {
        saw_comment = true;
        want_size_line = true;
      }
      continue;
    }
    std::stringstream ss(body);
    std::string a, b, c, extra;
    ss >> a >> b >> c;
    if (a.empty() || b.empty() || c.empty() || (ss >> extra)) {
      throw IoError(path + ":" + std::to_string(line_no) + ": expected 'i j value'");
    }
    if (saw_comment && want_size_line) {
      rows = static_cast<int>(parse_double(a, path, line_no));
      cols = static_cast<int>(parse_double(b, path, line_no));
      want_size_line = false;
      continue;  // third field is the entry count, informational only
    }
    Triplet t;
    t.i = static_cast<int>(parse_double(a, path, line_no));
    t.j = static_cast<int>(parse_double(b, path, line_no));
    t.v = parse_double(c, path, line_no);
    if (t.i < 1 || t.j < 1) {
      throw IoError(path + ":" + std::to_string(line_no) + ": indices are 1-based");
    }
    rows = std::max(rows, t.i);
    cols = std::max(cols, t.j);
    entries.push_back(t);
  }
  if (rows == 0 || cols == 0) {
    throw IoError(path + ": empty matrix");
  }
  return entries;
}

}  // namespace

Mat read_triplet_matrix(const std::string& path) {
  int rows = 0;
  int cols = 0;
  const auto entries = read_triplets_impl(path, rows, cols);
  Mat m = Mat::Zero(rows, cols);
  std::vector<char> set(static_cast<size_t>(rows) * cols, 0);
  for (const Triplet& t : entries) {
    char& cell = set[static_cast<size_t>(t.i - 1) * cols + (t.j - 1)];
    if (cell) {
      throw IoError(path + ": duplicate entry (" + std::to_string(t.i) + "," +
                    std::to_string(t.j) + ")");
    }
    cell = 1;
    m(t.i - 1, t.j - 1) = t.v;
  }
  return m;
}

SymMatrix read_triplet_sym(const std::string& path) {
  int rows = 0;
  int cols = 0;
  const auto entries = read_triplets_impl(path, rows, cols);
  const int p = std::max(rows, cols);
  Mat m = Mat::Zero(p, p);
  std::vector<char> set(static_cast<size_t>(p) * p, 0);
  for (const Triplet& t : entries) {
    char& cell = set[static_cast<size_t>(t.i - 1) * p + (t.j - 1)];
    if (cell) {
      throw IoError(path + ": duplicate entry (" + std::to_string(t.i) + "," +
                    std::to_string(t.j) + ")");
    }
    cell = 1;
    m(t.i - 1, t.j - 1) = t.v;
  }
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      const bool ij = set[static_cast<size_t>(i) * p + j];
      const bool ji = set[static_cast<size_t>(j) * p + i];
      if (ij && !ji) m(j, i) = m(i, j);
    }
  }
  return SymMatrix(std::move(m));
}

SymMatrix read_csv_sym(const std::string& path) {
  return SymMatrix(read_csv_matrix(path));
}

Vec read_csv_vector(const std::string& path) {
  const Mat m = read_csv_matrix(path);
  if (m.cols() != 1) {
    throw IoError(path + ": expected a single-column vector, got " +
                  std::to_string(m.cols()) + " columns");
  }
  return m.col(0);
}

void write_csv_vector(const std::string& path, const Vec& v) {
  write_csv_matrix(path, Mat(v));
}

}  // namespace sson
