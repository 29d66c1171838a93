#include "sson/eigen_sym.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace sson {
namespace {

// Householder reduction of a real symmetric matrix to tridiagonal form with
// accumulation of the orthogonal transform in z. On exit d holds the diagonal
// and e(1..n-1) the subdiagonal.
void tridiagonalize(Mat& z, Vec& d, Vec& e) {
  const int n = static_cast<int>(z.rows());
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
      if (scale == 0.0) {
        e(i) = z(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e(i) = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          z(j, i) = z(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
          for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
          e(j) = g / h;
          f += e(j) * z(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = z(i, j);
          g = e(j) - hh * f;
          e(j) = g;
          for (int k = 0; k <= j; ++k) z(j, k) -= f * e(k) + g * z(i, k);
        }
      }
    } else {
      e(i) = z(i, l);
    }
    d(i) = h;
  }
  d(0) = 0.0;
  e(0) = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d(i) != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
        for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
      }
    }
    d(i) = z(i, i);
    z(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) {
      z(j, i) = 0.0;
      z(i, j) = 0.0;
    }
  }
}

// Implicit-shift QL on the tridiagonal form, rotating the columns of z along.
// Throws after 30 sweeps for any single eigenvalue.
void ql_implicit(Mat& z, Vec& d, Vec& e) {
  const int n = static_cast<int>(z.rows());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int i = 1; i < n; ++i) e(i - 1) = e(i);
  e(n - 1) = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 30) {
          throw EigenFailure("sym_eigen: QL iteration exceeded 30 sweeps for eigenvalue " +
                             std::to_string(l) + " of a " + std::to_string(n) + "x" +
                             std::to_string(n) + " matrix");
        }
        double g = (d(l + 1) - d(l)) / (2.0 * e(l));
        double r = std::hypot(g, 1.0);
        g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e(i);
          const double b = c * e(i);
          r = std::hypot(f, g);
          e(i + 1) = r;
          if (r == 0.0) {
            d(i + 1) -= p;
            e(m) = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d(i + 1) - p;
          r = (d(i) - g) * s + 2.0 * c * b;
          p = s * r;
          d(i + 1) = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d(l) -= p;
        e(l) = g;
        e(m) = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EigenResult sym_eigen(const SymMatrix& m) {
  const int n = m.dim();
  if (n == 0) {
    throw std::invalid_argument("sym_eigen: empty matrix");
  }
  Mat z = m.mat();
  Vec d(n);
  Vec e(n);
  tridiagonalize(z, d, e);
  ql_implicit(z, d, e);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&d](int a, int b) { return d(a) > d(b); });

  EigenResult out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues(j) = d(order[j]);
    out.eigenvectors.col(j) = z.col(order[j]);
  }
  return out;
}

}  // namespace sson
