#pragma once

// Small dense linear algebra: row-major matrix, LU solve with partial
// pivoting, and a cyclic Jacobi eigensolver for symmetric matrices. The
// systems in this toolkit stay below a few hundred unknowns.

#include <cmath>
#include <vector>

#include "weatherseq/core.hpp"

namespace wseq::linalg {

class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::vector<double> multiply(const std::vector<double>& v) const {
    std::vector<double> out(rows_, 0.0);
    for (size_t r = 0; r < rows_; ++r) {
      double s = 0;
      for (size_t c = 0; c < cols_; ++c) s += (*this)(r, c) * v[c];
      out[r] = s;
    }
    return out;
  }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// Solve A x = b by LU with partial pivoting. A is copied.
inline std::vector<double> solve(Matrix a, std::vector<double> b) {
  const size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw error("solve: dimension mismatch");
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;

  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    double best = std::abs(a(col, col));
    for (size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > best) {
        best = std::abs(a(r, col));
        pivot = r;
      }
    }
    if (best < 1e-300) throw error("solve: singular matrix");
    if (pivot != col) {
      for (size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (size_t r = col + 1; r < n; ++r) {
      double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      a(r, col) = 0.0;
      for (size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (size_t c = ri + 1; c < n; ++c) s -= a(ri, c) * x[c];
    x[ri] = s / a(ri, ri);
  }
  return x;
}

struct EigenResult {
  std::vector<double> values;         // descending
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k], orthonormal
};

// Cyclic Jacobi for symmetric matrices. Converges to off-diagonal norm below
// tol * frobenius; plenty for the 24x24 correlation matrices used here.
inline EigenResult symmetric_eigen(Matrix a, double tol = 1e-13, int max_sweeps = 100) {
  const size_t n = a.rows();
  if (a.cols() != n) throw error("symmetric_eigen: matrix not square");
  Matrix v = Matrix::identity(n);

  auto off_norm = [&]() {
    double s = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(2 * s);
  };
  double fro = 0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) fro += a(i, j) * a(i, j);
  fro = std::sqrt(fro);
  if (fro == 0) fro = 1;

  for (int sweep = 0; sweep < max_sweeps && off_norm() > tol * fro; ++sweep) {
    for (size_t p = 0; p + 1 < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1.0 / std::sqrt(t * t + 1);
        double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return a(x, x) > a(y, y); });

  EigenResult res;
  for (size_t k : order) {
    res.values.push_back(a(k, k));
    std::vector<double> vec(n);
    for (size_t r = 0; r < n; ++r) vec[r] = v(r, k);
    // deterministic sign: largest-magnitude entry positive
    size_t imax = 0;
    for (size_t r = 1; r < n; ++r)
      if (std::abs(vec[r]) > std::abs(vec[imax])) imax = r;
    if (vec[imax] < 0)
      for (double& x : vec) x = -x;
    res.vectors.push_back(std::move(vec));
  }
  return res;
}

}  // namespace wseq::linalg
