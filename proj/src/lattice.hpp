#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include "error.hpp"

namespace sc {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

template <class T>
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<T> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<long>> init) {
    rows = init.size();
    cols = rows ? init.begin()->size() : 0;
    for (auto& row : init) {
      if (row.size() != cols) throw Error(Errc::InvalidArgument, "ragged matrix literal");
      for (long v : row) a.emplace_back(v);
    }
  }

  T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
    return v;
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(a.begin() + i * cols, a.begin() + (i + 1) * cols);
  }

  bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

template <class T>
Matrix<T> operator*(const Matrix<T>& x, const Matrix<T>& y) {
  if (x.cols != y.rows) throw Error(Errc::InvalidArgument, "matrix product dimension mismatch");
  Matrix<T> r(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
    }
  return r;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& x, const std::vector<T>& v) {
  if (x.cols != v.size()) throw Error(Errc::InvalidArgument, "matrix-vector dimension mismatch");
  std::vector<T> r(x.rows, T(0));
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) r[i] += x(i, j) * v[j];
  return r;
}

RatMatrix to_rat(const IntMatrix& m);
RatVec to_rat(const IntVec& v);

struct SmithForm {
  IntMatrix U, D, V;  // U * A * V = D
};

// Smallest-absolute-value pivoting; D carries the divisibility chain with
// nonnegative diagonal.
SmithForm smith_normal_form(const IntMatrix& A);

struct AbelianPresentation {
  std::size_t free_rank = 0;
  IntVec invariant_factors;
  Int torsion_order() const;
};

AbelianPresentation cokernel(const IntMatrix& A);

// Columns form a basis of the integer kernel.
IntMatrix integer_kernel(const IntMatrix& A);

std::size_t rank(const IntMatrix& A);
Int determinant(const IntMatrix& A);

// Some solution of A x = b over Q (free variables set to zero); throws
// Errc::Inconsistent when none exists.
RatVec rational_solve(const RatMatrix& A, const RatVec& b);
RatMatrix inverse(const RatMatrix& A);

Rat frac(const Rat& x);
Int floor_rat(const Rat& x);
Int ceil_rat(const Rat& x);
Int lcm(const Int& a, const Int& b);
std::string to_string(const Rat& x);
std::string to_string(const Int& x);

}  // namespace sc
