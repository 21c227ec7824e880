#include "lattice.hpp"

#include <utility>

namespace sc {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotSimplicial: return "NotSimplicial";
    case Errc::NotComplete: return "NotComplete";
    case Errc::ZeroRay: return "ZeroRay";
    case Errc::DuplicateRay: return "DuplicateRay";
    case Errc::BadWeights: return "BadWeights";
    case Errc::Inconsistent: return "Inconsistent";
    case Errc::TorsionPicard: return "TorsionPicard";
    case Errc::NonIntegralExponent: return "NonIntegralExponent";
    case Errc::NoInteriorPoint: return "NoInteriorPoint";
    case Errc::ZeroTuple: return "ZeroTuple";
    case Errc::DegeneratePoint: return "DegeneratePoint";
    case Errc::ZeroK: return "ZeroK";
    case Errc::NoFeasibleCone: return "NoFeasibleCone";
    case Errc::NoMatchingSector: return "NoMatchingSector";
    case Errc::TooLarge: return "TooLarge";
    case Errc::DegenerateReference: return "DegenerateReference";
    case Errc::Budget: return "Budget";
  }
  return "Unknown";
}

RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = Rat(m.a[i]);
  return r;
}

RatVec to_rat(const IntVec& v) {
  RatVec r;
  r.reserve(v.size());
  for (auto& x : v) r.emplace_back(x);
  return r;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < m.cols; ++c) std::swap(m(i, c), m(j, c));
}

void swap_cols(IntMatrix& m, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < m.rows; ++r) std::swap(m(r, i), m(r, j));
}

// row_i -= q * row_j
void axpy_row(IntMatrix& m, std::size_t i, std::size_t j, const Int& q) {
  for (std::size_t c = 0; c < m.cols; ++c) m(i, c) -= q * m(j, c);
}

void axpy_col(IntMatrix& m, std::size_t i, std::size_t j, const Int& q) {
  for (std::size_t r = 0; r < m.rows; ++r) m(r, i) -= q * m(r, j);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A) {
  SmithForm s{IntMatrix::identity(A.rows), A, IntMatrix::identity(A.cols)};
  IntMatrix& D = s.D;
  const std::size_t m = A.rows, n = A.cols;
  for (std::size_t t = 0; t < m && t < n; ++t) {
    for (;;) {
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (D(i, j) != 0 && (pi == m || abs(D(i, j)) < abs(D(pi, pj)))) pi = i, pj = j;
      if (pi == m) return s;
      swap_rows(D, t, pi);
      swap_rows(s.U, t, pi);
      swap_cols(D, t, pj);
      swap_cols(s.V, t, pj);

      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        Int q = D(i, t) / D(t, t);
        axpy_row(D, i, t, q);
        axpy_row(s.U, i, t, q);
        if (D(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        Int q = D(t, j) / D(t, t);
        axpy_col(D, j, t, q);
        axpy_col(s.V, j, t, q);
        if (D(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (D(i, j) % D(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      // row_t += row_bad, then re-reduce
      axpy_row(D, t, bad, Int(-1));
      axpy_row(s.U, t, bad, Int(-1));
    }
    if (D(t, t) < 0) {
      for (std::size_t c = 0; c < n; ++c) D(t, c) = -D(t, c);
      for (std::size_t c = 0; c < m; ++c) s.U(t, c) = -s.U(t, c);
    }
  }
  return s;
}

Int AbelianPresentation::torsion_order() const {
  Int o = 1;
  for (auto& f : invariant_factors) o *= f;
  return o;
}

std::size_t rank(const IntMatrix& A) {
  auto s = smith_normal_form(A);
  std::size_t r = 0;
  for (std::size_t i = 0; i < A.rows && i < A.cols; ++i)
    if (s.D(i, i) != 0) ++r;
  return r;
}

AbelianPresentation cokernel(const IntMatrix& A) {
  auto s = smith_normal_form(A);
  AbelianPresentation p;
  std::size_t r = 0;
  for (std::size_t i = 0; i < A.rows && i < A.cols; ++i) {
    if (s.D(i, i) == 0) continue;
    ++r;
    if (s.D(i, i) > 1) p.invariant_factors.push_back(s.D(i, i));
  }
  p.free_rank = A.rows - r;
  return p;
}

IntMatrix integer_kernel(const IntMatrix& A) {
  auto s = smith_normal_form(A);
  std::size_t r = 0;
  for (std::size_t i = 0; i < A.rows && i < A.cols; ++i)
    if (s.D(i, i) != 0) ++r;
  IntMatrix K(A.cols, A.cols - r);
  for (std::size_t j = r; j < A.cols; ++j)
    for (std::size_t i = 0; i < A.cols; ++i) K(i, j - r) = s.V(i, j);
  return K;
}

Int determinant(const IntMatrix& A) {
  if (A.rows != A.cols) throw Error(Errc::InvalidArgument, "determinant of a non-square matrix");
  RatMatrix m = to_rat(A);
  const std::size_t n = m.rows;
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rat f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return Int(det.get_num());
}

RatVec rational_solve(const RatMatrix& A, const RatVec& b) {
  if (A.rows != b.size()) throw Error(Errc::InvalidArgument, "rhs length mismatch");
  const std::size_t m = A.rows, n = A.cols;
  RatMatrix M(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) M(i, j) = A(i, j);
    M(i, n) = b[i];
  }
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && M(p, c) == 0) ++p;
    if (p == m) continue;
    for (std::size_t j = 0; j <= n; ++j) std::swap(M(p, j), M(r, j));
    Rat inv = 1 / M(r, c);
    for (std::size_t j = c; j <= n; ++j) M(r, j) *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || M(i, c) == 0) continue;
      Rat f = M(i, c);
      for (std::size_t j = c; j <= n; ++j) M(i, j) -= f * M(r, j);
    }
    pivcol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i)
    if (M(i, n) != 0) throw Error(Errc::Inconsistent, "linear system has no rational solution");
  RatVec x(n, Rat(0));
  for (std::size_t i = 0; i < r; ++i) x[pivcol[i]] = M(i, n);
  return x;
}

RatMatrix inverse(const RatMatrix& A) {
  if (A.rows != A.cols) throw Error(Errc::InvalidArgument, "inverse of a non-square matrix");
  const std::size_t n = A.rows;
  RatMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    RatVec e(n, Rat(0));
    e[j] = 1;
    RatVec x = rational_solve(A, e);
    RatVec check = A * x;
    if (check != e) throw Error(Errc::Inconsistent, "matrix is singular");
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = x[i];
  }
  return inv;
}

Int floor_rat(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Int ceil_rat(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Rat frac(const Rat& x) { return x - Rat(floor_rat(x)); }

Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

std::string to_string(const Rat& x) { return x.get_str(); }
std::string to_string(const Int& x) { return x.get_str(); }

}  // namespace sc
