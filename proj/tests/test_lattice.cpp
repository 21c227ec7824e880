#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lattice.hpp"

using namespace sc;

namespace {

bool is_diagonal_chain(const IntMatrix& D) {
  for (std::size_t i = 0; i < D.rows; ++i)
    for (std::size_t j = 0; j < D.cols; ++j)
      if (i != j && D(i, j) != 0) return false;
  std::size_t k = std::min(D.rows, D.cols);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (D(i, i) < 0) return false;
    if (D(i, i) == 0 && D(i + 1, i + 1) != 0) return false;
    if (D(i, i) != 0 && D(i + 1, i + 1) % D(i, i) != 0) return false;
  }
  return true;
}

IntMatrix random_matrix(std::mt19937& g, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix A(r, c);
  for (auto& x : A.a) x = d(g);
  return A;
}

IntMatrix random_unimodular(std::mt19937& g, std::size_t n) {
  IntMatrix U = IntMatrix::identity(n);
  std::uniform_int_distribution<int> pick(0, int(n) - 1), mult(-2, 2);
  for (int step = 0; step < 6; ++step) {
    int i = pick(g), j = pick(g);
    if (i == j) continue;
    int m = mult(g);
    for (std::size_t c = 0; c < n; ++c) U(i, c) += m * U(j, c);
  }
  return U;
}

}  // namespace

TEST_CASE("smith normal form examples") {
  SUBCASE("zero") {
    auto s = smith_normal_form(IntMatrix{{0}});
    CHECK(s.D == IntMatrix{{0}});
    CHECK(s.U == IntMatrix{{1}});
    CHECK(s.V == IntMatrix{{1}});
  }
  SUBCASE("2x2") {
    auto s = smith_normal_form(IntMatrix{{2, 4}, {6, 8}});
    CHECK(s.D == IntMatrix{{2, 0}, {0, 4}});
  }
  SUBCASE("identity") {
    auto s = smith_normal_form(IntMatrix::identity(3));
    CHECK(s.D == IntMatrix::identity(3));
  }
}

TEST_CASE("smith normal form on random matrices") {
  std::mt19937 g(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + g() % 4, c = 1 + g() % 4;
    IntMatrix A = random_matrix(g, r, c, -6, 6);
    auto s = smith_normal_form(A);
    CHECK(s.U * A * s.V == s.D);
    CHECK(abs(determinant(s.U)) == 1);
    CHECK(abs(determinant(s.V)) == 1);
    CHECK(is_diagonal_chain(s.D));
  }
}

TEST_CASE("cokernel") {
  auto a = cokernel(IntMatrix{{2}});
  CHECK(a.free_rank == 0);
  CHECK(a.invariant_factors == IntVec{2});

  auto b = cokernel(IntMatrix{{2}, {-1}});
  CHECK(b.free_rank == 1);
  CHECK(b.invariant_factors.empty());

  auto c = cokernel(IntMatrix(2, 0));
  CHECK(c.free_rank == 2);
  CHECK(c.torsion_order() == 1);

  auto d = cokernel(IntMatrix{{2, 0}, {0, 6}});
  CHECK(d.invariant_factors == IntVec{2, 6});
  CHECK(d.torsion_order() == 12);
}

TEST_CASE("cokernel is invariant under unimodular changes") {
  std::mt19937 g(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t r = 1 + g() % 4, c = 1 + g() % 4;
    IntMatrix A = random_matrix(g, r, c, -5, 5);
    auto base = cokernel(A);
    auto moved = cokernel(random_unimodular(g, r) * A * random_unimodular(g, c));
    CHECK(base.free_rank == moved.free_rank);
    CHECK(base.invariant_factors == moved.invariant_factors);
  }
}

TEST_CASE("integer kernel") {
  auto k1 = integer_kernel(IntMatrix{{1, 1}});
  REQUIRE(k1.cols == 1);
  CHECK(abs(k1(0, 0)) == 1);
  CHECK(k1(0, 0) == -k1(1, 0));

  auto k2 = integer_kernel(IntMatrix{{2, -1}});
  REQUIRE(k2.cols == 1);
  CHECK(k2(1, 0) == 2 * k2(0, 0));
  CHECK(abs(k2(0, 0)) == 1);

  CHECK(integer_kernel(IntMatrix::identity(2)).cols == 0);
}

TEST_CASE("integer kernel on random matrices") {
  std::mt19937 g(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t r = 1 + g() % 3, c = 1 + g() % 5;
    IntMatrix A = random_matrix(g, r, c, -4, 4);
    IntMatrix K = integer_kernel(A);
    CHECK(K.cols == c - rank(A));
    IntMatrix Z = A * K;
    for (auto& x : Z.a) CHECK(x == 0);
    if (K.cols) {
      // saturated: the kernel lattice has no torsion cokernel inside Z^c
      auto co = cokernel(K);
      CHECK(co.invariant_factors.empty());
    }
  }
}

TEST_CASE("rational solve") {
  auto x = rational_solve(to_rat(IntMatrix{{2}}), RatVec{Rat(1)});
  CHECK(x == RatVec{Rat(1, 2)});
  auto y = rational_solve(to_rat(IntMatrix{{2}}), RatVec{Rat(5)});
  CHECK(y == RatVec{Rat(5, 2)});
  CHECK_THROWS_AS(rational_solve(to_rat(IntMatrix{{0}}), RatVec{Rat(1)}), Error);
  try {
    rational_solve(to_rat(IntMatrix{{0}}), RatVec{Rat(1)});
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Inconsistent);
  }
}

TEST_CASE("rational solve reproduces the right-hand side") {
  std::mt19937 g(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + g() % 4;
    IntMatrix A = random_matrix(g, n, n, -5, 5);
    if (determinant(A) == 0) continue;
    RatVec b;
    for (std::size_t i = 0; i < n; ++i) {
      b.push_back(Rat(int(g() % 11) - 5, 1 + g() % 3));
      b.back().canonicalize();
    }
    RatVec x = rational_solve(to_rat(A), b);
    CHECK(to_rat(A) * x == b);
    RatMatrix inv = inverse(to_rat(A));
    CHECK(inv * b == x);
  }
}

TEST_CASE("rounding helpers") {
  CHECK(floor_rat(Rat(-3, 2)) == -2);
  CHECK(ceil_rat(Rat(-3, 2)) == -1);
  CHECK(frac(Rat(-1, 3)) == Rat(2, 3));
  CHECK(frac(Rat(7, 3)) == Rat(1, 3));
  CHECK(lcm(Int(4), Int(6)) == 12);
  CHECK(to_string(Rat(3, 2)) == "3/2");
}
