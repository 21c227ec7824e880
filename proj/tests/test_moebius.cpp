#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "heights.hpp"
#include "moebius.hpp"
#include "support.hpp"

using namespace sc;
using namespace sc::testing;

namespace {

// all tuples in {0..hi}^dim
void for_each_tuple(std::size_t dim, int hi, const std::function<void(const ExponentTuple&)>& fn) {
  ExponentTuple t(dim, 0);
  for (;;) {
    fn(t);
    std::size_t i = 0;
    while (i < dim && t[i] == hi) t[i++] = 0;
    if (i == dim) return;
    ++t[i];
  }
}

// membership of (p^lambda_rho ; p^lambda_Z) in the integral extended torsor
bool member_at(const GcdTest& gt, const OrbifoldPicard& o, const ExponentTuple& lambda, std::int64_t p) {
  std::vector<std::int64_t> y, k;
  auto pw = [&](int e) {
    std::int64_t v = 1;
    while (e--) v *= p;
    return v;
  };
  for (std::size_t rho = 0; rho < o.num_rays(); ++rho) y.push_back(pw(lambda[rho]));
  for (std::size_t z = 0; z < o.num_sectors(); ++z) k.push_back(pw(lambda[o.num_rays() + z]));
  return k_admissible(k) && gt(y.data(), k.data());
}

}  // namespace

TEST_CASE("excluded generators") {
  auto a = orbifold_basis(p1());
  CHECK(excluded_generators(a) == std::vector<ExponentTuple>{{1, 1}});
  auto b = orbifold_basis(weighted_projective({1, 2}));
  CHECK(excluded_generators(b) == std::vector<ExponentTuple>{{0, 0, 2}, {0, 1, 1}, {1, 1, 0}});
}

TEST_CASE("generators describe the local conditions") {
  for (auto w : {IntVec{1, 1}, IntVec{1, 2}, IntVec{1, 3}, IntVec{2, 3}, IntVec{1, 1, 2}, IntVec{1, 2, 3}}) {
    auto o = orbifold_basis(weighted_projective(w));
    auto gens = excluded_generators(o);
    GcdTest gt(o);
    for (std::int64_t p : {2, 3})
      for_each_tuple(o.num_ext(), 3, [&](const ExponentTuple& t) {
        CHECK(is_excluded(gens, t) == !member_at(gt, o, t, p));
      });
  }
}

TEST_CASE("local Moebius function") {
  auto b = orbifold_basis(weighted_projective({1, 2}));
  auto mu = local_moebius(b);
  CHECK(mu.at({0, 0, 0}) == 1);
  CHECK(mu.at({1, 0, 0}) == 0);
  CHECK(mu.at({0, 1, 0}) == 0);
  CHECK(mu.at({0, 0, 1}) == 0);
  CHECK(mu.at({1, 1, 0}) == -1);
  CHECK(mu.at({0, 1, 1}) == -1);
  CHECK(mu.at({0, 0, 2}) == -1);
  CHECK(mu.at({3, 0, 0}) == 0);
}

TEST_CASE("local Moebius function matches the recursion") {
  for (auto f : {p1(), weighted_projective({1, 2}), weighted_projective({1, 3}), weighted_projective({1, 1, 2}), p2(),
                 hirzebruch(1)}) {
    auto o = orbifold_basis(f);
    auto gens = excluded_generators(o);
    auto mu = local_moebius(o);
    const std::size_t m = o.num_ext();
    std::map<ExponentTuple, long> rec;
    // increasing lexicographic order visits every lower tuple first
    std::vector<ExponentTuple> all;
    for_each_tuple(m, 3, [&](const ExponentTuple& t) { all.push_back(t); });
    std::sort(all.begin(), all.end());
    for (auto& t : all) {
      long v = is_excluded(gens, t) ? 0 : 1;
      for (auto& [l, ml] : rec) {
        bool below = l != t;
        for (std::size_t i = 0; i < m && below; ++i) below = l[i] <= t[i];
        if (below) v -= ml;
      }
      rec[t] = v;
      CHECK(mu.at(t) == v);
    }
  }
}

TEST_CASE("local density polynomial") {
  auto a = local_density(local_moebius(orbifold_basis(p1())));
  CHECK(a.str() == "1 - x^2");
  auto b = local_density(local_moebius(orbifold_basis(weighted_projective({1, 2}))));
  CHECK(b.str() == "1 - 3x^2 + 2x^3");
  CHECK(b.coeffs[0] == 1);
  CHECK(b.coeffs[1] == 0);
  for (auto& f : fan_suite()) {
    auto d = local_density(local_moebius(orbifold_basis(f)));
    CHECK(d.coeffs[0] == 1);
    if (d.coeffs.size() > 1) CHECK(d.coeffs[1] == 0);
  }
}

TEST_CASE("inclusion-exclusion oracle") {
  auto a = orbifold_basis(p1());
  CHECK(density_ie_oracle(excluded_generators(a), 2) == Rat(3, 4));
  auto b = orbifold_basis(weighted_projective({1, 2}));
  CHECK(density_ie_oracle(excluded_generators(b), 2) == Rat(1, 2));
  CHECK(density_ie_oracle(excluded_generators(b), 3) == Rat(20, 27));
  for (auto& f : fan_suite()) {
    auto o = orbifold_basis(f);
    auto gens = excluded_generators(o);
    if (gens.size() > 16) continue;
    auto d = local_density(local_moebius(o));
    for (long p : {2, 3, 5, 7}) CHECK(d.eval(Rat(1, p)) == density_ie_oracle(gens, p));
  }
}

TEST_CASE("residue counting densities") {
  auto a = orbifold_basis(p1());
  CHECK(residue_density(a, 2, 2) == Rat(3, 4));
  auto b = orbifold_basis(weighted_projective({1, 2}));
  CHECK(residue_density(b, 2, 2) == Rat(1, 2));
  CHECK(residue_density(b, 2, 3) == Rat(1, 2));
  for (auto w : {IntVec{1, 1}, IntVec{1, 2}, IntVec{1, 3}}) {
    auto o = orbifold_basis(weighted_projective(w));
    auto d = local_density(local_moebius(o));
    for (long p : {2, 3}) {
      CHECK(residue_density(o, p, 2) == d.eval(Rat(1, p)));
      CHECK(residue_density(o, p, 3) == d.eval(Rat(1, p)));
    }
  }
  try {
    residue_density(b, 3, 3, 100);
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooLarge);
  }
}

TEST_CASE("global Moebius function") {
  auto b = orbifold_basis(weighted_projective({1, 2}));
  auto mu = local_moebius(b);
  CHECK(global_moebius(mu, {1, 1, 1}) == 1);
  CHECK(global_moebius(mu, {2, 2, 1}) == -1);
  CHECK(global_moebius(mu, {2, 2, 9}) == 1);
  CHECK(global_moebius(mu, {2, 1, 1}) == 0);
  CHECK(global_moebius(mu, {6, 6, 1}) == 1);
}

TEST_CASE("Moebius inversion reproduces the torsor indicator") {
  for (auto f : {p1(), weighted_projective({1, 2})}) {
    auto o = orbifold_basis(f);
    auto mu = local_moebius(o);
    GcdTest gt(o);
    const std::size_t m = o.num_ext();
    const int lim = 12;
    std::vector<std::int64_t> e(m, 1);
    std::size_t bad = 0;
    for (;;) {
      long s = 0;
      std::vector<std::int64_t> d(m, 1);
      for (;;) {
        bool divides = true;
        for (std::size_t i = 0; i < m; ++i) divides = divides && e[i] % d[i] == 0;
        if (divides) s += global_moebius(mu, d);
        std::size_t i = 0;
        while (i < m && d[i] == e[i]) d[i++] = 1;
        if (i == m) break;
        ++d[i];
      }
      std::vector<std::int64_t> k(e.begin() + long(o.num_rays()), e.end());
      bool in = k_admissible(k) && gt(e.data(), k.data());
      bad += s != (in ? 1 : 0);
      std::size_t i = 0;
      while (i < m && e[i] == lim) e[i++] = 1;
      if (i == m) break;
      ++e[i];
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("partial sums of the Moebius function grow slowly") {
  auto o = orbifold_basis(weighted_projective({1, 2}));
  auto mu = local_moebius(o);
  const std::size_t m = o.num_ext();
  const std::int64_t Y = 10000;
  std::vector<double> sums;
  for (std::int64_t bound : {std::int64_t(100), std::int64_t(1000), Y}) {
    long total = 0;
    std::vector<std::int64_t> d(m, 1);
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t prod) {
      if (i == m) {
        total += std::labs(global_moebius(mu, d));
        return;
      }
      for (std::int64_t v = 1; prod * v <= bound; ++v) {
        d[i] = v;
        rec(i + 1, prod * v);
      }
      d[i] = 1;
    };
    rec(0, 1);
    sums.push_back(double(total) / std::pow(double(bound), 0.75));
  }
  CHECK(sums[1] <= sums[0]);
  CHECK(sums[2] <= sums[1]);
}

TEST_CASE("archimedean density on the projective line") {
  auto o = orbifold_basis(p1());
  Domain ref = unit_box(o, {Rat(1)});
  auto est = archimedean_density(o, ref, 200000, 3);
  // quadrature of {1 <= max(|y0|,|y1|) <= e} on a midpoint grid
  const int N = 2000;
  const double L = std::exp(1.0), h = 2 * L / N;
  double area = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      double x = -L + (i + 0.5) * h, y = -L + (j + 0.5) * h;
      double m = std::max(std::fabs(x), std::fabs(y));
      if (m >= 1 && m <= L) area += h * h;
    }
  double quad = area / (2 * nu_measure(o.anticanonical, ref.lower, ref.upper));
  CHECK(std::fabs(quad - 4) < 0.01);
  CHECK(std::fabs(est.value - quad) < 4 * est.std_error + 0.01);
  CHECK(est.std_error > 0);
}

TEST_CASE("archimedean density does not depend on the reference box") {
  auto o = orbifold_basis(weighted_projective({1, 2}));
  RatVec u = default_u(o);
  Domain a = unit_box(o, u);
  Domain b{{0.5, -0.5}, {1.5, 0.5}, u};
  auto ea = archimedean_density(o, a, 200000, 11);
  auto eb = archimedean_density(o, b, 200000, 12);
  CHECK(std::fabs(ea.value - eb.value) < 3 * std::hypot(ea.std_error, eb.std_error));
  auto small = archimedean_density(o, a, 50000, 5);
  auto large = archimedean_density(o, a, 100000, 5);
  double ratio = large.std_error / small.std_error;
  CHECK(ratio > 0.62);
  CHECK(ratio < 0.80);
  auto again = archimedean_density(o, a, 50000, 5);
  CHECK(again.value == small.value);
  Domain flat{{0, 0}, {0, 1}, u};
  CHECK_THROWS_AS(archimedean_density(o, flat, 20000, 1), Error);
}

TEST_CASE("Tamagawa constant") {
  auto o = orbifold_basis(weighted_projective({1, 2}));
  auto t50 = tamagawa(o, 50, 20000, 1);
  auto t100 = tamagawa(o, 100, 20000, 1);
  auto t200 = tamagawa(o, 200, 20000, 1);
  CHECK(t100.euler_tail_rel <= t50.euler_tail_rel / 2);
  CHECK(t200.euler_tail_rel <= t100.euler_tail_rel / 2);
  auto t = tamagawa(o, 1000, 20000, 1);
  double direct = 1;
  for (auto p : primes_up_to(1000)) {
    double x = 1.0 / double(p);
    direct *= 1 - 3 * x * x + 2 * x * x * x;
  }
  CHECK(std::fabs(t.euler_product - direct) < 1e-12);
  CHECK(std::fabs(t.euler_product - 0.286857) < 1e-5);
  CHECK(t.group_order == 1);
  CHECK(std::fabs(t.value - t.mu_inf * t.euler_product) < 1e-12);
  auto gens = excluded_generators(o);
  for (long p : {2, 3, 5, 7, 11}) CHECK(t.density.eval(Rat(1, p)) == density_ie_oracle(gens, p));
}

TEST_CASE("primes and group order") {
  CHECK(primes_up_to(20) == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19});
  CHECK(group_order(p1()) == 1);
  CHECK(group_order(weighted_projective({2, 2})) == 2);
}
