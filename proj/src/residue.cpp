#include "residue.hpp"

#include "heights.hpp"

#include <algorithm>
#include <numeric>

namespace sc {

std::vector<Int> prime_divisors(const Int& n0) {
  Int n = abs(n0);
  std::vector<Int> out;
  if (n == 0) return out;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

int valuation(const Int& x, const Int& p) {
  if (x == 0) throw Error(Errc::InvalidArgument, "valuation of zero");
  Int y = x;
  int v = 0;
  while (y % p == 0) y /= p, ++v;
  return v;
}

AgeEngine::AgeEngine(const OrbifoldPicard& orb) : orb_(&orb) {
  const std::size_t n = orb.fan.n_rank;
  all_.push_back(BoxSector{IntVec(n, Int(0)), IntVec(), Cone(), RatVec(), Int(1)});
  lifts_.push_back(RatVec(orb.num_rays(), Rat(0)));
  for (std::size_t z = 0; z < orb.sectors.size(); ++z) {
    all_.push_back(orb.sectors[z]);
    lifts_.push_back(orb.lift[z]);
  }
  for (auto& b : all_) {
    RatVec a;
    for (auto& rep : orb.pic.basis_reps) a.push_back(age_numeric(b, rep));
    ages_.push_back(a);
  }
  for (auto& c : orb.fan.max_cones) {
    IntMatrix B(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) B(i, j) = orb.fan.ray_free[c[j]][i];
    RatMatrix inv = inverse(to_rat(B));
    std::vector<RatVec> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back(inv.row(i));
    cone_inv_.push_back(rows);
  }
}

AgeVector AgeEngine::age_valuation(const RatVec& y, const Int& p) const {
  const auto& fan = orb_->fan;
  const std::size_t r = fan.num_rays(), n = fan.n_rank;
  if (y.size() != r) throw Error(Errc::InvalidArgument, "tuple length");
  std::vector<int> zeros;
  RatVec w(r, Rat(0));
  for (std::size_t rho = 0; rho < r; ++rho) {
    if (y[rho] == 0) {
      zeros.push_back(int(rho));
      continue;
    }
    w[rho] = valuation(Int(y[rho].get_num()), p) - valuation(Int(y[rho].get_den()), p);
  }
  auto cones = fan.cones_containing(zeros);
  if (cones.empty()) throw Error(Errc::DegeneratePoint, "point lies in the exceptional set");
  RatVec v(n, Rat(0));
  for (std::size_t rho = 0; rho < r; ++rho)
    if (y[rho] != 0)
      for (std::size_t i = 0; i < n; ++i) v[i] += w[rho] * Rat(fan.ray_free[rho][i]);
  for (int ci : cones) {
    const Cone& c = fan.max_cones[ci];
    RatVec coords(n, Rat(0));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) coords[j] += cone_inv_[ci][j][i] * v[i];
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j)
      if (y[c[j]] != 0 && coords[j] < 0) ok = false;
    if (!ok) continue;
    AgeVector vec = w;
    for (std::size_t j = 0; j < n; ++j) vec[c[j]] -= coords[j];
    return vec;
  }
  throw Error(Errc::NoFeasibleCone, "no cone holds the nonnegative representative");
}

std::size_t AgeEngine::sector_at(const AgeVector& a) const {
  RatVec f;
  for (auto& rep : orb_->pic.basis_reps) {
    Rat s = 0;
    for (std::size_t rho = 0; rho < rep.size(); ++rho) s += a[rho] * Rat(rep[rho]);
    f.push_back(frac(s));
  }
  for (std::size_t i = 0; i < ages_.size(); ++i)
    if (ages_[i] == f) return i;
  throw Error(Errc::NoMatchingSector, "age functional matches no sector");
}

Int AgeEngine::ramification_degree(const AgeVector& a) const {
  Int d = 1;
  for (auto& rep : orb_->pic.basis_reps) {
    Rat s = 0;
    for (std::size_t rho = 0; rho < rep.size(); ++rho) s += a[rho] * Rat(rep[rho]);
    d = lcm(d, Int(s.get_den()));
  }
  return d;
}

namespace {

std::vector<Int> relevant_primes(const RatVec& y) {
  std::vector<Int> ps;
  for (auto& x : y) {
    if (x == 0) continue;
    for (auto& p : prime_divisors(Int(x.get_num()))) ps.push_back(p);
    for (auto& p : prime_divisors(Int(x.get_den()))) ps.push_back(p);
  }
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

}  // namespace

std::pair<bool, SectorFamily> AgeEngine::in_naive_torsor(const RatVec& y) const {
  std::vector<int> zeros;
  for (std::size_t rho = 0; rho < y.size(); ++rho)
    if (y[rho] == 0) zeros.push_back(int(rho));
  if (!orb_->fan.in_some_cone(zeros))
    throw Error(Errc::DegeneratePoint, "point lies in the exceptional set");
  SectorFamily fam;
  for (auto& p : relevant_primes(y)) {
    AgeVector a = age_valuation(y, p);
    std::size_t idx = sector_at(a);
    if (a != lifts_[idx]) return {false, fam};
    if (idx > 0) fam[p] = idx - 1;
  }
  return {true, fam};
}

RatVec AgeEngine::normalize(const RatVec& y) const {
  RatVec out = y;
  for (auto& p : relevant_primes(y)) {
    AgeVector a = age_valuation(y, p);
    std::size_t idx = sector_at(a);
    for (std::size_t rho = 0; rho < y.size(); ++rho) {
      Rat delta = a[rho] - lifts_[idx][rho];
      if (delta.get_den() != 1) throw Error(Errc::Inconsistent, "non-integral age shift");
      long e = delta.get_num().get_si();
      Int pw;
      mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), std::labs(e));
      out[rho] *= e > 0 ? Rat(1) / Rat(pw) : Rat(pw);
    }
  }
  return out;
}

bool squarefree(std::int64_t k) {
  if (k < 0) k = -k;
  for (std::int64_t p = 2; p * p <= k; ++p) {
    if (k % p) continue;
    k /= p;
    if (k % p == 0) return false;
  }
  return true;
}

bool k_admissible(const std::vector<std::int64_t>& k) {
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!squarefree(k[i])) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (std::gcd(k[i], k[j]) != 1) return false;
  }
  return true;
}

bool AgeEngine::in_extended_torsor_age(const IntVec& y, const IntVec& k) const {
  std::vector<std::int64_t> kk;
  for (auto& x : k) {
    if (x == 0) throw Error(Errc::ZeroK, "sector coordinate is zero");
    kk.push_back(x.get_si());
  }
  if (!k_admissible(kk)) return false;
  SectorFamily expected;
  for (std::size_t z = 0; z < k.size(); ++z)
    for (auto& p : prime_divisors(k[z])) expected[p] = z;
  auto [ok, fam] = in_naive_torsor(r2(*orb_, y, k));
  return ok && fam == expected;
}

GcdTest::GcdTest(const OrbifoldPicard& orb) : r_(orb.num_rays()), s_(orb.num_sectors()) {
  prim_ = orb.primitive;
  for (auto& Z : orb.sectors) {
    std::vector<std::vector<int>> red;
    for (auto& C : prim_) {
      std::vector<int> d;
      for (int rho : C)
        if (!std::binary_search(Z.carrier.begin(), Z.carrier.end(), rho)) d.push_back(rho);
      red.push_back(d);
    }
    reduced_.push_back(red);
  }
}

bool GcdTest::exceptional(const std::int64_t* y) const {
  for (auto& C : prim_) {
    bool all0 = true;
    for (int rho : C) all0 = all0 && y[rho] == 0;
    if (all0) return true;
  }
  return false;
}

bool GcdTest::operator()(const std::int64_t* y, const std::int64_t* k) const {
  std::int64_t K = 1;
  for (std::size_t z = 0; z < s_; ++z) K *= k[z] < 0 ? -k[z] : k[z];
  for (auto& C : prim_) {
    std::int64_t g = 0;
    for (int rho : C) g = std::gcd(g, y[rho]);
    if (g == 0) return false;
    for (std::int64_t d; (d = std::gcd(g, K)) > 1;) g /= d;
    if (g != 1) return false;
  }
  for (std::size_t z = 0; z < s_; ++z) {
    std::int64_t kz = k[z] < 0 ? -k[z] : k[z];
    if (kz == 1) continue;
    for (auto& red : reduced_[z]) {
      std::int64_t g = 0;
      for (int rho : red) g = std::gcd(g, y[rho]);
      if (std::gcd(g, kz) != 1) return false;
    }
  }
  return true;
}

bool in_extended_torsor_gcd(const OrbifoldPicard& orb, const IntVec& y, const IntVec& k) {
  std::vector<std::int64_t> yy, kk;
  for (auto& x : y) yy.push_back(x.get_si());
  for (auto& x : k) {
    if (x == 0) throw Error(Errc::ZeroK, "sector coordinate is zero");
    kk.push_back(x.get_si());
  }
  if (!k_admissible(kk)) return false;
  return GcdTest(orb)(yy.data(), kk.data());
}

bool in_extended_torsor_age(const OrbifoldPicard& orb, const IntVec& y, const IntVec& k) {
  return AgeEngine(orb).in_extended_torsor_age(y, k);
}

}  // namespace sc
