#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "picard.hpp"

namespace sc {

// Functional age_p(y, -) on Pic as a vector over the rays with
// sum vec_rho b_rho = 0. Sign convention: vec = w - c where w are the
// p-adic valuations and c the nonnegative cone representative of sum w b.
using AgeVector = RatVec;

// prime -> index into OrbifoldPicard::sectors
using SectorFamily = std::map<Int, std::size_t>;

class AgeEngine {
 public:
  explicit AgeEngine(const OrbifoldPicard& orb);

  AgeVector age_valuation(const RatVec& y, const Int& p) const;
  // index into all_sectors() (0 is the zero sector)
  std::size_t sector_at(const AgeVector& a) const;
  Int ramification_degree(const AgeVector& a) const;
  std::pair<bool, SectorFamily> in_naive_torsor(const RatVec& y) const;
  bool in_extended_torsor_age(const IntVec& y, const IntVec& k) const;
  // multiply out the integral part of the age so that y lands in the naive torsor
  RatVec normalize(const RatVec& y) const;

  const std::vector<BoxSector>& all_sectors() const { return all_; }
  // d(Z) for index into all_sectors()
  const RatVec& lift(std::size_t i) const { return lifts_[i]; }

 private:
  const OrbifoldPicard* orb_;
  std::vector<BoxSector> all_;
  std::vector<RatVec> lifts_;
  std::vector<RatVec> ages_;  // per sector, ages on the basis reps
  std::vector<std::vector<RatVec>> cone_inv_;
};

std::vector<Int> prime_divisors(const Int& n);
int valuation(const Int& x, const Int& p);

// Gcd-side membership in the extended torsor (integer coordinates).
class GcdTest {
 public:
  explicit GcdTest(const OrbifoldPicard& orb);
  bool operator()(const std::int64_t* y, const std::int64_t* k) const;
  // true when y' is in the exceptional set (some primitive collection all zero)
  bool exceptional(const std::int64_t* y) const;

 private:
  std::size_t r_, s_;
  std::vector<std::vector<int>> prim_;
  std::vector<std::vector<std::vector<int>>> reduced_;  // per sector, C minus carrier
};

bool squarefree(std::int64_t k);
// each |k_Z| squarefree and the k_Z pairwise coprime
bool k_admissible(const std::vector<std::int64_t>& k);

bool in_extended_torsor_gcd(const OrbifoldPicard& orb, const IntVec& y, const IntVec& k);
bool in_extended_torsor_age(const OrbifoldPicard& orb, const IntVec& y, const IntVec& k);

}  // namespace sc
