#pragma once

#include <vector>

#include "picard.hpp"
#include "residue.hpp"

namespace sc::testing {

inline StackyFan fan_of(int n, std::vector<IntVec> rays, std::vector<Cone> cones) {
  FanSpec s;
  s.n_rank = n;
  s.rays = std::move(rays);
  s.max_cones = std::move(cones);
  return build_fan(s);
}

inline StackyFan p1() { return weighted_projective({1, 1}); }
inline StackyFan p2() { return fan_of(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}); }
inline StackyFan hirzebruch(int a) {
  return fan_of(2, {{1, 0}, {0, 1}, {-1, a}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

// rank-2 fans with free Picard group, including stacky ones and products
inline std::vector<StackyFan> fan_suite() {
  return {p1(),
          weighted_projective({1, 2}),
          weighted_projective({1, 3}),
          weighted_projective({2, 3}),
          weighted_projective({1, 1, 2}),
          weighted_projective({1, 2, 3}),
          weighted_projective({1, 1, 1, 2}),
          p2(),
          hirzebruch(1),
          hirzebruch(2),
          fan_of(2, {{2, 1}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}),
          product(p1(), weighted_projective({1, 2})),
          product(weighted_projective({1, 2}), weighted_projective({1, 3}))};
}

struct Extended {
  IntVec y, k;
};

// integral extended-torsor coordinates of the rational point with naive coordinates y
inline Extended to_extended(const OrbifoldPicard& orb, const AgeEngine& ages, const RatVec& y) {
  RatVec n = ages.normalize(y);
  auto [ok, fam] = ages.in_naive_torsor(n);
  if (!ok) throw Error(Errc::Inconsistent, "normalized point is not in the naive torsor");
  Extended e;
  e.k.assign(orb.num_sectors(), Int(1));
  for (auto& [p, z] : fam) e.k[z] *= p;
  for (std::size_t rho = 0; rho < orb.num_rays(); ++rho) {
    Rat v = n[rho];
    for (std::size_t z = 0; z < orb.num_sectors(); ++z)
      for (Int i = 0; i < abs(orb.m[z][rho]); ++i) v = orb.m[z][rho] > 0 ? Rat(v / e.k[z]) : Rat(v * e.k[z]);
    v.canonicalize();
    if (v.get_den() != 1) throw Error(Errc::Inconsistent, "non-integral torsor coordinate");
    e.y.push_back(Int(v.get_num()));
  }
  return e;
}

}  // namespace sc::testing
