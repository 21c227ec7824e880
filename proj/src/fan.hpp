#pragma once

#include <optional>
#include <vector>

#include "lattice.hpp"

namespace sc {

using Cone = std::vector<int>;  // sorted ray indices

struct FanSpec {
  int n_rank = 0;
  IntVec n_torsion;               // invariant factors > 1
  std::vector<IntVec> rays;       // free part, optionally followed by torsion part
  std::vector<Cone> max_cones;
  std::optional<IntVec> weights;  // alternative: weighted projective stack
};

struct StackyFan {
  int n_rank = 0;
  IntVec n_torsion;
  std::vector<IntVec> ray_free;
  std::vector<IntVec> ray_tors;  // reduced modulo n_torsion
  std::vector<Cone> max_cones;
  std::vector<Cone> all_cones;   // face closure, including the empty cone
  std::optional<IntVec> weights;

  std::size_t num_rays() const { return ray_free.size(); }
  bool free_n() const { return n_torsion.empty(); }
  // n_rank x num_rays matrix of free parts
  IntMatrix beta() const;
  bool in_some_cone(const std::vector<int>& rays) const;
  // max cones containing all of `rays`
  std::vector<int> cones_containing(const std::vector<int>& rays) const;
};

struct BoxSector {
  IntVec free;  // n̄
  IntVec tors;
  Cone carrier;
  RatVec q;  // parallel to carrier, all in (0,1)
  Int exponent;

  bool is_zero() const;
  RatVec q_full(std::size_t num_rays) const;
  // box coordinates of the inverse sector: 1 - q on the carrier
  RatVec q_inverse_full(std::size_t num_rays) const;
};

struct Located {
  Cone cone;       // minimal cone
  RatVec coords;   // parallel to cone, all > 0
};

StackyFan build_fan(const FanSpec& spec);
StackyFan weighted_projective(const IntVec& w);
std::vector<Cone> primitive_collections(const StackyFan& fan);
Located locate(const StackyFan& fan, const RatVec& v);
std::vector<BoxSector> box_elements(const StackyFan& fan);
StackyFan rigidified(const StackyFan& fan);
StackyFan canonical(const StackyFan& fan);

// Fan with N ≅ Z^{sum of ranks}; cones are products of cones.
StackyFan product(const StackyFan& a, const StackyFan& b);

}  // namespace sc
