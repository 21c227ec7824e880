#pragma once

#include "fan.hpp"

namespace sc {

struct PicardData {
  std::size_t rank = 0;
  IntMatrix class_map;             // rank x num_rays
  std::vector<IntVec> basis_reps;  // divisor representatives A_i (free N only)
  IntVec torsion_factors;
  bool torsion_flag = false;

  IntVec class_of(const IntVec& a) const { return class_map * a; }
};

PicardData picard_group(const StackyFan& fan);

// Basis L'_i = sum_j P(j,i) L_j for a unimodular P.
PicardData change_basis(const PicardData& pic, const IntMatrix& P);

Rat age_numeric(const BoxSector& b, const IntVec& a);
RatVec age_lift_vector(const StackyFan& fan, const PicardData& pic, const BoxSector& b);

struct OrbifoldPicard {
  StackyFan fan;
  PicardData pic;
  std::vector<BoxSector> sectors;  // twisted only
  std::vector<Cone> primitive;
  std::size_t rho_orb = 0;
  std::vector<RatVec> lift;               // d(Z), per twisted sector
  std::vector<IntVec> m;                  // m_Z over rays, per twisted sector
  std::vector<IntVec> d_rho_stack;        // per ray, length rho_orb
  std::vector<IntVec> sector_coords;      // per twisted sector, unit vectors
  IntVec anticanonical;
  std::vector<IntVec> effective_generators;

  std::size_t num_rays() const { return fan.num_rays(); }
  std::size_t num_sectors() const { return sectors.size(); }
  std::size_t num_ext() const { return fan.num_rays() + sectors.size(); }
};

// Throws TorsionPicard when Pic has torsion and InvalidArgument when N has
// torsion (the counting pipeline needs divisor representatives).
OrbifoldPicard orbifold_basis(const StackyFan& fan);
OrbifoldPicard orbifold_basis(const StackyFan& fan, const PicardData& pic);

// Vertex of {u : <g,u> >= 1 for all effective generators g} minimizing
// <anticanonical, u>; ties broken by enumeration order.
RatVec default_u(const OrbifoldPicard& orb);

Rat pairing(const IntVec& a, const RatVec& u);

// invariant factors of the lattice spanned by the effective generators
AbelianPresentation orbifold_class_lattice(const OrbifoldPicard& orb);

}  // namespace sc
