#include "picard.hpp"

#include <algorithm>

namespace sc {

PicardData picard_group(const StackyFan& fan) {
  const std::size_t r = fan.num_rays(), n = fan.n_rank, s = fan.n_torsion.size();
  // DG(β) = coker([B Q]^T) with B the lift of β and Q the torsion relations
  IntMatrix BQ(n + s, r + s);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 0; i < n; ++i) BQ(i, j) = fan.ray_free[j][i];
    for (std::size_t i = 0; i < s; ++i) BQ(n + i, j) = fan.ray_tors[j][i];
  }
  for (std::size_t i = 0; i < s; ++i) BQ(n + i, r + i) = fan.n_torsion[i];
  IntMatrix M = BQ.transpose();
  auto snf = smith_normal_form(M);
  std::size_t rk = 0;
  PicardData pic;
  for (std::size_t i = 0; i < M.rows && i < M.cols; ++i) {
    if (snf.D(i, i) == 0) continue;
    ++rk;
    if (snf.D(i, i) > 1) pic.torsion_factors.push_back(snf.D(i, i));
  }
  pic.torsion_flag = !pic.torsion_factors.empty();
  pic.rank = M.rows - rk;
  pic.class_map = IntMatrix(pic.rank, r);
  for (std::size_t i = 0; i < pic.rank; ++i)
    for (std::size_t j = 0; j < r; ++j) pic.class_map(i, j) = snf.U(rk + i, j);

  if (s == 0) {
    RatMatrix Uinv = inverse(to_rat(snf.U));
    for (std::size_t i = 0; i < pic.rank; ++i) {
      IntVec rep(r);
      for (std::size_t j = 0; j < r; ++j) rep[j] = Int(Uinv(j, rk + i).get_num());
      pic.basis_reps.push_back(rep);
    }
    for (std::size_t i = 0; i < pic.rank; ++i) {
      Int tot = 0;
      for (std::size_t j = 0; j < r; ++j) tot += pic.class_map(i, j);
      if (tot < 0) {
        for (std::size_t j = 0; j < r; ++j) pic.class_map(i, j) = -pic.class_map(i, j);
        for (auto& x : pic.basis_reps[i]) x = -x;
      }
      // prefer a single divisor as representative when one exists
      for (std::size_t rho = 0; rho < r; ++rho) {
        bool unit = true;
        for (std::size_t k = 0; k < pic.rank && unit; ++k)
          unit = pic.class_map(k, rho) == (k == i ? 1 : 0);
        if (unit) {
          pic.basis_reps[i].assign(r, Int(0));
          pic.basis_reps[i][rho] = 1;
          break;
        }
      }
    }
  }
  return pic;
}

PicardData change_basis(const PicardData& pic, const IntMatrix& P) {
  if (P.rows != pic.rank || P.cols != pic.rank)
    throw Error(Errc::InvalidArgument, "basis change has wrong size");
  Int det = determinant(P);
  if (det != 1 && det != -1) throw Error(Errc::InvalidArgument, "basis change is not unimodular");
  RatMatrix Pinv = inverse(to_rat(P));
  IntMatrix Pi(P.rows, P.cols);
  for (std::size_t i = 0; i < Pi.a.size(); ++i) Pi.a[i] = Int(Pinv.a[i].get_num());
  PicardData out = pic;
  out.class_map = Pi * pic.class_map;
  for (std::size_t i = 0; i < pic.rank; ++i) {
    IntVec rep(pic.class_map.cols, Int(0));
    for (std::size_t j = 0; j < pic.rank; ++j)
      for (std::size_t k = 0; k < rep.size(); ++k) rep[k] += P(j, i) * pic.basis_reps[j][k];
    out.basis_reps[i] = rep;
  }
  return out;
}

Rat age_numeric(const BoxSector& b, const IntVec& a) {
  Rat s = 0;
  for (std::size_t i = 0; i < b.carrier.size(); ++i) s += Rat(a.at(b.carrier[i])) * b.q[i];
  return frac(s);
}

RatVec age_lift_vector(const StackyFan& fan, const PicardData& pic, const BoxSector& b) {
  if (pic.torsion_flag) throw Error(Errc::TorsionPicard, "Picard group has torsion");
  if (!fan.free_n() || pic.basis_reps.size() != pic.rank)
    throw Error(Errc::InvalidArgument, "age lift requires torsion-free N");
  const std::size_t r = fan.num_rays(), n = fan.n_rank;
  RatMatrix M(r, r);
  RatVec rhs(r, Rat(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < r; ++j) M(i, j) = fan.ray_free[j][i];
  for (std::size_t i = 0; i < pic.rank; ++i) {
    for (std::size_t j = 0; j < r; ++j) M(n + i, j) = pic.basis_reps[i][j];
    rhs[n + i] = age_numeric(b, pic.basis_reps[i]);
  }
  return rational_solve(M, rhs);
}

OrbifoldPicard orbifold_basis(const StackyFan& fan) { return orbifold_basis(fan, picard_group(fan)); }

OrbifoldPicard orbifold_basis(const StackyFan& fan, const PicardData& pic) {
  if (pic.torsion_flag) throw Error(Errc::TorsionPicard, "Picard group has torsion");
  if (!fan.free_n()) throw Error(Errc::InvalidArgument, "counting pipeline requires torsion-free N");
  OrbifoldPicard o;
  o.fan = fan;
  o.pic = pic;
  o.primitive = primitive_collections(fan);
  for (auto& b : box_elements(fan))
    if (!b.is_zero()) o.sectors.push_back(b);
  const std::size_t r = fan.num_rays(), t = pic.rank, s = o.sectors.size();
  o.rho_orb = t + s;
  for (auto& Z : o.sectors) {
    RatVec d = age_lift_vector(fan, pic, Z);
    RatVec qbar = Z.q_inverse_full(r);
    IntVec m(r);
    for (std::size_t rho = 0; rho < r; ++rho) {
      Rat e = d[rho] + qbar[rho];
      if (e.get_den() != 1)
        throw Error(Errc::NonIntegralExponent, "exponent m_Z is not integral");
      m[rho] = Int(e.get_num());
    }
    o.lift.push_back(d);
    o.m.push_back(m);
  }
  o.anticanonical.assign(o.rho_orb, Int(0));
  for (std::size_t rho = 0; rho < r; ++rho) {
    IntVec c(o.rho_orb);
    for (std::size_t i = 0; i < t; ++i) c[i] = pic.class_map(i, rho);
    for (std::size_t z = 0; z < s; ++z) c[t + z] = -o.m[z][rho];
    o.d_rho_stack.push_back(c);
  }
  for (std::size_t z = 0; z < s; ++z) {
    IntVec c(o.rho_orb, Int(0));
    c[t + z] = 1;
    o.sector_coords.push_back(c);
  }
  o.effective_generators = o.d_rho_stack;
  o.effective_generators.insert(o.effective_generators.end(), o.sector_coords.begin(),
                                o.sector_coords.end());
  for (auto& g : o.effective_generators)
    for (std::size_t i = 0; i < o.rho_orb; ++i) o.anticanonical[i] += g[i];
  return o;
}

Rat pairing(const IntVec& a, const RatVec& u) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * u.at(i);
  return s;
}

RatVec default_u(const OrbifoldPicard& orb) {
  const auto& G = orb.effective_generators;
  const std::size_t k = orb.rho_orb, g = G.size();
  if (k == 0 || g < k) throw Error(Errc::NoInteriorPoint, "effective generators do not span");
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  bool have = false;
  RatVec best;
  Rat best_val;
  for (;;) {
    IntMatrix S(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) S(i, j) = G[idx[i]][j];
    if (determinant(S) != 0) {
      RatVec u = rational_solve(to_rat(S), RatVec(k, Rat(1)));
      bool feasible = std::all_of(G.begin(), G.end(), [&](const IntVec& x) { return pairing(x, u) >= 1; });
      if (feasible) {
        Rat val = pairing(orb.anticanonical, u);
        if (!have || val < best_val) best = u, best_val = val, have = true;
      }
    }
    // next combination
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == g - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (!have) throw Error(Errc::NoInteriorPoint, "no point of the dual effective cone interior");
  Rat mn = pairing(G[0], best);
  for (auto& x : G) mn = std::min(mn, pairing(x, best));
  if (mn != 1) throw Error(Errc::NoInteriorPoint, "normalization check failed");
  return best;
}

AbelianPresentation orbifold_class_lattice(const OrbifoldPicard& orb) {
  IntMatrix M(orb.rho_orb, orb.effective_generators.size());
  for (std::size_t j = 0; j < orb.effective_generators.size(); ++j)
    for (std::size_t i = 0; i < orb.rho_orb; ++i) M(i, j) = orb.effective_generators[j][i];
  return cokernel(M);
}

}  // namespace sc
