#include "fan.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sc {

namespace {

Int mod_pos(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

IntMatrix cone_matrix(const StackyFan& f, const Cone& c) {
  IntMatrix B(f.n_rank, c.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    for (int i = 0; i < f.n_rank; ++i) B(i, j) = f.ray_free[c[j]][i];
  return B;
}

bool positively_proportional(const IntVec& a, const IntVec& b) {
  // a = λ b with λ > 0
  std::size_t k = 0;
  while (k < a.size() && a[k] == 0 && b[k] == 0) ++k;
  if (k == a.size()) return true;
  if (a[k] == 0 || b[k] == 0 || sgn(a[k]) != sgn(b[k])) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] * b[k] != b[i] * a[k]) return false;
  return true;
}

std::vector<Cone> face_closure(const std::vector<Cone>& max_cones) {
  std::set<Cone> faces;
  for (auto& c : max_cones) {
    const std::size_t k = c.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
      Cone f;
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1) f.push_back(c[i]);
      faces.insert(f);
    }
  }
  std::vector<Cone> out(faces.begin(), faces.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const Cone& a, const Cone& b) { return a.size() < b.size(); });
  return out;
}

// Coordinates of v in the basis of the (full-dimensional) cone, or nothing
// if the cone is singular.
RatVec cone_coords(const StackyFan& f, const Cone& c, const RatVec& v) {
  return rational_solve(to_rat(cone_matrix(f, c)), v);
}

void check_complete(const StackyFan& f) {
  const int n = f.n_rank;
  std::map<Cone, std::vector<std::pair<int, int>>> facets;  // facet -> (cone, dropped ray)
  for (std::size_t ci = 0; ci < f.max_cones.size(); ++ci) {
    const Cone& c = f.max_cones[ci];
    for (std::size_t d = 0; d < c.size(); ++d) {
      Cone facet;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (i != d) facet.push_back(c[i]);
      facets[facet].push_back({int(ci), c[d]});
    }
  }
  for (auto& [facet, owners] : facets) {
    if (owners.size() != 2)
      throw Error(Errc::NotComplete, "a facet lies in " + std::to_string(owners.size()) +
                                         " max cones instead of exactly two");
    IntMatrix F(facet.size(), n);
    for (std::size_t i = 0; i < facet.size(); ++i)
      for (int j = 0; j < n; ++j) F(i, j) = f.ray_free[facet[i]][j];
    IntMatrix K = integer_kernel(F);
    if (K.cols != 1) throw Error(Errc::NotSimplicial, "degenerate facet");
    Int s0 = 0, s1 = 0;
    for (int j = 0; j < n; ++j) {
      s0 += K(j, 0) * f.ray_free[owners[0].second][j];
      s1 += K(j, 0) * f.ray_free[owners[1].second][j];
    }
    if (sgn(s0) * sgn(s1) >= 0)
      throw Error(Errc::NotComplete, "two max cones overlap across a shared facet");
  }
  // connectivity of the adjacency graph
  std::vector<std::vector<int>> adj(f.max_cones.size());
  for (auto& [facet, owners] : facets) {
    adj[owners[0].first].push_back(owners[1].first);
    adj[owners[1].first].push_back(owners[0].first);
  }
  std::vector<char> seen(f.max_cones.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int c = stack.back();
    stack.pop_back();
    for (int d : adj[c])
      if (!seen[d]) seen[d] = 1, stack.push_back(d);
  }
  if (std::count(seen.begin(), seen.end(), 0))
    throw Error(Errc::NotComplete, "max-cone adjacency graph is disconnected");

  // covering degree one: a generic point lies in the interior of exactly one cone
  for (long base = 1009;; base += 2) {
    RatVec v(n);
    Rat x = 1;
    for (int i = 0; i < n; ++i) v[i] = x, x *= Rat(base, 7) * (i % 2 ? -1 : 1);
    int interior = 0;
    bool generic = true;
    for (auto& c : f.max_cones) {
      RatVec cc = cone_coords(f, c, v);
      bool inside = std::all_of(cc.begin(), cc.end(), [](const Rat& r) { return r >= 0; });
      bool zero = std::any_of(cc.begin(), cc.end(), [](const Rat& r) { return r == 0; });
      if (inside && zero) generic = false;
      if (inside && !zero) ++interior;
    }
    if (!generic) continue;
    if (interior != 1)
      throw Error(Errc::NotComplete, "cones cover a generic point " + std::to_string(interior) +
                                         " times");
    break;
  }
}

}  // namespace

IntMatrix StackyFan::beta() const {
  IntMatrix B(n_rank, num_rays());
  for (std::size_t j = 0; j < num_rays(); ++j)
    for (int i = 0; i < n_rank; ++i) B(i, j) = ray_free[j][i];
  return B;
}

bool StackyFan::in_some_cone(const std::vector<int>& rays) const {
  return !cones_containing(rays).empty();
}

std::vector<int> StackyFan::cones_containing(const std::vector<int>& rays) const {
  std::vector<int> out;
  for (std::size_t c = 0; c < max_cones.size(); ++c) {
    const Cone& mc = max_cones[c];
    bool all = std::all_of(rays.begin(), rays.end(), [&](int r) {
      return std::binary_search(mc.begin(), mc.end(), r);
    });
    if (all) out.push_back(int(c));
  }
  return out;
}

bool BoxSector::is_zero() const {
  auto z = [](const Int& x) { return x == 0; };
  return std::all_of(free.begin(), free.end(), z) && std::all_of(tors.begin(), tors.end(), z);
}

RatVec BoxSector::q_full(std::size_t num_rays) const {
  RatVec out(num_rays, Rat(0));
  for (std::size_t i = 0; i < carrier.size(); ++i) out[carrier[i]] = q[i];
  return out;
}

RatVec BoxSector::q_inverse_full(std::size_t num_rays) const {
  RatVec out(num_rays, Rat(0));
  for (std::size_t i = 0; i < carrier.size(); ++i) out[carrier[i]] = 1 - q[i];
  return out;
}

StackyFan build_fan(const FanSpec& spec) {
  if (spec.weights) return weighted_projective(*spec.weights);
  StackyFan f;
  if (spec.n_rank < 1) throw Error(Errc::InvalidArgument, "n_rank must be at least 1");
  f.n_rank = spec.n_rank;
  for (auto& c : spec.n_torsion) {
    if (c < 1) throw Error(Errc::InvalidArgument, "torsion factors must be positive");
    if (c > 1) f.n_torsion.push_back(c);
  }
  const std::size_t s = f.n_torsion.size();
  const std::size_t given_s = spec.n_torsion.size();
  for (std::size_t r = 0; r < spec.rays.size(); ++r) {
    const IntVec& ray = spec.rays[r];
    if (ray.size() != std::size_t(f.n_rank) && ray.size() != f.n_rank + given_s)
      throw Error(Errc::InvalidArgument, "ray " + std::to_string(r) + " has wrong length");
    IntVec free(ray.begin(), ray.begin() + f.n_rank);
    IntVec tors;
    if (ray.size() > std::size_t(f.n_rank)) {
      for (std::size_t j = 0; j < given_s; ++j)
        if (spec.n_torsion[j] > 1) tors.push_back(mod_pos(ray[f.n_rank + j], spec.n_torsion[j]));
    } else {
      tors.assign(s, Int(0));
    }
    if (std::all_of(free.begin(), free.end(), [](const Int& x) { return x == 0; }))
      throw Error(Errc::ZeroRay, "ray " + std::to_string(r) + " has zero free part");
    for (std::size_t q = 0; q < f.ray_free.size(); ++q)
      if (positively_proportional(free, f.ray_free[q]))
        throw Error(Errc::DuplicateRay, "rays " + std::to_string(q) + " and " +
                                            std::to_string(r) + " span the same 1-cone");
    f.ray_free.push_back(free);
    f.ray_tors.push_back(tors);
  }
  if (spec.max_cones.empty()) throw Error(Errc::NotComplete, "no max cones");
  std::vector<char> used(f.num_rays(), 0);
  std::set<Cone> seen;
  for (auto c : spec.max_cones) {
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
      throw Error(Errc::InvalidArgument, "max cone repeats a ray");
    for (int r : c) {
      if (r < 0 || std::size_t(r) >= f.num_rays())
        throw Error(Errc::InvalidArgument, "max cone references unknown ray");
      used[r] = 1;
    }
    if (c.size() > std::size_t(f.n_rank) || rank(cone_matrix(f, c)) != c.size())
      throw Error(Errc::NotSimplicial, "max cone rays are linearly dependent");
    if (c.size() < std::size_t(f.n_rank))
      throw Error(Errc::NotComplete, "max cone is not full-dimensional");
    if (!seen.insert(c).second) throw Error(Errc::InvalidArgument, "repeated max cone");
    f.max_cones.push_back(c);
  }
  for (std::size_t r = 0; r < used.size(); ++r)
    if (!used[r]) throw Error(Errc::NotComplete, "ray " + std::to_string(r) + " lies in no cone");
  check_complete(f);
  f.all_cones = face_closure(f.max_cones);
  return f;
}

StackyFan weighted_projective(const IntVec& w) {
  if (w.size() < 2) throw Error(Errc::BadWeights, "need at least two weights");
  for (auto& x : w)
    if (x <= 0) throw Error(Errc::BadWeights, "weights must be positive");
  const std::size_t m = w.size();
  IntMatrix W(m, 1);
  for (std::size_t i = 0; i < m; ++i) W(i, 0) = w[i];
  auto snf = smith_normal_form(W);
  const Int g = snf.D(0, 0);
  const int n = int(m) - 1;
  FanSpec spec;
  spec.n_rank = n;
  if (g > 1) spec.n_torsion.push_back(g);
  for (std::size_t i = 0; i < m; ++i) {
    IntVec ray;
    for (std::size_t r = 1; r < m; ++r) ray.push_back(snf.U(r, i));
    if (g > 1) ray.push_back(snf.U(0, i));
    spec.rays.push_back(ray);
  }
  // orient each free coordinate so its first nonzero ray entry is positive
  for (int j = 0; j < n; ++j) {
    for (auto& ray : spec.rays) {
      if (ray[j] == 0) continue;
      if (ray[j] < 0)
        for (auto& r2 : spec.rays) r2[j] = -r2[j];
      break;
    }
  }
  for (std::size_t drop = m; drop-- > 0;) {
    Cone c;
    for (std::size_t i = 0; i < m; ++i)
      if (i != drop) c.push_back(int(i));
    spec.max_cones.push_back(c);
  }
  StackyFan f = build_fan(spec);
  f.weights = w;
  return f;
}

std::vector<Cone> primitive_collections(const StackyFan& fan) {
  const std::size_t r = fan.num_rays();
  std::vector<Cone> out;
  std::vector<char> in_cone(std::size_t(1) << r, 0);
  for (std::size_t mask = 0; mask < in_cone.size(); ++mask) {
    Cone c;
    for (std::size_t i = 0; i < r; ++i)
      if (mask >> i & 1) c.push_back(int(i));
    in_cone[mask] = fan.in_some_cone(c);
  }
  for (std::size_t mask = 1; mask < in_cone.size(); ++mask) {
    if (in_cone[mask]) continue;
    bool minimal = true;
    for (std::size_t i = 0; i < r && minimal; ++i)
      if ((mask >> i & 1) && !in_cone[mask & ~(std::size_t(1) << i)]) minimal = false;
    if (!minimal) continue;
    Cone c;
    for (std::size_t i = 0; i < r; ++i)
      if (mask >> i & 1) c.push_back(int(i));
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Located locate(const StackyFan& fan, const RatVec& v) {
  if (v.size() != std::size_t(fan.n_rank)) throw Error(Errc::InvalidArgument, "vector length");
  Located out;
  if (std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; })) return out;
  for (auto& c : fan.max_cones) {
    RatVec cc = cone_coords(fan, c, v);
    if (!std::all_of(cc.begin(), cc.end(), [](const Rat& x) { return x >= 0; })) continue;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (cc[i] > 0) out.cone.push_back(c[i]), out.coords.push_back(cc[i]);
    return out;
  }
  throw Error(Errc::NotComplete, "vector not located in any cone");
}

std::vector<BoxSector> box_elements(const StackyFan& fan) {
  const int n = fan.n_rank;
  const std::size_t s = fan.n_torsion.size();
  // torsion elements
  std::vector<IntVec> tors{IntVec()};
  for (std::size_t j = 0; j < s; ++j) {
    std::vector<IntVec> next;
    for (auto& t : tors)
      for (Int k = 0; k < fan.n_torsion[j]; ++k) {
        IntVec u = t;
        u.push_back(k);
        next.push_back(u);
      }
    tors = next;
  }
  std::map<std::pair<IntVec, IntVec>, BoxSector> found;
  for (auto& c : fan.max_cones) {
    IntMatrix B = cone_matrix(fan, c);
    RatMatrix Binv = inverse(to_rat(B));
    auto snf = smith_normal_form(B);
    RatMatrix Uinv = inverse(to_rat(snf.U));
    std::vector<IntVec> reps{IntVec()};
    for (int i = 0; i < n; ++i) {
      std::vector<IntVec> next;
      for (auto& r : reps)
        for (Int k = 0; k < snf.D(i, i); ++k) {
          IntVec u = r;
          u.push_back(k);
          next.push_back(u);
        }
      reps = next;
    }
    for (auto& k : reps) {
      RatVec x = Uinv * to_rat(k);
      RatVec q = Binv * x;
      for (auto& qi : q) qi = frac(qi);
      RatVec nb = to_rat(B) * q;
      IntVec nfree(n);
      for (int i = 0; i < n; ++i) nfree[i] = Int(nb[i].get_num());
      Cone carrier;
      RatVec qc;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (q[i] > 0) carrier.push_back(c[i]), qc.push_back(q[i]);
      Int r0 = 1;
      for (auto& qi : qc) r0 = lcm(r0, Int(qi.get_den()));
      for (auto& t : tors) {
        auto key = std::make_pair(nfree, t);
        if (found.count(key)) continue;
        Int ord = 1;
        for (std::size_t j = 0; j < s; ++j) {
          Rat tau = Rat(r0 * t[j]);
          for (std::size_t i = 0; i < carrier.size(); ++i)
            tau -= Rat(r0) * qc[i] * Rat(fan.ray_tors[carrier[i]][j]);
          Int tj = mod_pos(Int(tau.get_num()), fan.n_torsion[j]);
          Int g;
          mpz_gcd(g.get_mpz_t(), tj.get_mpz_t(), fan.n_torsion[j].get_mpz_t());
          ord = lcm(ord, fan.n_torsion[j] / g);
        }
        found[key] = BoxSector{nfree, t, carrier, qc, r0 * ord};
      }
    }
  }
  std::vector<BoxSector> out;
  for (auto& [k, b] : found) out.push_back(b);
  std::sort(out.begin(), out.end(), [](const BoxSector& a, const BoxSector& b) {
    if (a.is_zero() != b.is_zero()) return a.is_zero();
    if (a.carrier.size() != b.carrier.size()) return a.carrier.size() < b.carrier.size();
    if (a.carrier != b.carrier) return a.carrier < b.carrier;
    if (a.q != b.q) return a.q < b.q;
    return a.tors < b.tors;
  });
  return out;
}

StackyFan rigidified(const StackyFan& fan) {
  StackyFan f = fan;
  f.n_torsion.clear();
  for (auto& t : f.ray_tors) t.clear();
  f.weights.reset();
  return f;
}

StackyFan canonical(const StackyFan& fan) {
  StackyFan f = rigidified(fan);
  for (auto& r : f.ray_free) {
    Int g = 0;
    for (auto& x : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    for (auto& x : r) x /= g;
  }
  return f;
}

StackyFan product(const StackyFan& a, const StackyFan& b) {
  FanSpec spec;
  spec.n_rank = a.n_rank + b.n_rank;
  spec.n_torsion = a.n_torsion;
  spec.n_torsion.insert(spec.n_torsion.end(), b.n_torsion.begin(), b.n_torsion.end());
  for (std::size_t r = 0; r < a.num_rays(); ++r) {
    IntVec ray = a.ray_free[r];
    ray.resize(spec.n_rank, Int(0));
    ray.insert(ray.end(), a.ray_tors[r].begin(), a.ray_tors[r].end());
    ray.resize(spec.n_rank + spec.n_torsion.size(), Int(0));
    spec.rays.push_back(ray);
  }
  for (std::size_t r = 0; r < b.num_rays(); ++r) {
    IntVec ray(a.n_rank, Int(0));
    ray.insert(ray.end(), b.ray_free[r].begin(), b.ray_free[r].end());
    ray.resize(spec.n_rank + a.n_torsion.size(), Int(0));
    ray.insert(ray.end(), b.ray_tors[r].begin(), b.ray_tors[r].end());
    spec.rays.push_back(ray);
  }
  const int off = int(a.num_rays());
  for (auto& ca : a.max_cones)
    for (auto& cb : b.max_cones) {
      Cone c = ca;
      for (int r : cb) c.push_back(r + off);
      spec.max_cones.push_back(c);
    }
  return build_fan(spec);
}

}  // namespace sc
