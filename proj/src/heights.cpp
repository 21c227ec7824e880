#include "heights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sc {

namespace {

constexpr double kMargin = 1e-8;

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 0) n = -n;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

int valuation(std::int64_t x, std::int64_t p) {
  int v = 0;
  while (x % p == 0) x /= p, ++v;
  return v;
}

// exact a^sigma for one class on one cone
RatVec exact_exponents(const OrbifoldPicard& orb, const Cone& c, const std::vector<RatVec>& inv,
                       const IntVec& a) {
  const std::size_t n = orb.fan.n_rank, r = orb.num_rays();
  // m solves <m, b_rho> = a_rho on the cone: m = B^{-T} a_c
  RatVec m(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i] += inv[j][i] * Rat(a[c[j]]);
  RatVec e(r);
  for (std::size_t rho = 0; rho < r; ++rho) {
    Rat s = 0;
    for (std::size_t i = 0; i < n; ++i) s += m[i] * Rat(orb.fan.ray_free[rho][i]);
    e[rho] = Rat(a[rho]) - s;
  }
  for (int rho : c)
    if (e[rho] != 0) throw Error(Errc::Inconsistent, "cone exponent does not vanish on the cone");
  return e;
}

}  // namespace

Domain unit_box(const OrbifoldPicard& orb, const RatVec& u) {
  return Domain{std::vector<double>(orb.rho_orb, 0.0), std::vector<double>(orb.rho_orb, 1.0), u};
}

std::int64_t gcd_w(const std::vector<std::int64_t>& w, const std::vector<std::int64_t>& x) {
  if (w.size() != x.size()) throw Error(Errc::InvalidArgument, "weight and tuple lengths differ");
  std::int64_t g = 0;
  for (auto v : x) g = std::gcd(g, v < 0 ? -v : v);
  if (g == 0) throw Error(Errc::ZeroTuple, "gcd_w of the zero tuple");
  std::int64_t out = 1;
  for (auto p : prime_factors(g)) {
    int best = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != 0) best = std::min<int>(best, valuation(x[i], p) / int(w[i]));
    for (int e = 0; e < best; ++e) out *= p;
  }
  return out;
}

HeightEngine::HeightEngine(const OrbifoldPicard& orb)
    : orb_(&orb), n_(orb.fan.n_rank), r_(orb.num_rays()), t_(orb.pic.rank), s_(orb.num_sectors()) {
  for (auto& c : orb.fan.max_cones) {
    IntMatrix B(n_, n_);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < n_; ++i) B(i, j) = orb.fan.ray_free[c[j]][i];
    RatMatrix inv = inverse(to_rat(B));
    std::vector<RatVec> rows(n_);
    std::vector<double> d(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      rows[i] = inv.row(i);
      for (std::size_t j = 0; j < n_; ++j) d[i * n_ + j] = inv(i, j).get_d();
    }
    cone_inv_exact_.push_back(rows);
    cone_inv_.push_back(d);
    std::vector<double> ex(t_ * r_);
    for (std::size_t i = 0; i < t_; ++i) {
      RatVec e = exact_exponents(orb, c, rows, orb.pic.basis_reps[i]);
      for (std::size_t rho = 0; rho < r_; ++rho) ex[i * r_ + rho] = e[rho].get_d();
    }
    basis_exp_.push_back(ex);
  }
}

std::vector<double> HeightEngine::exponents(const IntVec& a, std::size_t c) const {
  RatVec e = exact_exponents(*orb_, orb_->fan.max_cones[c], cone_inv_exact_[c], a);
  std::vector<double> out;
  for (auto& x : e) out.push_back(x.get_d());
  return out;
}

int HeightEngine::find_cone(const double* ell, const unsigned char* zero) const {
  const auto& fan = orb_->fan;
  double v[64];
  for (std::size_t i = 0; i < n_; ++i) v[i] = 0;
  for (std::size_t rho = 0; rho < r_; ++rho) {
    if (zero[rho]) continue;
    for (std::size_t i = 0; i < n_; ++i) v[i] -= ell[rho] * fan.ray_free[rho][i].get_d();
  }
  int best = -1;
  double best_min = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
    const Cone& cone = fan.max_cones[c];
    bool holds_zeros = true;
    for (std::size_t rho = 0; rho < r_ && holds_zeros; ++rho)
      if (zero[rho] && !std::binary_search(cone.begin(), cone.end(), int(rho))) holds_zeros = false;
    if (!holds_zeros) continue;
    double mn = std::numeric_limits<double>::infinity();
    const double* inv = cone_inv_[c].data();
    for (std::size_t j = 0; j < n_; ++j) {
      if (zero[cone[j]]) continue;
      double cj = 0;
      for (std::size_t i = 0; i < n_; ++i) cj += inv[j * n_ + i] * v[i];
      mn = std::min(mn, cj);
    }
    if (best < 0 || mn > best_min) best = int(c), best_min = mn;
  }
  return best;
}

bool HeightEngine::log_heights(const double* ell, const unsigned char* zero, double* out) const {
  int c = find_cone(ell, zero);
  if (c < 0) return false;
  const Cone& cone = orb_->fan.max_cones[c];
  const double* ex = basis_exp_[c].data();
  for (std::size_t i = 0; i < t_; ++i) {
    double s = 0;
    for (std::size_t rho = 0; rho < r_; ++rho) {
      if (std::binary_search(cone.begin(), cone.end(), int(rho))) continue;
      s += ex[i * r_ + rho] * ell[rho];
    }
    out[i] = s;
  }
  return true;
}

bool HeightEngine::extended(const std::int64_t* y, const std::int64_t* k, double* out) const {
  double ell[64];
  unsigned char zero[64];
  double logk[64];
  for (std::size_t z = 0; z < s_; ++z) {
    if (k[z] == 0) return false;
    logk[z] = std::log(std::fabs(double(k[z])));
  }
  for (std::size_t rho = 0; rho < r_; ++rho) {
    zero[rho] = y[rho] == 0;
    if (zero[rho]) {
      ell[rho] = 0;
      continue;
    }
    double l = std::log(std::fabs(double(y[rho])));
    for (std::size_t z = 0; z < s_; ++z) l += orb_->m[z][rho].get_d() * logk[z];
    ell[rho] = l;
  }
  if (!log_heights(ell, zero, out)) return false;
  for (std::size_t z = 0; z < s_; ++z) out[t_ + z] = logk[z];
  return true;
}

double archimedean_height(const OrbifoldPicard& orb, const std::vector<double>& y, const IntVec& a) {
  HeightEngine eng(orb);
  const std::size_t r = orb.num_rays();
  if (y.size() != r || a.size() != r) throw Error(Errc::InvalidArgument, "length mismatch");
  std::vector<double> ell(r);
  std::vector<unsigned char> zero(r);
  for (std::size_t rho = 0; rho < r; ++rho) {
    zero[rho] = y[rho] == 0;
    ell[rho] = zero[rho] ? 0 : std::log(std::fabs(y[rho]));
  }
  int c = eng.find_cone(ell.data(), zero.data());
  if (c < 0) throw Error(Errc::DegeneratePoint, "point lies in the exceptional set");
  auto e = eng.exponents(a, c);
  const Cone& cone = orb.fan.max_cones[c];
  double s = 0;
  for (std::size_t rho = 0; rho < r; ++rho)
    if (!std::binary_search(cone.begin(), cone.end(), int(rho))) s += e[rho] * ell[rho];
  return std::exp(s);
}

double archimedean_height_max(const OrbifoldPicard& orb, const std::vector<double>& y,
                              const IntVec& a) {
  HeightEngine eng(orb);
  const std::size_t r = orb.num_rays();
  std::vector<unsigned char> zero(r);
  std::vector<int> zs;
  for (std::size_t rho = 0; rho < r; ++rho)
    if (y[rho] == 0) zs.push_back(int(rho));
  if (!orb.fan.in_some_cone(zs)) throw Error(Errc::DegeneratePoint, "point lies in the exceptional set");
  double best = 0;
  for (std::size_t c = 0; c < orb.fan.max_cones.size(); ++c) {
    auto e = eng.exponents(a, c);
    const Cone& cone = orb.fan.max_cones[c];
    double p = 1;
    for (std::size_t rho = 0; rho < r; ++rho) {
      if (std::binary_search(cone.begin(), cone.end(), int(rho))) continue;
      if (y[rho] == 0) {
        p = e[rho] > 0 ? 0 : (e[rho] < 0 ? std::numeric_limits<double>::infinity() : p);
        if (p == 0) break;
        continue;
      }
      p *= std::pow(std::fabs(y[rho]), e[rho]);
    }
    best = std::max(best, p);
  }
  return best;
}

RatVec r2(const OrbifoldPicard& orb, const IntVec& y, const IntVec& k) {
  const std::size_t r = orb.num_rays(), s = orb.num_sectors();
  if (y.size() != r || k.size() != s) throw Error(Errc::InvalidArgument, "length mismatch");
  for (auto& x : k)
    if (x == 0) throw Error(Errc::ZeroK, "sector coordinate is zero");
  RatVec out(r);
  for (std::size_t rho = 0; rho < r; ++rho) {
    Rat v(y[rho]);
    for (std::size_t z = 0; z < s; ++z) {
      Int pw;
      long e = orb.m[z][rho].get_si();
      mpz_pow_ui(pw.get_mpz_t(), k[z].get_mpz_t(), std::labs(e));
      v *= e >= 0 ? Rat(pw) : Rat(1) / Rat(pw);
    }
    v.canonicalize();
    out[rho] = v;
  }
  return out;
}

std::vector<double> extended_height(const OrbifoldPicard& orb, const IntVec& y, const IntVec& k) {
  HeightEngine eng(orb);
  std::vector<std::int64_t> yy, kk;
  for (auto& x : y) yy.push_back(x.get_si());
  for (auto& x : k) {
    if (x == 0) throw Error(Errc::ZeroK, "sector coordinate is zero");
    kk.push_back(x.get_si());
  }
  std::vector<double> out(orb.rho_orb);
  if (!eng.extended(yy.data(), kk.data(), out.data()))
    throw Error(Errc::DegeneratePoint, "point lies in the exceptional set");
  return out;
}

double nu_measure(const IntVec& anticanonical, const std::vector<double>& lower,
                  const std::vector<double>& upper) {
  double v = 1;
  for (std::size_t i = 0; i < anticanonical.size(); ++i) {
    double a = anticanonical[i].get_d(), lo = lower.at(i), hi = upper.at(i);
    if (hi < lo) return 0;
    v *= a == 0 ? hi - lo : (std::exp(a * hi) - std::exp(a * lo)) / a;
  }
  return v;
}

double BoundingBox::log_yprime(const OrbifoldPicard& orb, std::size_t rho, const double* logk) const {
  double l = log_ymax[rho];
  for (std::size_t z = 0; z < orb.num_sectors(); ++z) l -= orb.m[z][rho].get_d() * logk[z];
  return l + kMargin;
}

BoundingBox bounding_box(const OrbifoldPicard& orb, const Domain& D, double B) {
  const std::size_t r = orb.num_rays(), t = orb.pic.rank, s = orb.num_sectors();
  if (D.lower.size() != orb.rho_orb || D.upper.size() != orb.rho_orb || D.u.size() != orb.rho_orb)
    throw Error(Errc::InvalidArgument, "domain dimension does not match the orbifold Picard rank");
  const double lb = std::log(B);
  BoundingBox bb;
  for (std::size_t z = 0; z < s; ++z) {
    double lo = D.lower[t + z] + lb * D.u[t + z].get_d();
    double hi = D.upper[t + z] + lb * D.u[t + z].get_d();
    bb.log_kmin.push_back(lo);
    bb.log_kmax.push_back(hi);
    bb.kmin.push_back(std::max<std::int64_t>(1, std::int64_t(std::ceil(std::exp(lo - kMargin)))));
    bb.kmax.push_back(std::int64_t(std::floor(std::exp(hi + kMargin))));
  }
  // The preimage of a height vector h is {log|y| = ell0(h) - c}, c >= 0
  // supported on a cone, where ell0(h)_rho = sum_i a_{i,rho} h_i.
  for (std::size_t rho = 0; rho < r; ++rho) {
    double c = 0;
    for (std::size_t i = 0; i < t; ++i) {
      double a = orb.pic.class_map(i, rho).get_d();
      double lo = D.lower[i] + lb * D.u[i].get_d();
      double hi = D.upper[i] + lb * D.u[i].get_d();
      c += std::max(a * lo, a * hi);
    }
    bb.log_ymax.push_back(c);
    double l = c;
    for (std::size_t z = 0; z < s; ++z) {
      double m = orb.m[z][rho].get_d();
      if (m > 0) l -= m * std::log(double(bb.kmin[z]));
      else if (m < 0) l -= m * std::log(double(std::max<std::int64_t>(bb.kmax[z], 1)));
    }
    bb.yprime_max.push_back(std::exp(l + kMargin));
    bb.yprime_int.push_back(std::int64_t(std::floor(std::exp(l + kMargin))));
  }
  return bb;
}

}  // namespace sc
