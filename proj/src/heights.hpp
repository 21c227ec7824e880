#pragma once

#include <cstdint>
#include <vector>

#include "picard.hpp"

namespace sc {

struct Domain {
  std::vector<double> lower, upper;  // box in dual-basis coordinates
  RatVec u;
};

Domain unit_box(const OrbifoldPicard& orb, const RatVec& u);

std::int64_t gcd_w(const std::vector<std::int64_t>& w, const std::vector<std::int64_t>& x);

// Piecewise-monomial archimedean heights on the torsor. Exponent vectors of
// every basis class are precomputed per max cone; a point is evaluated on the
// cone containing v = -sum log|y_rho| b_rho (restricted to cones that contain
// the zero coordinates).
class HeightEngine {
 public:
  explicit HeightEngine(const OrbifoldPicard& orb);

  const OrbifoldPicard& orb() const { return *orb_; }

  // log|y_rho| per ray; zero[rho] marks vanishing coordinates. Returns the
  // max-cone index used, or -1 for a point of the exceptional set.
  int find_cone(const double* ell, const unsigned char* zero) const;

  // log H(y, A_i) for every basis class
  bool log_heights(const double* ell, const unsigned char* zero, double* out) const;

  // extended multi-height in orbifold coordinates; false on a degenerate point
  bool extended(const std::int64_t* y, const std::int64_t* k, double* out) const;

  // exponent vector a^sigma of an arbitrary class on max cone c
  std::vector<double> exponents(const IntVec& a, std::size_t c) const;

 private:
  const OrbifoldPicard* orb_;
  std::size_t n_, r_, t_, s_;
  std::vector<std::vector<double>> cone_inv_;    // per cone, n x n row-major
  std::vector<std::vector<double>> basis_exp_;   // per cone, t x r row-major
  std::vector<std::vector<RatVec>> cone_inv_exact_;
};

double archimedean_height(const OrbifoldPicard& orb, const std::vector<double>& y, const IntVec& a);
// max over cones of prod |y_rho|^{a^sigma_rho}; agrees with the piecewise
// form for nef classes
double archimedean_height_max(const OrbifoldPicard& orb, const std::vector<double>& y,
                              const IntVec& a);

RatVec r2(const OrbifoldPicard& orb, const IntVec& y, const IntVec& k);

std::vector<double> extended_height(const OrbifoldPicard& orb, const IntVec& y, const IntVec& k);

double nu_measure(const IntVec& anticanonical, const std::vector<double>& lower,
                  const std::vector<double>& upper);

struct BoundingBox {
  std::vector<double> log_kmin, log_kmax;  // real bounds on log|k_Z|
  std::vector<std::int64_t> kmin, kmax;    // integer ranges, kmin > kmax when empty
  std::vector<double> log_ymax;            // bound on log|r2(y',k)_rho|
  std::vector<double> yprime_max;          // bound on |y'_rho| over all admissible k
  std::vector<std::int64_t> yprime_int;

  // log bound on |y'_rho| for a given tuple of log|k_Z|
  double log_yprime(const OrbifoldPicard& orb, std::size_t rho, const double* logk) const;
};

// Every (y',k) with extended height in D_B satisfies the returned bounds.
BoundingBox bounding_box(const OrbifoldPicard& orb, const Domain& D, double B);

constexpr double kBand = 1e-9;

}  // namespace sc
