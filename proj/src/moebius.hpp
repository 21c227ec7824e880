#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "heights.hpp"

namespace sc {

using ExponentTuple = std::vector<int>;

// Minimal exponent tuples (rays first, then twisted sectors) whose upper
// cones make up the local complement of the integral extended torsor.
std::vector<ExponentTuple> excluded_generators(const OrbifoldPicard& orb);

bool is_excluded(const std::vector<ExponentTuple>& gens, const ExponentTuple& lambda);

struct LocalMoebius {
  std::size_t dim = 0;
  std::map<ExponentTuple, long> values;  // nonzero entries only
  long at(const ExponentTuple& lambda) const;
};

LocalMoebius local_moebius(const std::vector<ExponentTuple>& gens, std::size_t dim);
LocalMoebius local_moebius(const OrbifoldPicard& orb);

struct DensityPolynomial {
  std::vector<Int> coeffs;  // coefficient of x^i
  Rat eval(const Rat& x) const;
  double eval(double x) const;
  std::string str() const;
  // sum of |coefficients| except the constant term
  Int abs_tail() const;
};

DensityPolynomial local_density(const LocalMoebius& mu);
Rat density_ie_oracle(const std::vector<ExponentTuple>& gens, long p);
// literal scan of residue tuples mod p^n against the membership conditions
Rat residue_density(const OrbifoldPicard& orb, long p, int n, std::uint64_t budget = 50'000'000);
long global_moebius(const LocalMoebius& mu, const std::vector<std::int64_t>& d);

struct McEstimate {
  double value = 0, std_error = 0;
  double box_volume = 0, nu = 0;
  std::uint64_t samples = 0, hits = 0;
};

McEstimate archimedean_density(const OrbifoldPicard& orb, const Domain& reference,
                               std::uint64_t samples, std::uint64_t seed);

struct TamagawaReport {
  double value = 0;
  double mu_inf = 0, mu_inf_se = 0;
  double euler_product = 0;
  double euler_tail_rel = 0;  // bound on |prod_{p>P}/1 - 1|
  double rel_error = 0;       // combined relative error report
  std::int64_t group_order = 1;
  std::int64_t prime_bound = 0;
  std::uint64_t samples = 0, seed = 0;
  DensityPolynomial density;
};

TamagawaReport tamagawa(const OrbifoldPicard& orb, std::int64_t prime_bound,
                        std::uint64_t samples, std::uint64_t seed);
TamagawaReport tamagawa(const OrbifoldPicard& orb, std::int64_t prime_bound,
                        std::uint64_t samples, std::uint64_t seed, const Domain& reference);

std::vector<std::int64_t> primes_up_to(std::int64_t n);
std::int64_t group_order(const StackyFan& fan);

// seeded uniform doubles in [0,1), identical across platforms
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : g_(seed) {}
  double next() { return double(g_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 g_;
};

}  // namespace sc
