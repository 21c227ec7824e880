#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "moebius.hpp"
#include "residue.hpp"

namespace sc {

struct ExtendedPoint {
  std::vector<std::int64_t> y;  // over the rays
  std::vector<std::int64_t> k;  // over the twisted sectors

  auto operator<=>(const ExtendedPoint&) const = default;
};

constexpr std::uint64_t kDefaultBudget = 2'000'000'000ULL;

// All integral points of the extended torsor with extended height in D_B,
// lexicographically sorted. Throws Budget when the search box is too large.
std::vector<ExtendedPoint> enumerate_points(const OrbifoldPicard& orb, const Domain& D, double B,
                                            std::uint64_t budget = kDefaultBudget);

// orbits under {±1}^rho_orb, by lexicographically minimal orbit element
std::uint64_t count_orbits(const OrbifoldPicard& orb, const std::vector<ExtendedPoint>& points);

struct CountResult {
  double B = 0;
  std::uint64_t points = 0;       // torsor points, all signs
  std::uint64_t orbits = 0;       // rational points
  std::uint64_t band = 0;         // orbits within the tolerance band of the boundary
  std::uint64_t zero_points = 0;  // torsor points with a vanishing y' coordinate
  std::uint64_t searched = 0;     // size of the search box actually scanned
  double wall_ms = 0;
};

// Streaming count over positive k and a sign-reduced y' box.
CountResult count_points(const OrbifoldPicard& orb, const Domain& D, double B,
                         std::uint64_t budget = kDefaultBudget, unsigned threads = 1);

// search box size before scanning (what the budget is compared against)
double search_size(const OrbifoldPicard& orb, const Domain& D, double B);

struct VerifyConfig {
  Domain domain;
  std::vector<double> B;
  std::int64_t prime_bound = 1000;
  std::uint64_t samples = 200000;
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
  bool timing = false;
};

struct CountRow {
  CountResult count;
  double predicted = 0;
  double ratio = 0;
  double quotient_count = 0;  // (#G / 2^rho_orb) * points
};

struct CountReport {
  std::vector<CountRow> rows;
  TamagawaReport tamagawa;
  double nu = 0;
  Rat exponent;  // <anticanonical, u>
};

CountReport verify(const OrbifoldPicard& orb, const VerifyConfig& cfg);

std::string report_csv(const CountReport& rep, bool timing);

}  // namespace sc
