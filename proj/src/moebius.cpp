#include "moebius.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace sc {

namespace {

bool leq(const ExponentTuple& a, const ExponentTuple& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

int weight(const ExponentTuple& l) {
  int s = 0;
  for (int x : l) s += x;
  return s;
}

}  // namespace

std::vector<ExponentTuple> excluded_generators(const OrbifoldPicard& orb) {
  const std::size_t r = orb.num_rays(), s = orb.num_sectors(), m = r + s;
  std::set<ExponentTuple> raw;
  for (std::size_t z = 0; z < s; ++z) {
    ExponentTuple g(m, 0);
    g[r + z] = 2;
    raw.insert(g);
    for (std::size_t z2 = z + 1; z2 < s; ++z2) {
      ExponentTuple h(m, 0);
      h[r + z] = h[r + z2] = 1;
      raw.insert(h);
    }
    for (auto& C : orb.primitive) {
      ExponentTuple h(m, 0);
      h[r + z] = 1;
      const Cone& car = orb.sectors[z].carrier;
      for (int rho : C)
        if (!std::binary_search(car.begin(), car.end(), rho)) h[rho] = 1;
      raw.insert(h);
    }
  }
  for (auto& C : orb.primitive) {
    ExponentTuple h(m, 0);
    for (int rho : C) h[rho] = 1;
    raw.insert(h);
  }
  std::vector<ExponentTuple> out;
  for (auto& g : raw) {
    bool dominated = false;
    for (auto& h : raw)
      if (h != g && leq(h, g)) dominated = true;
    if (!dominated) out.push_back(g);
  }
  return out;
}

bool is_excluded(const std::vector<ExponentTuple>& gens, const ExponentTuple& lambda) {
  for (auto& g : gens)
    if (leq(g, lambda)) return true;
  return false;
}

long LocalMoebius::at(const ExponentTuple& lambda) const {
  auto it = values.find(lambda);
  return it == values.end() ? 0 : it->second;
}

LocalMoebius local_moebius(const std::vector<ExponentTuple>& gens, std::size_t dim) {
  LocalMoebius mu;
  mu.dim = dim;
  ExponentTuple tau(dim, 0);
  for (;;) {
    std::vector<std::size_t> supp;
    for (std::size_t i = 0; i < dim; ++i)
      if (tau[i] > 0) supp.push_back(i);
    long v = 0;
    ExponentTuple x(dim);
    for (std::size_t S = 0; S < (std::size_t(1) << supp.size()); ++S) {
      x = tau;
      int sign = 1;
      for (std::size_t j = 0; j < supp.size(); ++j)
        if (S >> j & 1) --x[supp[j]], sign = -sign;
      if (!is_excluded(gens, x)) v += sign;
    }
    if (v != 0) mu.values[tau] = v;
    std::size_t i = 0;
    while (i < dim && tau[i] == 2) tau[i++] = 0;
    if (i == dim) break;
    ++tau[i];
  }
  return mu;
}

LocalMoebius local_moebius(const OrbifoldPicard& orb) {
  return local_moebius(excluded_generators(orb), orb.num_ext());
}

Rat DensityPolynomial::eval(const Rat& x) const {
  Rat v = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + Rat(coeffs[i]);
  return v;
}

double DensityPolynomial::eval(double x) const {
  long double v = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i].get_d();
  return double(v);
}

Int DensityPolynomial::abs_tail() const {
  Int a = 0;
  for (std::size_t i = 1; i < coeffs.size(); ++i) a += abs(coeffs[i]);
  return a;
}

std::string DensityPolynomial::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Int& c = coeffs[i];
    if (c == 0) continue;
    Int a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (a != 1 || i == 0) os << a.get_str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

DensityPolynomial local_density(const LocalMoebius& mu) {
  DensityPolynomial d;
  for (auto& [lambda, v] : mu.values) {
    std::size_t k = std::size_t(weight(lambda));
    if (d.coeffs.size() <= k) d.coeffs.resize(k + 1, Int(0));
    d.coeffs[k] += v;
  }
  while (d.coeffs.size() > 1 && d.coeffs.back() == 0) d.coeffs.pop_back();
  return d;
}

Rat density_ie_oracle(const std::vector<ExponentTuple>& gens, long p) {
  if (gens.size() > 24) throw Error(Errc::TooLarge, "too many generators for inclusion-exclusion");
  Rat sum = 0;
  const std::size_t dim = gens.empty() ? 0 : gens[0].size();
  for (std::size_t I = 0; I < (std::size_t(1) << gens.size()); ++I) {
    ExponentTuple join(dim, 0);
    int card = 0;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (!(I >> j & 1)) continue;
      ++card;
      for (std::size_t i = 0; i < dim; ++i) join[i] = std::max(join[i], gens[j][i]);
    }
    Int pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(weight(join)));
    Rat term(Int(1), pw);
    term.canonicalize();
    sum += card % 2 ? -term : term;
  }
  return sum;
}

Rat residue_density(const OrbifoldPicard& orb, long p, int n, std::uint64_t budget) {
  const std::size_t r = orb.num_rays(), s = orb.num_sectors(), m = r + s;
  if (p < 2 || n < 1) throw Error(Errc::InvalidArgument, "residue scan needs p >= 2 and n >= 1");
  std::uint64_t M = 1;
  for (int i = 0; i < n; ++i) M *= std::uint64_t(p);
  long double total_ld = std::pow((long double)M, (long double)m);
  if (total_ld > (long double)budget) throw Error(Errc::TooLarge, "residue scan exceeds the budget");
  std::vector<int> val(M);
  val[0] = n;
  for (std::uint64_t x = 1; x < M; ++x) {
    int v = 0;
    for (std::uint64_t y = x; y % std::uint64_t(p) == 0; y /= std::uint64_t(p)) ++v;
    val[x] = v;
  }
  std::vector<std::vector<std::vector<int>>> red(s);
  for (std::size_t z = 0; z < s; ++z)
    for (auto& C : orb.primitive) {
      std::vector<int> d;
      for (int rho : C)
        if (!std::binary_search(orb.sectors[z].carrier.begin(), orb.sectors[z].carrier.end(), rho))
          d.push_back(rho);
      red[z].push_back(d);
    }
  auto member = [&](const std::vector<int>& v) {
    int divided = 0;
    for (std::size_t z = 0; z < s; ++z) {
      if (v[r + z] >= 2) return false;
      if (v[r + z] >= 1) ++divided;
    }
    if (divided > 1) return false;
    for (auto& C : orb.primitive) {
      bool all = true;
      for (int rho : C) all = all && v[rho] >= 1;
      if (all) return false;
    }
    for (std::size_t z = 0; z < s; ++z) {
      if (v[r + z] == 0) continue;
      for (auto& d : red[z]) {
        bool all = true;
        for (int rho : d) all = all && v[rho] >= 1;
        if (all) return false;
      }
    }
    return true;
  };
  std::vector<std::uint64_t> x(m, 0);
  std::vector<int> v(m, n);
  std::uint64_t count = 0;
  for (;;) {
    if (member(v)) ++count;
    std::size_t i = 0;
    while (i < m && x[i] == M - 1) x[i] = 0, v[i] = n, ++i;
    if (i == m) break;
    ++x[i];
    v[i] = val[x[i]];
  }
  Int total;
  mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(M), static_cast<unsigned long>(m));
  Rat out(Int(std::to_string(count)), total);
  out.canonicalize();
  return out;
}

long global_moebius(const LocalMoebius& mu, const std::vector<std::int64_t>& d) {
  if (d.size() != mu.dim) throw Error(Errc::InvalidArgument, "tuple length");
  std::vector<std::int64_t> rest = d;
  for (auto x : rest)
    if (x <= 0) throw Error(Errc::InvalidArgument, "global Moebius needs positive entries");
  long out = 1;
  for (;;) {
    std::int64_t p = 0;
    for (auto x : rest) {
      if (x == 1) continue;
      std::int64_t q = x;
      for (std::int64_t f = 2; f * f <= q; ++f)
        if (q % f == 0) {
          q = f;
          break;
        }
      if (p == 0 || q < p) p = q;
    }
    if (p == 0) break;
    ExponentTuple lambda(d.size(), 0);
    for (std::size_t i = 0; i < rest.size(); ++i)
      while (rest[i] % p == 0) rest[i] /= p, ++lambda[i];
    out *= mu.at(lambda);
    if (out == 0) return 0;
  }
  return out;
}

McEstimate archimedean_density(const OrbifoldPicard& orb, const Domain& ref, std::uint64_t samples,
                               std::uint64_t seed) {
  const std::size_t r = orb.num_rays(), t = orb.pic.rank, s = orb.num_sectors();
  if (ref.lower.size() != orb.rho_orb || ref.upper.size() != orb.rho_orb)
    throw Error(Errc::InvalidArgument, "reference domain dimension");
  if (samples == 0) throw Error(Errc::InvalidArgument, "no samples");
  McEstimate est;
  est.samples = samples;
  est.nu = nu_measure(orb.anticanonical, ref.lower, ref.upper);
  if (!(est.nu > 0)) throw Error(Errc::DegenerateReference, "reference domain has zero measure");
  std::vector<double> klo(s), khi(s), ymax(r);
  double vol = 1;
  for (std::size_t z = 0; z < s; ++z) {
    klo[z] = std::exp(ref.lower[t + z]);
    khi[z] = std::exp(ref.upper[t + z]);
    vol *= 2 * (khi[z] - klo[z]);
  }
  for (std::size_t rho = 0; rho < r; ++rho) {
    double c = 0;
    for (std::size_t i = 0; i < t; ++i) {
      double a = orb.pic.class_map(i, rho).get_d();
      c += std::max(a * ref.lower[i], a * ref.upper[i]);
    }
    for (std::size_t z = 0; z < s; ++z) {
      double m = orb.m[z][rho].get_d();
      c -= m > 0 ? m * ref.lower[t + z] : m * ref.upper[t + z];
    }
    ymax[rho] = std::exp(c + 1e-12);
    vol *= 2 * ymax[rho];
  }
  est.box_volume = vol;
  HeightEngine eng(orb);
  Uniform rng(seed);
  std::vector<double> ell(r), logk(s), h(t);
  std::vector<unsigned char> zero(r);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    for (std::size_t z = 0; z < s; ++z) logk[z] = std::log(klo[z] + (khi[z] - klo[z]) * rng.next());
    for (std::size_t rho = 0; rho < r; ++rho) {
      double y = ymax[rho] * rng.next();
      zero[rho] = y == 0;
      double l = zero[rho] ? 0 : std::log(y);
      for (std::size_t z = 0; z < s; ++z) l += orb.m[z][rho].get_d() * logk[z];
      ell[rho] = l;
    }
    if (!eng.log_heights(ell.data(), zero.data(), h.data())) continue;
    bool in = true;
    for (std::size_t j = 0; j < t && in; ++j) in = h[j] >= ref.lower[j] && h[j] <= ref.upper[j];
    if (in) ++hits;
  }
  est.hits = hits;
  double frac = double(hits) / double(samples);
  double scale = std::ldexp(1.0, -int(orb.rho_orb)) / est.nu;
  est.value = vol * frac * scale;
  est.std_error = vol * std::sqrt(frac * (1 - frac) / double(samples)) * scale;
  return est;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<bool> comp(std::size_t(n) + 1, false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (comp[std::size_t(i)]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) comp[std::size_t(j)] = true;
  }
  return out;
}

std::int64_t group_order(const StackyFan& fan) {
  std::int64_t g = 1;
  for (auto& f : fan.n_torsion)
    if (f % 2 == 0) g *= 2;
  return g;
}

TamagawaReport tamagawa(const OrbifoldPicard& orb, std::int64_t prime_bound, std::uint64_t samples,
                        std::uint64_t seed, const Domain& reference) {
  if (prime_bound < 2) throw Error(Errc::InvalidArgument, "prime bound must be at least 2");
  TamagawaReport rep;
  rep.prime_bound = prime_bound;
  rep.samples = samples;
  rep.seed = seed;
  rep.group_order = group_order(orb.fan);
  rep.density = local_density(local_moebius(orb));
  long double prod = 1;
  for (auto p : primes_up_to(prime_bound)) prod *= rep.density.eval(1.0 / double(p));
  rep.euler_product = double(prod);
  rep.euler_tail_rel = std::expm1(rep.density.abs_tail().get_d() / double(prime_bound));
  McEstimate mc = archimedean_density(orb, reference, samples, seed);
  rep.mu_inf = mc.value;
  rep.mu_inf_se = mc.std_error;
  rep.value = mc.value * rep.euler_product / double(rep.group_order);
  rep.rel_error = (mc.value > 0 ? mc.std_error / mc.value : 0) + rep.euler_tail_rel;
  return rep;
}

TamagawaReport tamagawa(const OrbifoldPicard& orb, std::int64_t prime_bound, std::uint64_t samples,
                        std::uint64_t seed) {
  return tamagawa(orb, prime_bound, samples, seed, unit_box(orb, default_u(orb)));
}

}  // namespace sc
