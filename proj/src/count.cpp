#include "count.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace sc {

namespace {

struct Search {
  std::size_t r = 0, t = 0, s = 0;
  std::vector<double> lo, hi;                // log-height bounds of D_B
  std::vector<std::vector<std::int64_t>> ks;  // admissible positive k tuples
  std::vector<std::vector<std::int64_t>> ymax;
  std::int64_t ymax_all = 0;
};

Search prepare(const OrbifoldPicard& orb, const Domain& D, double B) {
  if (!(B >= 1)) throw Error(Errc::InvalidArgument, "B must be at least 1");
  Search S;
  S.r = orb.num_rays();
  S.t = orb.pic.rank;
  S.s = orb.num_sectors();
  BoundingBox bb = bounding_box(orb, D, B);
  const double lb = std::log(B);
  for (std::size_t i = 0; i < orb.rho_orb; ++i) {
    S.lo.push_back(D.lower[i] + lb * D.u[i].get_d());
    S.hi.push_back(D.upper[i] + lb * D.u[i].get_d());
  }
  std::vector<std::int64_t> k(S.s);
  for (std::size_t z = 0; z < S.s; ++z) {
    if (bb.kmin[z] > bb.kmax[z]) return S;
    k[z] = bb.kmin[z];
  }
  for (;;) {
    if (k_admissible(k)) S.ks.push_back(k);
    std::size_t z = 0;
    while (z < S.s && k[z] == bb.kmax[z]) k[z] = bb.kmin[z], ++z;
    if (z == S.s) break;
    ++k[z];
  }
  std::vector<double> logk(S.s);
  for (auto& kk : S.ks) {
    for (std::size_t z = 0; z < S.s; ++z) logk[z] = std::log(double(kk[z]));
    std::vector<std::int64_t> ym(S.r);
    for (std::size_t rho = 0; rho < S.r; ++rho) {
      double l = bb.log_yprime(orb, rho, logk.data());
      if (l > 60) throw Error(Errc::Budget, "coordinate bound exceeds 64-bit range");
      ym[rho] = std::int64_t(std::floor(std::exp(l)));
      S.ymax_all = std::max(S.ymax_all, ym[rho]);
    }
    S.ymax.push_back(ym);
  }
  return S;
}

// rays whose classes are independent mod 2; the stabilizer of k > 0 acts on
// their signs simply transitively
std::vector<int> sign_rays(const OrbifoldPicard& orb) {
  const std::size_t t = orb.pic.rank, r = orb.num_rays();
  std::vector<std::vector<int>> basis;
  std::vector<int> out;
  for (std::size_t rho = 0; rho < r && out.size() < t; ++rho) {
    std::vector<int> v(t);
    for (std::size_t i = 0; i < t; ++i) v[i] = int(mpz_odd_p(orb.pic.class_map(i, rho).get_mpz_t()) != 0);
    for (auto& b : basis) {
      std::size_t piv = std::find(b.begin(), b.end(), 1) - b.begin();
      if (v[piv]) for (std::size_t i = 0; i < t; ++i) v[i] ^= b[i];
    }
    if (std::find(v.begin(), v.end(), 1) == v.end()) continue;
    std::size_t piv = std::find(v.begin(), v.end(), 1) - v.begin();
    for (auto& b : basis)
      if (b[piv]) for (std::size_t i = 0; i < t; ++i) b[i] ^= v[i];
    basis.push_back(v);
    out.push_back(int(rho));
  }
  if (out.size() != t) throw Error(Errc::Inconsistent, "Picard classes do not span modulo 2");
  return out;
}

// per element of {±1}^t (as a bitmask), the set of rays whose sign flips
std::vector<std::uint64_t> flip_masks(const OrbifoldPicard& orb) {
  const std::size_t t = orb.pic.rank, r = orb.num_rays();
  std::vector<std::uint64_t> out(std::size_t(1) << t, 0);
  for (std::size_t e = 0; e < out.size(); ++e)
    for (std::size_t rho = 0; rho < r; ++rho) {
      int par = 0;
      for (std::size_t i = 0; i < t; ++i)
        if (e >> i & 1) par ^= int(mpz_odd_p(orb.pic.class_map(i, rho).get_mpz_t()) != 0);
      if (par) out[e] |= std::uint64_t(1) << rho;
    }
  return out;
}

class Evaluator {
 public:
  Evaluator(const OrbifoldPicard& orb, const Search& S)
      : orb_(orb), S_(S), eng_(orb), gcd_(orb), logtab_(std::size_t(S.ymax_all) + 1, 0.0) {
    for (std::size_t i = 1; i < logtab_.size(); ++i) logtab_[i] = std::log(double(i));
    if (S.r > 64 || orb.rho_orb > 64) throw Error(Errc::TooLarge, "too many coordinates");
  }

  void set_k(const std::vector<std::int64_t>& k) {
    k_ = k;
    off_.assign(S_.r, 0.0);
    logk_.assign(S_.s, 0.0);
    for (std::size_t z = 0; z < S_.s; ++z) logk_[z] = std::log(double(k[z]));
    for (std::size_t rho = 0; rho < S_.r; ++rho)
      for (std::size_t z = 0; z < S_.s; ++z) off_[rho] += orb_.m[z][rho].get_d() * logk_[z];
  }

  // 0 outside, 1 inside, 2 inside within the band
  int test(const std::int64_t* y) {
    if (!gcd_(y, k_.data())) return 0;
    for (std::size_t rho = 0; rho < S_.r; ++rho) {
      zero_[rho] = y[rho] == 0;
      ell_[rho] = zero_[rho] ? 0.0 : logtab_[std::size_t(y[rho] < 0 ? -y[rho] : y[rho])] + off_[rho];
    }
    if (!eng_.log_heights(ell_, zero_, h_)) return 0;
    for (std::size_t z = 0; z < S_.s; ++z) h_[S_.t + z] = logk_[z];
    bool band = false;
    for (std::size_t i = 0; i < S_.t + S_.s; ++i) {
      if (h_[i] < S_.lo[i] - kBand || h_[i] > S_.hi[i] + kBand) return 0;
      if (std::fabs(h_[i] - S_.lo[i]) <= kBand || std::fabs(h_[i] - S_.hi[i]) <= kBand) band = true;
    }
    return band ? 2 : 1;
  }

 private:
  const OrbifoldPicard& orb_;
  const Search& S_;
  HeightEngine eng_;
  GcdTest gcd_;
  std::vector<double> logtab_;
  std::vector<std::int64_t> k_;
  std::vector<double> off_, logk_;
  double ell_[64], h_[64];
  unsigned char zero_[64];
};

double box_size(const Search& S, const std::vector<int>& R, bool all_signs) {
  double total = 0;
  for (auto& ym : S.ymax) {
    double b = all_signs ? std::ldexp(1.0, int(S.s)) : 1.0;
    for (std::size_t rho = 0; rho < S.r; ++rho) {
      bool half = !all_signs && std::find(R.begin(), R.end(), int(rho)) != R.end();
      b *= half ? double(ym[rho]) + 1 : 2 * double(ym[rho]) + 1;
    }
    total += b;
  }
  return total;
}

}  // namespace

double search_size(const OrbifoldPicard& orb, const Domain& D, double B) {
  return box_size(prepare(orb, D, B), sign_rays(orb), false);
}

std::vector<ExtendedPoint> enumerate_points(const OrbifoldPicard& orb, const Domain& D, double B,
                                            std::uint64_t budget) {
  Search S = prepare(orb, D, B);
  if (box_size(S, {}, true) > double(budget)) throw Error(Errc::Budget, "search box exceeds the point budget");
  Evaluator ev(orb, S);
  std::vector<ExtendedPoint> out;
  std::vector<std::int64_t> y(S.r);
  for (std::size_t ki = 0; ki < S.ks.size(); ++ki) {
    const auto& k = S.ks[ki];
    const auto& ym = S.ymax[ki];
    ev.set_k(k);
    for (std::size_t rho = 0; rho < S.r; ++rho) y[rho] = -ym[rho];
    for (;;) {
      if (ev.test(y.data())) {
        for (std::size_t sg = 0; sg < (std::size_t(1) << S.s); ++sg) {
          ExtendedPoint p{y, k};
          for (std::size_t z = 0; z < S.s; ++z)
            if (sg >> z & 1) p.k[z] = -p.k[z];
          out.push_back(std::move(p));
        }
      }
      std::size_t rho = 0;
      while (rho < S.r && y[rho] == ym[rho]) y[rho] = -ym[rho], ++rho;
      if (rho == S.r) break;
      ++y[rho];
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_orbits(const OrbifoldPicard& orb, const std::vector<ExtendedPoint>& points) {
  const std::size_t r = orb.num_rays(), s = orb.num_sectors(), n = orb.rho_orb;
  std::vector<std::vector<int>> par(r, std::vector<int>(n));
  for (std::size_t rho = 0; rho < r; ++rho)
    for (std::size_t i = 0; i < n; ++i) par[rho][i] = int(mpz_odd_p(orb.d_rho_stack[rho][i].get_mpz_t()) != 0);
  std::set<ExtendedPoint> reps;
  for (auto& p : points) {
    ExtendedPoint best = p;
    for (std::size_t e = 1; e < (std::size_t(1) << n); ++e) {
      ExtendedPoint q = p;
      for (std::size_t rho = 0; rho < r; ++rho) {
        int f = 0;
        for (std::size_t i = 0; i < n; ++i)
          if (e >> i & 1) f ^= par[rho][i];
        if (f) q.y[rho] = -q.y[rho];
      }
      for (std::size_t z = 0; z < s; ++z)
        if (e >> (orb.pic.rank + z) & 1) q.k[z] = -q.k[z];
      best = std::min(best, q);
    }
    reps.insert(best);
  }
  return reps.size();
}

CountResult count_points(const OrbifoldPicard& orb, const Domain& D, double B, std::uint64_t budget,
                         unsigned threads) {
  auto t0 = std::chrono::steady_clock::now();
  Search S = prepare(orb, D, B);
  const std::vector<int> R = sign_rays(orb);
  const double size = box_size(S, R, false);
  if (size > double(budget)) throw Error(Errc::Budget, "search box exceeds the point budget");
  const auto flips = flip_masks(orb);
  std::uint64_t in_R = 0;
  for (int rho : R) in_R |= std::uint64_t(1) << rho;
  const std::uint64_t sector_mult = std::uint64_t(1) << S.s;
  const std::uint64_t free_orbit = std::uint64_t(1) << orb.rho_orb;

  struct Task {
    std::size_t ki;
    std::int64_t y0;
  };
  std::vector<Task> tasks;
  for (std::size_t ki = 0; ki < S.ks.size(); ++ki) {
    std::int64_t a = (in_R & 1) ? 0 : -S.ymax[ki][0];
    for (std::int64_t v = a; v <= S.ymax[ki][0]; ++v) tasks.push_back({ki, v});
  }

  CountResult total;
  total.B = B;
  total.searched = std::uint64_t(size);
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    Evaluator ev(orb, S);
    CountResult loc;
    std::vector<std::int64_t> y(S.r), img(S.r), best(S.r);
    std::size_t cur_k = std::size_t(-1);
    for (;;) {
      std::size_t ti = next.fetch_add(1);
      if (ti >= tasks.size()) break;
      const Task& task = tasks[ti];
      const auto& ym = S.ymax[task.ki];
      if (task.ki != cur_k) ev.set_k(S.ks[task.ki]), cur_k = task.ki;
      std::vector<std::int64_t> lo(S.r);
      for (std::size_t rho = 0; rho < S.r; ++rho) lo[rho] = (in_R >> rho & 1) ? 0 : -ym[rho];
      y = lo;
      y[0] = task.y0;
      if (S.r == 1) lo[0] = task.y0;
      for (;;) {
        int res = ev.test(y.data());
        if (res) {
          bool zero_R = false, any_zero = false;
          for (std::size_t rho = 0; rho < S.r; ++rho) {
            if (y[rho] == 0) {
              any_zero = true;
              if (in_R >> rho & 1) zero_R = true;
            }
          }
          std::uint64_t orbit = 0;
          if (!zero_R) {
            orbit = free_orbit;
          } else {
            std::set<std::vector<std::int64_t>> images;
            bool first = true;
            for (auto f : flips) {
              for (std::size_t rho = 0; rho < S.r; ++rho) img[rho] = (f >> rho & 1) ? -y[rho] : y[rho];
              images.insert(img);
              bool ok = true;
              for (int rho : R) ok = ok && img[rho] >= 0;
              if (ok && (first || img < best)) best = img, first = false;
            }
            if (best == y) orbit = images.size() * sector_mult;
          }
          if (orbit) {
            ++loc.orbits;
            loc.points += orbit;
            if (res == 2) ++loc.band;
            if (any_zero) loc.zero_points += orbit;
          }
        }
        std::size_t rho = 1;
        while (rho < S.r && y[rho] == ym[rho]) y[rho] = lo[rho], ++rho;
        if (rho >= S.r) break;
        ++y[rho];
      }
    }
    std::lock_guard<std::mutex> g(mu);
    total.points += loc.points;
    total.orbits += loc.orbits;
    total.band += loc.band;
    total.zero_points += loc.zero_points;
  };
  unsigned n = std::max(1u, threads);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  total.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return total;
}

CountReport verify(const OrbifoldPicard& orb, const VerifyConfig& cfg) {
  for (std::size_t i = 1; i < cfg.B.size(); ++i)
    if (!(cfg.B[i] > cfg.B[i - 1])) throw Error(Errc::InvalidArgument, "B list must be increasing");
  CountReport rep;
  rep.exponent = pairing(orb.anticanonical, cfg.domain.u);
  rep.nu = nu_measure(orb.anticanonical, cfg.domain.lower, cfg.domain.upper);
  rep.tamagawa = tamagawa(orb, cfg.prime_bound, cfg.samples, cfg.seed, cfg.domain);
  const double quot = double(rep.tamagawa.group_order) * std::ldexp(1.0, -int(orb.rho_orb));
  for (double B : cfg.B) {
    CountRow row;
    row.count = count_points(orb, cfg.domain, B, cfg.budget, cfg.threads);
    row.predicted = rep.nu * rep.tamagawa.value * std::pow(B, rep.exponent.get_d());
    row.ratio = row.predicted > 0 ? double(row.count.orbits) / row.predicted : 0;
    row.quotient_count = quot * double(row.count.points);
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

std::string report_csv(const CountReport& rep, bool timing) {
  std::ostringstream os;
  os << "B,points,orbits,predicted,ratio,band,wall_ms\n";
  for (auto& row : rep.rows) {
    os << num(row.count.B) << ',' << row.count.points << ',' << row.count.orbits << ','
       << num(row.predicted) << ',' << num(row.ratio) << ',' << row.count.band << ','
       << (timing ? num(std::round(row.count.wall_ms)) : std::string("0")) << '\n';
  }
  return os.str();
}

}  // namespace sc
