#include "stackcount.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "count.hpp"

using nlohmann::json;

namespace sc {

const char* kVersion = "0.3.0";

namespace {

thread_local std::string g_error;
thread_local std::string g_kind;

sc_status to_status(Errc e) {
  switch (e) {
    case Errc::ParseError: return SC_ERR_PARSE;
    case Errc::NotSimplicial: return SC_ERR_NOT_SIMPLICIAL;
    case Errc::NotComplete: return SC_ERR_NOT_COMPLETE;
    case Errc::ZeroRay: return SC_ERR_ZERO_RAY;
    case Errc::DuplicateRay: return SC_ERR_DUPLICATE_RAY;
    case Errc::BadWeights: return SC_ERR_BAD_WEIGHTS;
    case Errc::TorsionPicard: return SC_ERR_TORSION_PICARD;
    case Errc::DegeneratePoint: return SC_ERR_DEGENERATE_POINT;
    case Errc::ZeroK: return SC_ERR_ZERO_K;
    case Errc::Budget: return SC_ERR_BUDGET;
    case Errc::TooLarge: return SC_ERR_TOO_LARGE;
    case Errc::Inconsistent:
    case Errc::NonIntegralExponent:
    case Errc::NoMatchingSector: return SC_ERR_INTERNAL;
    default: return SC_ERR_INVALID_ARGUMENT;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
sc_status guard(F&& f) {
  try {
    f();
    g_error.clear();
    g_kind.clear();
    return SC_OK;
  } catch (const Error& e) {
    g_error = e.what();
    g_kind = errc_name(e.code());
    return to_status(e.code());
  } catch (const json::exception& e) {
    g_error = std::string("ParseError: ") + e.what();
    g_kind = "ParseError";
    return SC_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_error = "TooLarge: out of memory";
    g_kind = "TooLarge";
    return SC_ERR_TOO_LARGE;
  } catch (const std::exception& e) {
    g_error = std::string("Internal: ") + e.what();
    g_kind = "Internal";
    return SC_ERR_INTERNAL;
  }
}

std::string str(const Int& x) { return x.get_str(); }
std::string str(const Rat& x) { return x.get_str(); }

template <class V>
json strs(const V& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(str(x));
  return a;
}

Int parse_int(const json& j, const char* what) {
  if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    Int x;
    if (x.set_str(j.get<std::string>(), 10) != 0)
      throw Error(Errc::ParseError, std::string("bad integer in ") + what);
    return x;
  }
  throw Error(Errc::ParseError, std::string("expected an integer in ") + what);
}

Rat parse_rat(const json& j, const char* what) {
  if (j.is_number_integer()) return Rat(parse_int(j, what));
  if (j.is_string()) {
    Rat x;
    if (x.set_str(j.get<std::string>(), 10) != 0 || x.get_den() == 0)
      throw Error(Errc::ParseError, std::string("bad rational in ") + what);
    x.canonicalize();
    return x;
  }
  throw Error(Errc::ParseError, std::string("expected an integer or a fraction string in ") + what);
}

json parse_text(const char* text, const char* what) {
  if (!text) return json::object();
  std::string s(text);
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < s.size(); ++i) {
      if (s[i] == '\n') ++line, col = 1;
      else ++col;
    }
    throw Error(Errc::ParseError, std::string(what) + " line " + std::to_string(line) + ", column " +
                                      std::to_string(col) + ": " + e.what());
  }
}

FanSpec parse_fan(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "fan must be a JSON object");
  FanSpec spec;
  if (j.contains("weights")) {
    IntVec w;
    for (auto& x : j.at("weights")) w.push_back(parse_int(x, "weights"));
    spec.weights = w;
    return spec;
  }
  for (const char* key : {"n_rank", "rays", "max_cones"})
    if (!j.contains(key)) throw Error(Errc::ParseError, std::string("fan is missing \"") + key + "\"");
  spec.n_rank = j.at("n_rank").get<int>();
  if (j.contains("n_torsion"))
    for (auto& x : j.at("n_torsion")) spec.n_torsion.push_back(parse_int(x, "n_torsion"));
  for (auto& ray : j.at("rays")) {
    IntVec v;
    for (auto& x : ray) v.push_back(parse_int(x, "rays"));
    spec.rays.push_back(v);
  }
  for (auto& c : j.at("max_cones")) spec.max_cones.push_back(c.get<Cone>());
  return spec;
}

json fan_json(const StackyFan& f) {
  json j;
  if (f.weights) j["weights"] = strs(*f.weights);
  j["n_rank"] = f.n_rank;
  j["n_torsion"] = strs(f.n_torsion);
  json rays = json::array();
  for (std::size_t r = 0; r < f.num_rays(); ++r) {
    json ray = strs(f.ray_free[r]);
    for (auto& x : f.ray_tors[r]) ray.push_back(str(x));
    rays.push_back(ray);
  }
  j["rays"] = rays;
  j["max_cones"] = f.max_cones;
  return j;
}

}  // namespace

}  // namespace sc

using namespace sc;

struct sc_fan {
  StackyFan fan;
  std::unique_ptr<OrbifoldPicard> orb;

  const OrbifoldPicard& orbifold() {
    if (!orb) orb = std::make_unique<OrbifoldPicard>(orbifold_basis(fan));
    return *orb;
  }
};

namespace {

struct Config {
  Domain domain;
  std::vector<double> B;
  std::int64_t prime_bound = 0;
  std::uint64_t samples = 0, seed = 0;
  bool has_seed = false;
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
  bool timing = false;
};

template <class T>
T positive(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() <= 0)
    throw Error(Errc::InvalidArgument, std::string(key) + " must be a positive integer");
  return T(j.get<long long>());
}

Config resolve(const OrbifoldPicard& orb, const json& cfg, std::int64_t default_primes) {
  if (!cfg.is_object()) throw Error(Errc::ParseError, "config must be a JSON object");
  Config c;
  RatVec u;
  const json* dom = cfg.contains("domain") ? &cfg.at("domain") : nullptr;
  if (cfg.contains("u")) {
    for (auto& x : cfg.at("u")) u.push_back(parse_rat(x, "u"));
  } else if (dom && dom->contains("u")) {
    for (auto& x : dom->at("u")) u.push_back(parse_rat(x, "domain.u"));
  } else {
    u = default_u(orb);
  }
  if (u.size() != orb.rho_orb)
    throw Error(Errc::InvalidArgument, "u must have " + std::to_string(orb.rho_orb) + " entries");
  c.domain = unit_box(orb, u);
  if (dom) {
    if (dom->contains("lower")) c.domain.lower = dom->at("lower").get<std::vector<double>>();
    if (dom->contains("upper")) c.domain.upper = dom->at("upper").get<std::vector<double>>();
    if (c.domain.lower.size() != orb.rho_orb || c.domain.upper.size() != orb.rho_orb)
      throw Error(Errc::InvalidArgument, "domain bounds must have " + std::to_string(orb.rho_orb) + " entries");
    for (std::size_t i = 0; i < orb.rho_orb; ++i)
      if (!(c.domain.lower[i] <= c.domain.upper[i]))
        throw Error(Errc::InvalidArgument, "domain lower bound exceeds upper bound");
  }
  if (cfg.contains("B")) {
    const json& b = cfg.at("B");
    if (b.is_array()) c.B = b.get<std::vector<double>>();
    else c.B.push_back(b.get<double>());
    for (double x : c.B)
      if (!(x >= 1)) throw Error(Errc::InvalidArgument, "B values must be at least 1");
  }
  c.prime_bound = cfg.contains("prime_bound") ? positive<std::int64_t>(cfg.at("prime_bound"), "prime_bound")
                                              : default_primes;
  c.samples = cfg.contains("samples") ? positive<std::uint64_t>(cfg.at("samples"), "samples") : 200000;
  if (cfg.contains("seed")) {
    const json& s = cfg.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0)
      throw Error(Errc::InvalidArgument, "seed must be a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
    c.has_seed = true;
  }
  if (cfg.contains("budget")) c.budget = positive<std::uint64_t>(cfg.at("budget"), "budget");
  if (cfg.contains("threads")) c.threads = positive<unsigned>(cfg.at("threads"), "threads");
  if (cfg.contains("timing")) c.timing = cfg.at("timing").get<bool>();
  return c;
}

json echo(const Config& c, bool mc, bool count) {
  json j;
  j["domain"] = {{"lower", c.domain.lower}, {"upper", c.domain.upper}, {"u", strs(c.domain.u)}};
  if (count) {
    j["B"] = c.B;
    j["budget"] = c.budget;
    j["threads"] = c.threads;
    j["timing"] = c.timing;
  }
  j["prime_bound"] = c.prime_bound;
  if (mc) {
    j["samples"] = c.samples;
    j["seed"] = c.seed;
  }
  return j;
}

json tamagawa_json(const TamagawaReport& t) {
  return {{"value", t.value},
          {"mu_inf", t.mu_inf},
          {"mu_inf_std_error", t.mu_inf_se},
          {"euler_product", t.euler_product},
          {"euler_tail_bound", t.euler_tail_rel},
          {"relative_error", t.rel_error},
          {"group_order", t.group_order},
          {"polynomial", t.density.str()},
          {"prime_bound", t.prime_bound},
          {"samples", t.samples},
          {"seed", t.seed}};
}

json row_json(const CountRow* row, const CountResult& c, bool timing) {
  json j = {{"B", c.B},         {"points", c.points},           {"orbits", c.orbits},
            {"band", c.band},   {"zero_points", c.zero_points}, {"searched", c.searched},
            {"wall_ms", timing ? std::round(c.wall_ms) : 0.0}};
  if (row) {
    j["predicted"] = row->predicted;
    j["ratio"] = row->ratio;
    j["quotient_count"] = row->quotient_count;
  }
  return j;
}

json base_report(const char* command, sc_fan* f) {
  return {{"command", command}, {"version", kVersion}, {"fan", fan_json(f->fan)}};
}

}  // namespace

extern "C" {

const char* sc_version(void) { return kVersion; }

const char* sc_status_name(sc_status s) {
  switch (s) {
    case SC_OK: return "Ok";
    case SC_ERR_PARSE: return "ParseError";
    case SC_ERR_NOT_SIMPLICIAL: return "NotSimplicial";
    case SC_ERR_NOT_COMPLETE: return "NotComplete";
    case SC_ERR_ZERO_RAY: return "ZeroRay";
    case SC_ERR_DUPLICATE_RAY: return "DuplicateRay";
    case SC_ERR_BAD_WEIGHTS: return "BadWeights";
    case SC_ERR_TORSION_PICARD: return "TorsionPicard";
    case SC_ERR_DEGENERATE_POINT: return "DegeneratePoint";
    case SC_ERR_ZERO_K: return "ZeroK";
    case SC_ERR_BUDGET: return "Budget";
    case SC_ERR_TOO_LARGE: return "TooLarge";
    case SC_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case SC_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* sc_last_error(void) { return g_error.c_str(); }
const char* sc_last_error_kind(void) { return g_kind.c_str(); }

void sc_string_free(char* s) { std::free(s); }

sc_status sc_fan_from_json(const char* text, sc_fan** out) {
  if (!out) return SC_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guard([&] {
    if (!text) throw Error(Errc::InvalidArgument, "null fan text");
    auto f = std::make_unique<sc_fan>();
    f->fan = build_fan(parse_fan(parse_text(text, "fan")));
    *out = f.release();
  });
}

sc_status sc_fan_weighted(const int64_t* weights, size_t n, sc_fan** out) {
  if (!out) return SC_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guard([&] {
    if (!weights && n) throw Error(Errc::InvalidArgument, "null weights");
    IntVec w;
    for (size_t i = 0; i < n; ++i) w.push_back(Int(std::to_string(weights[i])));
    auto f = std::make_unique<sc_fan>();
    f->fan = weighted_projective(w);
    *out = f.release();
  });
}

void sc_fan_free(sc_fan* fan) { delete fan; }

sc_status sc_analyze(const sc_fan* cfan, char** json_out) {
  if (!cfan || !json_out) return SC_ERR_INVALID_ARGUMENT;
  auto* f = const_cast<sc_fan*>(cfan);
  return guard([&] {
    const OrbifoldPicard& o = f->orbifold();
    json j = base_report("analyze", f);
    json fj = fan_json(o.fan);
    for (auto it = fj.begin(); it != fj.end(); ++it) j[it.key()] = it.value();
    j["primitive_collections"] = o.primitive;
    json cm = json::array();
    for (std::size_t i = 0; i < o.pic.rank; ++i) cm.push_back(strs(o.pic.class_map.row(i)));
    json reps = json::array();
    for (auto& a : o.pic.basis_reps) reps.push_back(strs(a));
    j["picard"] = {{"rank", o.pic.rank},
                   {"torsion", strs(o.pic.torsion_factors)},
                   {"class_map", cm},
                   {"basis_reps", reps}};
    json sectors = json::array();
    for (std::size_t z = 0; z < o.num_sectors(); ++z) {
      const BoxSector& b = o.sectors[z];
      json ages = json::array();
      for (auto& a : o.pic.basis_reps) ages.push_back(str(age_numeric(b, a)));
      json ray_ages = json::array();
      for (std::size_t rho = 0; rho < o.num_rays(); ++rho) {
        IntVec e(o.num_rays(), Int(0));
        e[rho] = 1;
        ray_ages.push_back(str(age_numeric(b, e)));
      }
      sectors.push_back({{"element", strs(b.free)},
                         {"carrier", b.carrier},
                         {"q", strs(b.q)},
                         {"order", str(b.exponent)},
                         {"age_basis", ages},
                         {"age_rays", ray_ages},
                         {"lift", strs(o.lift[z])},
                         {"m", strs(o.m[z])}});
    }
    j["twisted_sectors"] = o.num_sectors();
    j["sectors"] = sectors;
    j["rho_orb"] = o.rho_orb;
    json ds = json::array();
    for (auto& d : o.d_rho_stack) ds.push_back(strs(d));
    j["divisor_classes"] = ds;
    json eff = json::array();
    for (auto& g : o.effective_generators) eff.push_back(strs(g));
    j["effective_generators"] = eff;
    j["anticanonical"] = strs(o.anticanonical);
    RatVec u = default_u(o);
    j["default_u"] = strs(u);
    j["anticanonical_u"] = str(pairing(o.anticanonical, u));
    j["class_lattice_invariant_factors"] = strs(orbifold_class_lattice(o).invariant_factors);
    *json_out = dup(j.dump(2) + "\n");
  });
}

sc_status sc_density(const sc_fan* cfan, const char* config, char** json_out) {
  if (!cfan || !json_out) return SC_ERR_INVALID_ARGUMENT;
  auto* f = const_cast<sc_fan*>(cfan);
  return guard([&] {
    const OrbifoldPicard& o = f->orbifold();
    Config c = resolve(o, parse_text(config, "config"), 50);
    auto gens = excluded_generators(o);
    auto mu = local_moebius(gens, o.num_ext());
    auto poly = local_density(mu);
    json j = base_report("density", f);
    j["config"] = {{"prime_bound", c.prime_bound}};
    j["generators"] = gens;
    json mj = json::array();
    for (auto& [lambda, v] : mu.values) mj.push_back({{"lambda", lambda}, {"value", v}});
    j["moebius"] = mj;
    j["polynomial"] = poly.str();
    j["coefficients"] = strs(poly.coeffs);
    json per = json::array();
    for (auto p : primes_up_to(c.prime_bound)) per.push_back({{"p", p}, {"factor", str(poly.eval(Rat(1, p)))}});
    j["local_factors"] = per;
    *json_out = dup(j.dump(2) + "\n");
  });
}

sc_status sc_tamagawa(const sc_fan* cfan, const char* config, char** json_out) {
  if (!cfan || !json_out) return SC_ERR_INVALID_ARGUMENT;
  auto* f = const_cast<sc_fan*>(cfan);
  return guard([&] {
    const OrbifoldPicard& o = f->orbifold();
    Config c = resolve(o, parse_text(config, "config"), 1000);
    if (!c.has_seed) throw Error(Errc::InvalidArgument, "a seed is required for Monte Carlo");
    TamagawaReport t = tamagawa(o, c.prime_bound, c.samples, c.seed, c.domain);
    json j = base_report("tamagawa", f);
    j["config"] = echo(c, true, false);
    j["tamagawa"] = tamagawa_json(t);
    *json_out = dup(j.dump(2) + "\n");
  });
}

sc_status sc_count(const sc_fan* cfan, const char* config, char** csv_out, char** json_out) {
  if (!cfan) return SC_ERR_INVALID_ARGUMENT;
  auto* f = const_cast<sc_fan*>(cfan);
  return guard([&] {
    const OrbifoldPicard& o = f->orbifold();
    Config c = resolve(o, parse_text(config, "config"), 1000);
    if (c.B.empty()) throw Error(Errc::InvalidArgument, "no B values given");
    CountReport rep;
    json rows = json::array();
    for (double B : c.B) {
      CountRow row;
      row.count = count_points(o, c.domain, B, c.budget, c.threads);
      rows.push_back(row_json(nullptr, row.count, c.timing));
      rep.rows.push_back(row);
    }
    if (csv_out) *csv_out = dup(report_csv(rep, c.timing));
    if (json_out) {
      json j = base_report("count", f);
      j["config"] = echo(c, false, true);
      j["rows"] = rows;
      *json_out = dup(j.dump(2) + "\n");
    }
  });
}

sc_status sc_verify(const sc_fan* cfan, const char* config, char** csv_out, char** json_out) {
  if (!cfan) return SC_ERR_INVALID_ARGUMENT;
  auto* f = const_cast<sc_fan*>(cfan);
  return guard([&] {
    const OrbifoldPicard& o = f->orbifold();
    Config c = resolve(o, parse_text(config, "config"), 1000);
    if (c.B.empty()) throw Error(Errc::InvalidArgument, "no B values given");
    if (!c.has_seed) throw Error(Errc::InvalidArgument, "a seed is required for Monte Carlo");
    VerifyConfig vc;
    vc.domain = c.domain;
    vc.B = c.B;
    vc.prime_bound = c.prime_bound;
    vc.samples = c.samples;
    vc.seed = c.seed;
    vc.budget = c.budget;
    vc.threads = c.threads;
    vc.timing = c.timing;
    CountReport rep = verify(o, vc);
    if (csv_out) *csv_out = dup(report_csv(rep, c.timing));
    if (json_out) {
      json j = base_report("verify", f);
      j["config"] = echo(c, true, true);
      j["nu"] = rep.nu;
      j["exponent"] = str(rep.exponent);
      j["tamagawa"] = tamagawa_json(rep.tamagawa);
      json rows = json::array();
      for (auto& r : rep.rows) rows.push_back(row_json(&r, r.count, c.timing));
      j["rows"] = rows;
      *json_out = dup(j.dump(2) + "\n");
    }
  });
}

sc_status sc_gcd_w(const int64_t* weights, const int64_t* x, size_t n, int64_t* out) {
  if (!weights || !x || !out) return SC_ERR_INVALID_ARGUMENT;
  return guard([&] {
    std::vector<std::int64_t> w(weights, weights + n), v(x, x + n);
    for (auto a : w)
      if (a <= 0) throw Error(Errc::BadWeights, "weights must be positive");
    *out = gcd_w(w, v);
  });
}

sc_status sc_extended_height(const sc_fan* cfan, const int64_t* y, size_t ny, const int64_t* k, size_t nk,
                             double* out, size_t nout) {
  if (!cfan || !y || !out || (nk && !k)) return SC_ERR_INVALID_ARGUMENT;
  auto* f = const_cast<sc_fan*>(cfan);
  return guard([&] {
    const OrbifoldPicard& o = f->orbifold();
    if (ny != o.num_rays() || nk != o.num_sectors() || nout != o.rho_orb)
      throw Error(Errc::InvalidArgument, "length mismatch");
    IntVec yy, kk;
    for (size_t i = 0; i < ny; ++i) yy.push_back(Int(std::to_string(y[i])));
    for (size_t i = 0; i < nk; ++i) kk.push_back(Int(std::to_string(k[i])));
    auto h = extended_height(o, yy, kk);
    for (size_t i = 0; i < nout; ++i) out[i] = h[i];
  });
}

sc_status sc_rho_orb(const sc_fan* cfan, size_t* out) {
  if (!cfan || !out) return SC_ERR_INVALID_ARGUMENT;
  auto* f = const_cast<sc_fan*>(cfan);
  return guard([&] { *out = f->orbifold().rho_orb; });
}

}
