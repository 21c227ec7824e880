#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "stackcount.h"

using nlohmann::json;

namespace {

struct Options {
  std::string fan, weights, domain, u, B, out, format = "csv";
  long long prime_bound = 0, samples = 0, seed = -1, threads = 0, budget = 0;
  bool timing = false;
};

enum Exit { kOk = 0, kOther = 1, kInput = 2, kBudget = 3 };

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int fail(sc_status st) {
  json err = {{"error", sc_last_error_kind()}, {"status", sc_status_name(st)}, {"message", sc_last_error()}};
  std::cout << err.dump(2) << "\n";
  std::cerr << "error: " << sc_last_error() << "\n";
  switch (st) {
    case SC_ERR_BUDGET:
    case SC_ERR_TOO_LARGE: return kBudget;
    case SC_ERR_INTERNAL: return kOther;
    default: return kInput;
  }
}

int usage_error(const std::string& msg) {
  json err = {{"error", "InvalidArgument"}, {"status", "InvalidArgument"}, {"message", msg}};
  std::cout << err.dump(2) << "\n";
  std::cerr << "error: " << msg << "\n";
  return kInput;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

json config_json(const Options& o) {
  json c = json::object();
  if (!o.domain.empty()) c["domain"] = json::parse(slurp(o.domain));
  if (!o.u.empty()) c["u"] = split(o.u);
  if (!o.B.empty()) {
    std::vector<double> b;
    for (auto& t : split(o.B)) b.push_back(std::stod(t));
    c["B"] = b;
  }
  if (o.prime_bound) c["prime_bound"] = o.prime_bound;
  if (o.samples) c["samples"] = o.samples;
  if (o.seed >= 0) c["seed"] = o.seed;
  if (o.threads) c["threads"] = o.threads;
  if (o.budget) c["budget"] = o.budget;
  if (o.timing) c["timing"] = true;
  return c;
}

int run(const std::string& cmd, const Options& o) {
  sc_fan* fan = nullptr;
  sc_status st;
  if (!o.weights.empty()) {
    std::vector<int64_t> w;
    for (auto& t : split(o.weights)) w.push_back(std::stoll(t));
    st = sc_fan_weighted(w.data(), w.size(), &fan);
  } else if (!o.fan.empty()) {
    st = sc_fan_from_json(slurp(o.fan).c_str(), &fan);
  } else {
    return usage_error("one of --fan or --weights is required");
  }
  if (st != SC_OK) return fail(st);
  std::string cfg = config_json(o).dump();
  char* text = nullptr;
  char* side = nullptr;
  if (cmd == "analyze") st = sc_analyze(fan, &text);
  else if (cmd == "density") st = sc_density(fan, cfg.c_str(), &text);
  else if (cmd == "tamagawa") st = sc_tamagawa(fan, cfg.c_str(), &text);
  else if (cmd == "count") st = sc_count(fan, cfg.c_str(), &text, &side);
  else st = sc_verify(fan, cfg.c_str(), &text, &side);
  sc_fan_free(fan);
  if (st != SC_OK) return fail(st);
  if (side && o.format == "json") {
    emit(side, o.out);
  } else {
    emit(text, o.out);
    if (side && !o.out.empty()) emit(side, o.out + ".json");
  }
  sc_string_free(text);
  sc_string_free(side);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational points of bounded height on toric stacks"};
  app.set_version_flag("--version", std::string(sc_version()));
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> cmds = {
      {"analyze", "Picard group, twisted sectors, ages and orbifold basis"},
      {"density", "Local Moebius function and local density polynomial"},
      {"tamagawa", "Tamagawa constant with error report"},
      {"count", "Count rational points of bounded height"},
      {"verify", "Compare counts with the predicted asymptotic"}};
  for (auto& [name, help] : cmds) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto* f = sub->add_option("--fan", o.fan, "Fan description (JSON file)")->check(CLI::ExistingFile);
    auto* w = sub->add_option("--weights", o.weights, "Weights of a weighted projective stack, e.g. 1,2");
    f->excludes(w);
    sub->add_option("--out", o.out, "Output file (for CSV output the JSON sidecar goes to <out>.json)");
    if (name == "analyze") continue;
    sub->add_option("--prime-bound", o.prime_bound, "Largest prime in the Euler product");
    if (name == "density") continue;
    sub->add_option("--domain", o.domain, "Domain box (JSON file with lower, upper, u)")->check(CLI::ExistingFile);
    sub->add_option("--u", o.u, "Direction u, e.g. 2,1 or 3/2,1");
    if (name != "count") {
      sub->add_option("--samples", o.samples, "Monte-Carlo samples");
      sub->add_option("--seed", o.seed, "Monte-Carlo seed")->required();
    }
    if (name == "tamagawa") continue;
    sub->add_option("--B", o.B, "Height bounds, e.g. 10,100,1000")->required();
    sub->add_option("--threads", o.threads, "Worker threads");
    sub->add_option("--budget", o.budget, "Maximal search-box size");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--timing", o.timing, "Record wall-clock times in the reports");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }
  try {
    return run(app.get_subcommands().front()->get_name(), o);
  } catch (const std::exception& e) {
    return usage_error(e.what());
  }
}
