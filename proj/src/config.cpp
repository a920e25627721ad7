#include "resonance/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#ifndef RESONANCE_VERSION
#define RESONANCE_VERSION "0.0.0"
#endif

namespace resonance {

const char* library_version() { return RESONANCE_VERSION; }

namespace {

using K = ValueKind;

const std::map<std::string, std::vector<KeySpec>>& schemas() {
  static const std::map<std::string, std::vector<KeySpec>> s = {
      {"coeffs",
       {{"d", K::integer, "3", "cyclotomic modulus"},
        {"nmax", K::integer, "1000", "largest n"},
        {"ell", K::integer, "0", "derivative order in a(n) = a_K(n) (log n)^ell"},
        {"oracle", K::boolean, "true", "compare with the character-convolution coefficients"},
        {"seed", K::integer, "1", "generator seed (unused)"}}},
      {"gcdsum",
       {{"d", K::integer, "3", "cyclotomic modulus"},
        {"N", K::real, "0", "size parameter; 0 with toy_layers"},
        {"alpha", K::real, "1.5", ""},
        {"beta", K::real, "1.5", ""},
        {"delta", K::real, "0.5", ""},
        {"sigma", K::real, "1/2", "exponent of the main sum"},
        {"sigmas", K::real_list, "1/3,1/2,1", "monotonicity sweep"},
        {"toy_layers", K::text, "", "toy prime layers, e.g. 7,13;19,31"},
        {"toy_wk", K::integer_list, "", "toy w_k per layer"},
        {"layer_cap", K::integer, "100000", "elements per layer"},
        {"global_cap", K::integer, "2000000", "elements of the product set"},
        {"nu", K::real, "1", "nu in the appendix quantities"},
        {"tol", K::real, "1e-10", "layer-product identity tolerance (relative)"},
        {"cache_dir", K::text, "", "prime cache directory; empty disables"},
        {"seed", K::integer, "1", "generator seed (unused)"}}},
      {"kernel",
       {{"eta", K::integer, "2", ""},
        {"epsilon", K::real, "0.5", ""},
        {"logT", K::real, "2", ""},
        {"samples", K::integer, "201", "grid points"},
        {"vmax", K::real, "0", "grid half-width; 0 means 1.1 times the support"},
        {"oracle", K::boolean, "false", "add a quadrature column"},
        {"derivative_samples", K::integer, "1000", ""},
        {"tol", K::real, "1e-8", "oracle tolerance"},
        {"seed", K::integer, "1", "generator seed (unused)"}}},
      {"resonator",
       {{"variant", K::text, "weighted", "critical, weighted or desk"},
        {"T", K::real, "1000", ""},
        {"d", K::integer, "3", ""},
        {"sigma", K::real, "1/2", ""},
        {"c_d", K::real, "1", ""},
        {"gamma", K::real, "1/2", ""},
        {"alpha_res", K::real, "1.5", ""},
        {"N", K::real, "0", "size parameter; 0 with toy supports"},
        {"weight_variant", K::text, "near_critical", "near_critical or mid_strip"},
        {"toy_primes", K::integer_list, "", "toy P_d"},
        {"toy_f", K::text, "", "toy f values, e.g. 7:0.3,13:0.2"},
        {"toy_layer", K::text, "", "toy layer map, e.g. 7:1,13:1"},
        {"toy_delta", K::real_list, "", "toy Delta_k"},
        {"toy_layers", K::text, "", "critical variant: prime layers as in gcdsum"},
        {"toy_wk", K::integer_list, "", "critical variant: w_k per toy layer"},
        {"support_cap", K::integer, "100000", ""},
        {"max_log", K::real, "0", "largest log n in the support; 0 means none"},
        {"b", K::real, "2", "Rankin parameter"},
        {"eta", K::integer, "2", ""},
        {"epsilon", K::real, "0.5", ""},
        {"delta", K::real, "0.5", "delta in the main-term curve"},
        {"moment_step", K::real, "0", "0 picks the default step"},
        {"samples", K::integer, "201", "R(t) grid points on [0, T]"},
        {"tol", K::real, "1e-12", "A_d sum/product tolerance"},
        {"cache_dir", K::text, "", ""},
        {"seed", K::integer, "1", "seed for the random |R(t)| <= R(0) probes"}}},
      {"verify",
       {{"d", K::integer_list, "3,4", ""},
        {"ell", K::integer_list, "0,1,2", ""},
        {"sigma", K::real_list, "1/2,0.6", ""},
        {"t_min", K::real, "2", ""},
        {"t_max", K::real, "20", ""},
        {"points", K::integer, "10", "points per identity"},
        {"eta", K::integer, "0", "0 means 2 phi(d)"},
        {"epsilon", K::real, "0.8502993454155389", "log(30)/4: support log 30 at logT = 2"},
        {"logT", K::real, "2", ""},
        {"kernel_suite", K::boolean, "true", ""},
        {"tol", K::real, "1e-4", "absolute tolerance of each identity"},
        {"seed", K::integer, "1", ""}}},
      {"hunt",
       {{"T", K::real, "1000", ""},
        {"t_min", K::real, "0", "search window [t_min, T]"},
        {"d", K::integer, "3", ""},
        {"ell", K::integer, "1", ""},
        {"sigma", K::real, "1/2", ""},
        {"q", K::integer, "10", "guided candidates"},
        {"controls", K::integer, "10", "uniform controls"},
        {"N", K::real, "0", "resonator length; 0 means T"},
        {"c_d", K::real, "1", ""},
        {"grid_step", K::real, "0.1", ""},
        {"min_separation", K::real, "0", "0 means 2 pi / log N"},
        {"t_ceiling", K::real, "10000", ""},
        {"runs", K::integer, "1", "seeds seed, seed+1, ..."},
        {"min_win_fraction", K::real, "0", "exit 1 below this fraction of guided wins"},
        {"tol", K::real, "1e-8", "evaluation tolerance"},
        {"cache_dir", K::text, "", ""},
        {"seed", K::integer, "1", ""}}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  return !k.empty() && std::all_of(k.begin(), k.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_' ||
           std::isupper(static_cast<unsigned char>(c));
  });
}

long long parse_integer(const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    // Accept integral reals such as 1e6.
    const double x = parse_real(t);
    if (std::floor(x) != x || std::abs(x) > 9.2e18) throw ConfigError("not an integer: '" + text + "'");
    return static_cast<long long>(x);
  }
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("not a boolean: '" + text + "'");
}

void check_value(const KeySpec& spec, const std::string& value) {
  switch (spec.kind) {
    case K::real: parse_real(value); break;
    case K::integer: parse_integer(value); break;
    case K::boolean: parse_bool(value); break;
    case K::text: break;
    case K::real_list:
      for (const auto& x : split_list(value)) parse_real(x);
      break;
    case K::integer_list:
      for (const auto& x : split_list(value)) parse_integer(x);
      break;
  }
}

}  // namespace

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    const double num = parse_real(t.substr(0, slash));
    const double den = parse_real(t.substr(slash + 1));
    if (den == 0.0) throw ConfigError("zero denominator in '" + text + "'");
    return num / den;
  }
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError("not a real number: '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!text.empty() && text.back() == sep) out.push_back("");
  for (const auto& x : out)
    if (x.empty()) throw ConfigError("empty list item in '" + text + "'");
  return out;
}

const std::vector<KeySpec>& command_schema(const std::string& command) {
  auto it = schemas().find(command);
  if (it == schemas().end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"coeffs", "gcdsum", "kernel", "resonator", "verify", "hunt"};
  return names;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::parse_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto dot = key.find('.');
    const std::string bare = dot == std::string::npos ? key : key.substr(dot + 1);
    if (!valid_key(bare) || (dot != std::string::npos && !valid_key(key.substr(0, dot))))
      throw ConfigError("line " + std::to_string(lineno) + ": invalid key '" + key + "'");
    out.emplace_back(key, value);
  }
  return out;
}

ExperimentConfig ExperimentConfig::resolve(const std::string& command, const std::filesystem::path& file,
                                           const std::vector<std::pair<std::string, std::string>>& overrides) {
  ExperimentConfig c;
  c.command_ = command;
  for (const auto& s : command_schema(command)) {
    c.values_[s.key] = s.default_value;
    c.sources_[s.key] = "default";
  }
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::map<std::string, std::string> seen;
    for (const auto& [key, value] : parse_text(buf.str())) {
      if (seen.count(key)) throw ConfigError("duplicate key '" + key + "' in " + file.string());
      seen[key] = value;
    }
    // Unscoped entries first so that command-scoped ones win.
    for (const auto& [key, value] : seen) {
      const auto dot = key.find('.');
      if (dot != std::string::npos) continue;
      if (!c.values_.count(key)) {
        bool known_elsewhere = false;
        for (const auto& name : command_names())
          for (const auto& s : command_schema(name)) known_elsewhere |= s.key == key;
        if (!known_elsewhere) throw ConfigError("unknown key '" + key + "' in " + file.string());
        continue;
      }
      c.set(key, value, "file");
    }
    for (const auto& [key, value] : seen) {
      const auto dot = key.find('.');
      if (dot == std::string::npos) continue;
      const std::string scope = key.substr(0, dot), bare = key.substr(dot + 1);
      command_schema(scope);
      if (scope != command) continue;
      if (!c.values_.count(bare)) throw ConfigError("unknown key '" + bare + "' for command " + command);
      c.set(bare, value, "file");
    }
  }
  for (const auto& [key, value] : overrides) {
    if (!c.values_.count(key)) throw ConfigError("unknown key '" + key + "' for command " + command);
    c.set(key, value, "command line");
  }
  return c;
}

void ExperimentConfig::set(const std::string& key, const std::string& value, const std::string& source) {
  try {
    check_value(spec(key), value);
  } catch (const ConfigError& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
  values_[key] = value;
  sources_[key] = source;
}

const KeySpec& ExperimentConfig::spec(const std::string& key) const {
  for (const auto& s : command_schema(command_))
    if (s.key == key) return s;
  throw ConfigError("command " + command_ + " has no key '" + key + "'");
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
  spec(key);
  return values_.at(key);
}

std::string ExperimentConfig::source(const std::string& key) const {
  spec(key);
  return sources_.at(key);
}

double ExperimentConfig::real(const std::string& key) const { return parse_real(raw(key)); }
long long ExperimentConfig::integer(const std::string& key) const { return parse_integer(raw(key)); }

std::uint64_t ExperimentConfig::u64(const std::string& key) const {
  const long long v = integer(key);
  if (v < 0) throw ConfigError("key '" + key + "' must be non-negative");
  return static_cast<std::uint64_t>(v);
}

bool ExperimentConfig::boolean(const std::string& key) const { return parse_bool(raw(key)); }
const std::string& ExperimentConfig::text(const std::string& key) const { return raw(key); }

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& x : split_list(raw(key))) out.push_back(parse_real(x));
  return out;
}

std::vector<long long> ExperimentConfig::integers(const std::string& key) const {
  std::vector<long long> out;
  for (const auto& x : split_list(raw(key))) out.push_back(parse_integer(x));
  return out;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  for (const auto& s : command_schema(command_)) {
    switch (s.kind) {
      case K::real: j[s.key] = real(s.key); break;
      case K::integer: j[s.key] = integer(s.key); break;
      case K::boolean: j[s.key] = boolean(s.key); break;
      case K::text: j[s.key] = text(s.key); break;
      case K::real_list: j[s.key] = reals(s.key); break;
      case K::integer_list: j[s.key] = integers(s.key); break;
    }
  }
  return j;
}

}  // namespace resonance
