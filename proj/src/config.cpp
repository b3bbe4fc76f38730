#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "hashing.hpp"

namespace bnf {

namespace {

struct SectionSchema {
  std::set<std::string> keys;
  std::set<std::string> repeatable;
};

const std::map<std::string, SectionSchema>& schema() {
  static const std::map<std::string, SectionSchema> s = {
      {"spectrum",
       {{"family", "mass", "lambda_max", "weyl_constant", "dimension", "eigenvalues", "p0", "f_prime", "sqrt_rho",
         "levels", "frequencies", "clusters", "alpha", "upsilon", "beta"},
        {}}},
      {"nonlinearity", {{"coefficients", "kmax", "monomial", "nu", "n"}, {"monomial"}}},
      {"normalform",
       {{"r", "gamma", "a_r", "s_c", "epsilon", "prune", "budget", "amplitudes", "safety_constant",
         "guard", "tol"},
        {}}},
      {"flow", {{"tol", "rho0", "s0", "T", "first_sample", "ratio", "s_c", "threshold"}, {}}},
      {"lifespan",
       {{"mode", "amplitudes", "doubling", "t_cap", "s_c", "orders", "window", "samples", "gamma",
         "safety_constant"},
        {}}},
      {"scan", {{"masses", "mass_min", "mass_max", "mass_steps", "q", "kmax", "gamma", "threshold", "budget"}, {}}},
      {"inequalities", {{"kmax", "L", "n", "nu", "degrees"}, {}}},
      {"state", {{"mode", "decay", "amplitude", "random_phases"}, {"mode"}}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::string t = v;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.text_ = text;
  c.origin_ = origin;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  const auto& sc = schema();
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const std::string loc = origin + ":" + std::to_string(lineno) + ": ";
    if (body.front() == '[') {
      if (body.back() != ']') fail(ErrorKind::Config, loc + "malformed section header '" + body + "'");
      section = trim(body.substr(1, body.size() - 2));
      if (!sc.count(section)) fail(ErrorKind::Config, loc + "unknown section [" + section + "]");
      c.data_[section];
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, loc + "expected 'key = value', got '" + body + "'");
    if (section.empty()) fail(ErrorKind::Config, loc + "key outside of any section");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto& sch = sc.at(section);
    if (!sch.keys.count(key)) fail(ErrorKind::Config, loc + "unknown key '" + key + "' in [" + section + "]");
    auto& slot = c.data_[section][key];
    if (!slot.empty() && !sch.repeatable.count(key))
      fail(ErrorKind::Config, loc + "duplicate key '" + key + "' (first on line " + std::to_string(slot.front().line) + ")");
    slot.push_back({value, lineno});
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end() || k->second.empty()) return nullptr;
  return &k->second.front();
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }
bool Config::has_section(const std::string& section) const { return data_.count(section) > 0; }

std::string Config::where(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  return origin_ + ":" + (e ? std::to_string(e->line) : std::string("?")) + ": [" + section + "] " + key;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double Config::get_real(const std::string& section, const std::string& key, double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    return parse_real(e->value);
  } catch (const Error&) {
    fail(ErrorKind::Config, where(section, key) + ": not a real number: '" + e->value + "'");
  }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(e->value, &used);
  } catch (...) {
    used = 0;
  }
  if (used == 0 || used != e->value.size())
    fail(ErrorKind::Config, where(section, key) + ": not an integer: '" + e->value + "'");
  return v;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  fail(ErrorKind::Config, where(section, key) + ": not a boolean: '" + e->value + "'");
}

std::vector<double> Config::get_reals(const std::string& section, const std::string& key,
                                      const std::vector<double>& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::vector<double> out;
  for (const auto& tok : split_list(e->value)) {
    try {
      out.push_back(parse_real(tok));
    } catch (const Error&) {
      fail(ErrorKind::Config, where(section, key) + ": not a real number: '" + tok + "'");
    }
  }
  return out;
}

std::vector<int> Config::get_ints(const std::string& section, const std::string& key,
                                  const std::vector<int>& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::vector<int> out;
  for (const auto& tok : split_list(e->value)) {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (...) {
      used = 0;
    }
    if (used == 0 || used != tok.size())
      fail(ErrorKind::Config, where(section, key) + ": not an integer: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<Config::Entry> Config::all(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return {};
  auto k = s->second.find(key);
  return k == s->second.end() ? std::vector<Entry>{} : k->second;
}

}  // namespace bnf
