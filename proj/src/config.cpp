#include "choquard/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace choquard {

namespace {
std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}
}  // namespace

ConfigMap ConfigMap::parse_text(const std::string& text) {
  ConfigMap m;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    m.kv_[section.empty() ? key : section + "." + key] = value;
  }
  return m;
}

ConfigMap ConfigMap::parse_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_text(ss.str());
}

void ConfigMap::apply_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like section.key=value: " + assignment);
  const std::string key = trim(assignment.substr(0, eq));
  if (key.find('.') == std::string::npos)
    throw ConfigError("override key must be section.key: " + assignment);
  kv_[key] = trim(assignment.substr(eq + 1));
}

bool ConfigMap::has(const std::string& key) const { return kv_.count(key) != 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str()) throw ConfigError("config value of " + key + " is not a number");
  return v;
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return static_cast<int>(std::strtol(it->second.c_str(), nullptr, 10));
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config value of " + key + " is not a boolean");
}

std::string ConfigMap::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ConfigMap::hash() const { return fnv1a_hex(canonical_text()); }

RunConfig RunConfig::from_map(const ConfigMap& m) {
  RunConfig c;
  c.params.dim = m.get_int("params.N", 3);
  c.params.alpha = m.get_double("params.alpha", 2.0);
  c.params.p = m.get_double("params.p", 2.0);
  c.params.b = m.get_double("params.b", 0.0);
  c.params.a = m.get_int("params.a", 1);
  c.grid.dim = c.params.dim;
  c.grid.n = m.get_int("grid.n", 64);
  c.grid.L = m.get_double("grid.L", 12.0);
  c.grid.offset = m.get_bool("grid.offset", true);
  // regularization default ties to the resolution: delta = h^2
  const double h = c.grid.h();
  c.params.delta = m.get_double("params.delta", h * h);

  c.evolve.dt = m.get_double("evolve.dt", 1e-3);
  c.evolve.t_max = m.get_double("evolve.t_max", 1.0);
  c.evolve.save_every = m.get_int("evolve.save_every", 10);
  c.evolve.blowup_gradient_factor = m.get_double("evolve.blowup_gradient_factor", 50.0);
  c.evolve.tail_fraction_max = m.get_double("evolve.tail_fraction_max", 1e-4);
  c.evolve.adaptive = m.get_bool("evolve.adaptive", false);
  c.evolve.dt_min = m.get_double("evolve.dt_min", 1e-6);
  c.evolve.nonlinearity_off = m.get_bool("evolve.nonlinearity_off", false);
  c.evolve.snapshot_every = m.get_int("evolve.snapshot_every", 0);
  c.delta_sequence = m.get_bool("evolve.delta_sequence", false);

  c.initial_data.kind = m.get_string("initial_data.kind", "gaussian");
  c.initial_data.width = m.get_double("initial_data.width", 1.0);
  c.initial_data.amplitude = m.get_double("initial_data.amplitude", 1.0);
  c.initial_data.file = m.get_string("initial_data.file", "");
  c.initial_data.T = m.get_double("initial_data.T", 1.0);
  c.initial_data.e_target = m.get_double("initial_data.E_target", 1.0);
  c.initial_data.bump_radius = m.get_double("initial_data.bump_radius", 0.0);

  c.output_dir = m.get_string("output.dir", "out");
  c.seed = static_cast<std::uint64_t>(m.get_int("run.seed", 1234));
  c.reproducible = m.get_bool("run.reproducible", true);
  c.ground_state_inits = m.get_int("ground_state.inits", 3);
  c.source_hash = m.hash();
  return c;
}

}  // namespace choquard
