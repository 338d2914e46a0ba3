#ifndef CHOQUARD_CONFIG_HPP
#define CHOQUARD_CONFIG_HPP

#include <filesystem>
#include <map>
#include <string>

#include "choquard/evolution.hpp"

namespace choquard {

// Flat section.key = value store parsed from the run configuration file
// (INI-style sections, '#' comments). Overrides take "section.key=value".
class ConfigMap {
 public:
  static ConfigMap parse_file(const std::filesystem::path& path);
  static ConfigMap parse_text(const std::string& text);
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Canonical "section.key = value" lines, sorted; the reproducibility hash
  // is FNV-1a over this text.
  std::string canonical_text() const;
  std::string hash() const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

struct InitialDataSpec {
  std::string kind = "gaussian";  // gaussian | ground-state-file | pseudoconformal | positive-energy
  double width = 1.0;
  double amplitude = 1.0;
  std::string file;       // ground-state field file (also for pseudoconformal)
  double T = 1.0;         // pseudoconformal blowup time
  double e_target = 1.0;  // positive-energy construction target
  double bump_radius = 0.0;  // 0 = L/3
};

struct RunConfig {
  ProblemParams params;
  Grid grid;
  EvolveConfig evolve;
  InitialDataSpec initial_data;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1234;
  bool reproducible = true;
  int ground_state_inits = 3;  // distinct initial widths tried by the CLI
  bool delta_sequence = false; // evolve at {4,2,1} h^2 and report Cauchy gaps
  std::string source_hash;

  static RunConfig from_map(const ConfigMap& m);
};

std::string fnv1a_hex(const std::string& text);

}  // namespace choquard

#endif
