// Command-line driver: configuration parsing, subcommand dispatch and the
// reproducible output layout (manifest + machine-readable results).
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "choquard/config.hpp"
#include "choquard/diagnostics.hpp"
#include "choquard/io.hpp"
#include "choquard/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace choquard;

namespace {

std::string file_hash(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) return "missing";
  std::stringstream ss;
  ss << is.rdbuf();
  return fnv1a_hex(ss.str());
}

ordered_json params_json(const ProblemParams& p) {
  return ordered_json{{"N", p.dim},   {"alpha", p.alpha}, {"p", p.p},
                      {"b", p.b},     {"a", p.a},         {"delta", p.delta}};
}

ordered_json grid_json(const Grid& g) {
  return ordered_json{{"n", g.n}, {"L", g.L}, {"offset", g.offset}, {"h", g.h()}};
}

void write_json(const fs::path& p, const ordered_json& j) {
  std::ofstream os(p);
  if (!os) throw Error("cannot write " + p.string());
  os << j.dump(2) << "\n";
}

struct Runner {
  ConfigMap map;
  RunConfig cfg;
  std::string subcommand;
  fs::path outdir;
  fs::path config_path;
  std::vector<std::string> overrides;
  ordered_json manifest_inputs = ordered_json::array();
  std::chrono::steady_clock::time_point t_start = std::chrono::steady_clock::now();

  void prepare(const std::string& sub) {
    subcommand = sub;
    cfg = RunConfig::from_map(map);
    outdir = cfg.output_dir / (sub + "-" + cfg.source_hash.substr(0, 12));
    fs::create_directories(outdir);
    manifest_inputs.push_back(
        {{"file", config_path.string()}, {"hash", file_hash(config_path)}});
  }

  void note_input(const fs::path& p) {
    manifest_inputs.push_back({{"file", p.string()}, {"hash", file_hash(p)}});
  }

  void write_manifest(const std::vector<std::string>& outputs) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    ordered_json m;
    m["subcommand"] = subcommand;
    m["config_hash"] = cfg.source_hash;
    m["version"] = CHOQUARD_VERSION;
    m["fftw"] = std::string(fftw_version);
    m["seed"] = cfg.seed;
    m["reproducible"] = cfg.reproducible;
    m["overrides"] = overrides;
    m["inputs"] = manifest_inputs;
    m["outputs"] = outputs;
    m["wall_seconds"] = wall;
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    m["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now).count();
    write_json(outdir / "manifest.json", m);
  }

  // Initial data per the configuration; may change the working grid (file
  // fields and the blowup construction carry their own boxes).
  SpectralField make_initial(const ProblemParams& params, Grid& grid) {
    const InitialDataSpec& id = cfg.initial_data;
    if (id.kind == "gaussian") {
      return gaussian_field(grid, id.width, id.amplitude);
    }
    if (id.kind == "ground-state-file") {
      if (id.file.empty()) throw ConfigError("initial_data.file required for ground-state-file");
      note_input(id.file);
      SpectralField q = read_field(id.file);
      grid = q.grid();
      if (id.amplitude != 1.0) q *= id.amplitude;
      return q;
    }
    if (id.kind == "pseudoconformal") {
      if (id.file.empty()) throw ConfigError("initial_data.file required for pseudoconformal");
      note_input(id.file);
      SpectralField q = read_field(id.file);
      grid = q.grid();
      return exact_pseudoconformal(0.0, id.T, q, params);
    }
    if (id.kind == "positive-energy") {
      const double r0 = id.bump_radius > 0.0 ? id.bump_radius : grid.L / 3.0;
      SpectralField theta = radial_bump(grid, r0, 1.0);
      BlowupData bd = positive_energy_blowup_data(theta, id.e_target, params);
      grid = bd.u0.grid();
      return bd.u0;
    }
    throw ConfigError("unknown initial_data.kind: " + id.kind);
  }
};

int run_validate(Runner& r) {
  r.prepare("validate");
  const ValidationReport rep = validate(r.cfg.params);
  ordered_json j;
  j["config_hash"] = r.cfg.source_hash;
  j["params"] = params_json(r.cfg.params);
  j["passed"] = rep.passed();
  j["violations"] = ordered_json::array();
  for (const auto& v : rep.violations)
    j["violations"].push_back({{"constraint", v.constraint},
                               {"message", v.message},
                               {"offending", v.offending}});
  if (rep.passed()) {
    const CriticalExponents e = derive_exponents(r.cfg.params);
    j["exponents"] = {{"p_mass", e.p_mass},
                      {"p_energy", e.p_energy},
                      {"gamma", e.gamma},
                      {"sigma", e.sigma ? ordered_json(*e.sigma) : ordered_json(nullptr)}};
    j["regime"] = regime_name(classify_regime(r.cfg.params));
    j["riesz_normalization"] = r.cfg.params.riesz_normalization();
  }
  write_json(r.outdir / "validation.json", j);
  r.write_manifest({"validation.json"});
  std::cout << (rep.passed() ? "pass" : "fail") << "  ->  " << (r.outdir / "validation.json")
            << "\n";
  return rep.passed() ? 0 : 1;
}

ordered_json ground_state_json(const Runner& r, const ProblemParams& params,
                               const GroundStateResult& gs) {
  ordered_json j;
  j["config_hash"] = r.cfg.source_hash;
  j["params"] = params_json(params);
  j["grid"] = grid_json(gs.Q.grid());
  j["c_gn"] = gs.c_gn;
  j["c_gn_from_Q"] = gs.c_gn_from_Q;
  j["j_value"] = gs.j_value;
  j["init_j_values"] = gs.j_init_values;
  j["iterations"] = gs.iterations;
  j["converged"] = gs.converged;
  j["grid_limited"] = gs.grid_limited;
  j["radial_variant"] = gs.radial_variant;
  j["el_residual"] = gs.el_residual;
  j["pohozaev"] = {{"nonlocal", gs.pohozaev_nonlocal}, {"hb", gs.pohozaev_hb}};
  j["mass_Q"] = mass(gs.Q);
  j["l2_norm_Q"] = std::sqrt(mass(gs.Q));
  j["seed"] = r.cfg.seed;
  return j;
}

int run_ground_state(Runner& r) {
  r.prepare("ground-state");
  ProblemParams params = r.cfg.params;
  if (!r.map.has("params.delta")) params.delta = 0.0;  // exact weight by default here
  require_valid(params);

  // distinct initial widths; the best quotient wins
  std::vector<double> widths = {1.0, 0.7, 1.5};
  widths.resize(std::max(1, std::min(r.cfg.ground_state_inits, 3)));
  std::optional<GroundStateResult> best;
  std::vector<double> init_js;
  for (double w : widths) {
    GroundStateResult gs =
        minimize_weinstein(params, r.cfg.grid, gaussian_field(r.cfg.grid, w));
    init_js.push_back(gs.j_value);
    if (!best || gs.j_value < best->j_value) best = std::move(gs);
  }
  best->j_init_values = init_js;

  ordered_json j = ground_state_json(r, params, *best);
  write_json(r.outdir / "ground_state.json", j);
  write_field(r.outdir / "q_field.bin", best->Q, params.delta);
  write_field(r.outdir / "v_field.bin", best->v, params.delta);
  write_radial_profile_csv(r.outdir / "radial_profile.csv", best->Q);
  r.write_manifest({"ground_state.json", "q_field.bin", "v_field.bin", "radial_profile.csv"});
  std::cout << "c_gn = " << format_double(best->c_gn) << "  (J = " << format_double(best->j_value)
            << ", " << best->iterations << " iterations)  ->  " << r.outdir << "\n";
  return 0;
}

int run_thresholds(Runner& r, const std::string& from) {
  r.prepare("thresholds");
  ProblemParams params = r.cfg.params;
  require_valid(params);
  const CriticalExponents e = derive_exponents(params);

  fs::path src = from.empty()
                     ? r.cfg.output_dir / ("ground-state-" + r.cfg.source_hash.substr(0, 12)) /
                           "ground_state.json"
                     : fs::path(from);
  std::ifstream is(src);
  if (!is) throw ConfigError("thresholds: cannot open ground-state result " + src.string());
  r.note_input(src);
  ordered_json gs = ordered_json::parse(is);
  const double c_gn = gs.at("c_gn").get<double>();
  const bool radial_variant = gs.value("radial_variant", false);

  ordered_json j;
  j["config_hash"] = r.cfg.source_hash;
  j["source"] = src.string();
  j["regime"] = regime_name(classify_regime(params));
  if (!e.sigma) {
    // mass-critical: the governing threshold is the ground-state mass
    j["l2_threshold"] = gs.at("l2_norm_Q").get<double>();
    write_json(r.outdir / "thresholds.json", j);
    r.write_manifest({"thresholds.json"});
    std::cout << "mass-critical: |Q|_L2 = " << j["l2_threshold"] << "\n";
    return 0;
  }
  Thresholds th = thresholds(c_gn, params, radial_variant);
  const double coeff = (params.dim * params.p - params.dim - params.alpha - 2.0) /
                       (2.0 * (params.dim * params.p - params.dim - params.alpha));
  j["c_gn"] = th.c_gn;
  j["K"] = th.K;
  j["H"] = th.H;
  j["sigma"] = *e.sigma;
  j["radial_variant"] = th.radial_variant;
  j["consistency"] = {
      {"H_over_coeff_K2", th.H / (coeff * th.K * th.K)},
      {"f_at_K_minus_H", threshold_potential(th.K, c_gn, params) - th.H},
      {"fprime_at_K", threshold_potential_derivative(th.K, c_gn, params)}};
  write_json(r.outdir / "thresholds.json", j);
  r.write_manifest({"thresholds.json"});
  std::cout << "K = " << format_double(th.K) << "  H = " << format_double(th.H) << "  ->  "
            << r.outdir << "\n";
  return 0;
}

std::optional<Thresholds> load_thresholds(Runner& r, const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open thresholds file " + path);
  r.note_input(path);
  ordered_json j = ordered_json::parse(is);
  Thresholds th;
  th.c_gn = j.value("c_gn", 0.0);
  th.K = j.at("K").get<double>();
  th.H = j.at("H").get<double>();
  th.radial_variant = j.value("radial_variant", false);
  return th;
}

ordered_json outcome_json(const Runner& r, const TrajectoryRecord& traj) {
  const double m0 = traj.reports.front().mass;
  const double e0 = traj.reports.front().energy;
  double mass_drift = 0.0, energy_drift = 0.0;
  for (const FunctionalReport& rep : traj.reports) {
    mass_drift = std::max(mass_drift, std::abs(rep.mass - m0) / m0);
    energy_drift =
        std::max(energy_drift, std::abs(rep.energy - e0) / std::max(std::abs(e0), 1e-300));
  }
  ordered_json j;
  j["config_hash"] = r.cfg.source_hash;
  j["outcome"] = outcome_name(traj.outcome);
  j["detection_time"] = traj.detection_time;
  j["final_time"] = traj.final_time;
  j["rows"] = traj.times.size();
  j["mass_drift_rel"] = mass_drift;
  j["energy_drift_rel"] = energy_drift;
  return j;
}

int run_evolve(Runner& r, const std::string& thresholds_from) {
  r.prepare("evolve");
  ProblemParams params = r.cfg.params;
  require_valid(params);
  Grid grid = r.cfg.grid;
  std::optional<Thresholds> th = load_thresholds(r, thresholds_from);
  SpectralField u0 = r.make_initial(params, grid);

  std::vector<std::string> outputs;
  auto run_one = [&](const ProblemParams& p, const std::string& tag) {
    fs::path snapdir = r.outdir / (tag.empty() ? "snapshots" : "snapshots" + tag);
    if (r.cfg.evolve.snapshot_every > 0) fs::create_directories(snapdir);
    const int snap_every = r.cfg.evolve.snapshot_every;
    SaveCallback sink;
    if (snap_every > 0) {
      sink = [&](double t, const SpectralField& u, std::size_t row) {
        if (row % snap_every == 0)
          write_field(snapdir / ("u_" + std::to_string(row) + ".bin"), u, p.delta);
      };
    }
    TrajectoryRecord traj = evolve(u0, p, r.cfg.evolve, th, sink);
    write_trajectory_csv(r.outdir / ("trajectory" + tag + ".csv"), traj);
    outputs.push_back("trajectory" + tag + ".csv");
    return traj;
  };

  if (r.cfg.delta_sequence) {
    // regularization-continuation mode: delta in {4, 2, 1} h^2 and the
    // pairwise gaps of the recorded mass-density trajectories
    const double h2 = grid.h() * grid.h();
    std::vector<TrajectoryRecord> trajs;
    std::vector<double> deltas = {4.0 * h2, 2.0 * h2, h2};
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      ProblemParams p = params;
      p.delta = deltas[i];
      trajs.push_back(run_one(p, "_delta" + std::to_string(i)));
    }
    ordered_json j = outcome_json(r, trajs.back());
    ordered_json gaps = ordered_json::array();
    for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
      const std::size_t rows = std::min(trajs[i].times.size(), trajs[i + 1].times.size());
      double max_gap = 0.0;
      for (std::size_t k = 0; k < rows; ++k)
        max_gap = std::max(max_gap, std::abs(trajs[i].reports[k].hb_norm_sq -
                                             trajs[i + 1].reports[k].hb_norm_sq));
      gaps.push_back({{"delta_coarse", deltas[i]},
                      {"delta_fine", deltas[i + 1]},
                      {"max_hb_gap", max_gap}});
    }
    j["delta_sequence_gaps"] = gaps;
    write_json(r.outdir / "outcome.json", j);
    outputs.push_back("outcome.json");
    r.write_manifest(outputs);
    std::cout << "delta sequence done  ->  " << r.outdir << "\n";
    return 0;
  }

  TrajectoryRecord traj = run_one(params, "");
  write_field(r.outdir / "final_state.bin", traj.final_state, params.delta);
  outputs.push_back("final_state.bin");
  ordered_json j = outcome_json(r, traj);
  write_json(r.outdir / "outcome.json", j);
  outputs.push_back("outcome.json");
  r.write_manifest(outputs);
  std::cout << outcome_name(traj.outcome) << " at t = " << format_double(traj.final_time)
            << "  ->  " << r.outdir << "\n";
  return 0;
}

int run_virial_check(Runner& r, const std::string& traj_path, const std::string& snapshots) {
  r.prepare("virial-check");
  if (traj_path.empty()) throw ConfigError("virial-check needs --trajectory <csv>");
  r.note_input(traj_path);
  TrajectoryRecord traj = read_trajectory_csv(traj_path);
  VirialConsistencyReport rep = virial_consistency_check(traj);
  ordered_json j;
  j["config_hash"] = r.cfg.source_hash;
  j["trajectory"] = traj_path;
  j["samples"] = rep.samples;
  j["max_abs_mismatch"] = rep.max_abs_mismatch;
  j["max_rel_mismatch"] = rep.max_rel_mismatch;
  j["rhs_scale"] = rep.rhs_scale;

  if (!snapshots.empty()) {
    // recompute the virial right side from stored fields and compare with
    // the recorded column (validates the serialization end to end)
    ProblemParams params = r.cfg.params;
    require_valid(params);
    double max_rel = 0.0;
    int checked = 0;
    for (std::size_t row = 0; row < traj.times.size(); ++row) {
      fs::path f = fs::path(snapshots) / ("u_" + std::to_string(row) + ".bin");
      if (!fs::exists(f)) continue;
      double delta = params.delta;
      SpectralField u = read_field(f, &delta);
      ProblemParams p = params;
      p.delta = delta;
      const double vr = virial_rhs_standard(u, p);
      max_rel = std::max(max_rel, std::abs(vr - traj.virial_rhs[row]) /
                                      std::max(std::abs(vr), 1e-300));
      ++checked;
    }
    j["snapshot_crosscheck"] = {{"checked", checked}, {"max_rel_diff", max_rel}};
  }
  write_json(r.outdir / "virial_check.json", j);
  r.write_manifest({"virial_check.json"});
  std::cout << "max relative mismatch " << format_double(rep.max_rel_mismatch) << "  ->  "
            << r.outdir << "\n";
  return 0;
}

int run_dichotomy_scan(Runner& r, const std::string& thresholds_from, const std::string& ladder_s) {
  r.prepare("dichotomy-scan");
  ProblemParams params = r.cfg.params;
  require_valid(params);
  std::optional<Thresholds> th = load_thresholds(r, thresholds_from);
  if (!th) throw ConfigError("dichotomy-scan needs --thresholds <json>");

  std::vector<double> ladder;
  std::stringstream ss(ladder_s.empty() ? "0.6,0.8,0.9,1.2,1.4,1.6" : ladder_s);
  std::string tok;
  while (std::getline(ss, tok, ',')) ladder.push_back(std::strtod(tok.c_str(), nullptr));

  Grid grid = r.cfg.grid;
  SpectralField base = r.make_initial(params, grid);
  std::vector<DichotomyScanRow> rows = dichotomy_scan(base, ladder, params, *th, r.cfg.evolve);

  std::ofstream csv(r.outdir / "dichotomy.csv");
  csv << "c,ratio,energy_mass_over_H,prediction,outcome,agreement\n";
  ordered_json rows_j = ordered_json::array();
  bool all_agree = true;
  for (const DichotomyScanRow& row : rows) {
    csv << format_double(row.c) << ',' << format_double(row.ratio) << ','
        << format_double(row.energy_mass_over_H) << ',' << prediction_name(row.prediction) << ','
        << outcome_name(row.outcome) << ',' << (row.agreement ? 1 : 0) << '\n';
    rows_j.push_back({{"c", row.c},
                      {"ratio", row.ratio},
                      {"energy_mass_over_H", row.energy_mass_over_H},
                      {"prediction", prediction_name(row.prediction)},
                      {"outcome", outcome_name(row.outcome)},
                      {"ratio_side_constant", row.ratio_side_constant},
                      {"agreement", row.agreement}});
    all_agree = all_agree && row.agreement;
  }
  csv.close();
  ordered_json j;
  j["config_hash"] = r.cfg.source_hash;
  j["rows"] = rows_j;
  j["all_agree"] = all_agree;
  write_json(r.outdir / "dichotomy.json", j);
  r.write_manifest({"dichotomy.csv", "dichotomy.json"});
  std::cout << (all_agree ? "every point agrees" : "disagreement found") << "  ->  " << r.outdir
            << "\n";
  return 0;
}

int run_validate_exact(Runner& r, const std::string& q_file, double T, double horizon_frac) {
  r.prepare("validate-exact");
  ProblemParams params = r.cfg.params;
  require_valid(params);
  if (q_file.empty()) throw ConfigError("validate-exact needs --ground-state <field.bin>");
  r.note_input(q_file);
  SpectralField Q = read_field(q_file);

  ProblemParams exact_params = params;
  exact_params.delta = 0.0;
  SpectralField u0 = exact_pseudoconformal(0.0, T, Q, exact_params);
  const double mass_rel = std::abs(mass(u0) - mass(Q)) / mass(Q);

  EvolveConfig cfg = r.cfg.evolve;
  cfg.t_max = horizon_frac * T;
  std::vector<double> track_t, track_err;
  SaveCallback sink = [&](double t, const SpectralField& u, std::size_t) {
    if (t <= 0.0) return;
    SpectralField ref = exact_pseudoconformal(t, T, Q, exact_params);
    double d2 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      d2 += std::norm(u[i] - ref[i]);
      n2 += std::norm(ref[i]);
    }
    track_t.push_back(t);
    track_err.push_back(std::sqrt(d2 / n2));
  };
  TrajectoryRecord traj = evolve(u0, params, cfg, std::nullopt, sink);

  double max_err = 0.0;
  for (double e : track_err) max_err = std::max(max_err, e);
  ordered_json j;
  j["config_hash"] = r.cfg.source_hash;
  j["T"] = T;
  j["horizon"] = cfg.t_max;
  j["mass_equality_rel"] = mass_rel;
  j["max_tracking_rel_error"] = max_err;
  j["outcome"] = outcome_name(traj.outcome);
  j["samples"] = track_t.size();
  write_json(r.outdir / "tracking.json", j);
  write_trajectory_csv(r.outdir / "trajectory.csv", traj);
  r.write_manifest({"tracking.json", "trajectory.csv"});
  std::cout << "max tracking error " << format_double(max_err) << "  ->  " << r.outdir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral toolkit for the Choquard equation with an "
               "inverse-square potential"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "run configuration file")->required();
  app.add_option("-s,--set", overrides, "override: section.key=value");

  std::string thresholds_from, traj_path, snapshots, ladder, gs_from, q_file;
  double T = 1.0, horizon_frac = 0.5;

  CLI::App* validate_cmd = app.add_subcommand("validate", "check the standing assumptions");
  CLI::App* gs_cmd = app.add_subcommand("ground-state", "minimize the Weinstein quotient");
  CLI::App* th_cmd = app.add_subcommand("thresholds", "dichotomy thresholds from a ground state");
  th_cmd->add_option("--from", gs_from, "ground_state.json path");
  CLI::App* ev_cmd = app.add_subcommand("evolve", "integrate the regularized flow");
  ev_cmd->add_option("--thresholds", thresholds_from, "thresholds.json for the dichotomy ratio");
  CLI::App* vc_cmd = app.add_subcommand("virial-check", "variance curvature vs identity");
  vc_cmd->add_option("--trajectory", traj_path, "trajectory CSV")->required();
  vc_cmd->add_option("--snapshots", snapshots, "snapshot directory for the cross-check");
  CLI::App* ds_cmd = app.add_subcommand("dichotomy-scan", "amplitude ladder classification");
  ds_cmd->add_option("--thresholds", thresholds_from, "thresholds.json")->required();
  ds_cmd->add_option("--ladder", ladder, "comma-separated amplitudes");
  CLI::App* vx_cmd = app.add_subcommand("validate-exact", "pseudo-conformal tracking test");
  vx_cmd->add_option("--ground-state", q_file, "bound-state field file")->required();
  vx_cmd->add_option("--T", T, "blowup time of the reference solution");
  vx_cmd->add_option("--horizon-fraction", horizon_frac, "fraction of T to integrate");

  CLI11_PARSE(app, argc, argv);

  Runner r;
  try {
    r.config_path = config_path;
    r.map = ConfigMap::parse_file(config_path);
    for (const std::string& o : overrides) r.map.apply_override(o);
    r.overrides = overrides;
    self_test();

    if (validate_cmd->parsed()) return run_validate(r);
    if (gs_cmd->parsed()) return run_ground_state(r);
    if (th_cmd->parsed()) return run_thresholds(r, gs_from);
    if (ev_cmd->parsed()) return run_evolve(r, thresholds_from);
    if (vc_cmd->parsed()) return run_virial_check(r, traj_path, snapshots);
    if (ds_cmd->parsed()) return run_dichotomy_scan(r, thresholds_from, ladder);
    if (vx_cmd->parsed()) return run_validate_exact(r, q_file, T, horizon_frac);
    return 1;
  } catch (const ConfigError& e) {
    ordered_json err{{"type", "config"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const ParameterError& e) {
    ordered_json err{{"type", "parameter"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const RegimeError& e) {
    ordered_json err{{"type", "regime"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const Error& e) {
    ordered_json err{{"type", "numerical"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    if (!r.outdir.empty()) {
      std::error_code ec;
      fs::create_directories(r.outdir, ec);
      if (!ec) {
        std::ofstream os(r.outdir / "error.json");
        os << err.dump(2) << "\n";
      }
    }
    return 2;
  }
}
