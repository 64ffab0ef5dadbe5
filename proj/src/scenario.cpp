#include "abraham/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "abraham/coherent.hpp"
#include "abraham/soliton.hpp"

namespace abraham {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (allowed.find(it.key()) == allowed.end())
      throw std::runtime_error("scenario: unknown key '" + path + it.key() + "'");
}

double get_num(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key))
    throw std::runtime_error("scenario: missing key '" + path + key + "'");
  if (!j[key].is_number())
    throw std::runtime_error("scenario: '" + path + key + "' must be a number");
  return j[key].get<double>();
}

Vec3 get_vec3(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3)
    throw std::runtime_error("scenario: '" + path + key + "' must be a 3-array");
  return {j[key][0].get<double>(), j[key][1].get<double>(), j[key][2].get<double>()};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

std::size_t traj_index_at(const Trajectory& traj, double t) {
  std::size_t best = 0;
  double best_err = 1e300;
  for (std::size_t j = 0; j < traj.samples.size(); ++j) {
    const double err = std::abs(traj.samples[j].t - t);
    if (err < best_err) {
      best_err = err;
      best = j;
    }
  }
  if (best_err > 1e-9 * (1.0 + std::abs(t)))
    throw std::runtime_error("run_scenario: trajectory sample missing at requested time");
  return best;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "t,qx,qy,qz,vx,vy,vz,ax,ay,az\n";
  for (const auto& s : traj.samples)
    os << fmt(s.t) << ',' << fmt(s.q.x) << ',' << fmt(s.q.y) << ',' << fmt(s.q.z)
       << ',' << fmt(s.v.x) << ',' << fmt(s.v.y) << ',' << fmt(s.v.z) << ','
       << fmt(s.a.x) << ',' << fmt(s.a.y) << ',' << fmt(s.a.z) << '\n';
}

//! Least-squares log-log slope of |a|(t) over samples with t in [t_lo, t_hi].
double fit_exponent_window(const Trajectory& traj, double t_lo, double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& s : traj.samples) {
    const double at = std::abs(s.t);
    if (at < t_lo || at > t_hi) continue;
    const double a = s.a.norm();
    if (a <= 1e-300) continue;
    const double x = std::log(1.0 + at);
    const double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 4) return 0.0;
  const double nd = static_cast<double>(n);
  return (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
}

}  // namespace

Scenario Scenario::parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw std::runtime_error(std::string("scenario: invalid JSON: ") + err.what());
  }
  reject_unknown_keys(j, {"schema_version", "charge", "grid", "initial", "run",
                          "observables", "seed"},
                      "");
  Scenario s;
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw std::runtime_error("scenario: missing integer 'schema_version'");
  s.schema_version = j["schema_version"].get<int>();
  if (s.schema_version != 1)
    throw std::runtime_error("scenario: unsupported schema_version");

  const json& ch = j.at("charge");
  reject_unknown_keys(ch, {"e", "m", "r_phi"}, "charge.");
  s.e = get_num(ch, "e", "charge.");
  s.m = get_num(ch, "m", "charge.");
  s.r_phi = get_num(ch, "r_phi", "charge.");
  if (!(s.m > 0.0)) throw std::runtime_error("scenario: charge.m must be positive");
  if (!(s.r_phi > 0.0)) throw std::runtime_error("scenario: charge.r_phi must be positive");

  const json& gr = j.at("grid");
  reject_unknown_keys(gr, {"n_radial", "k_min", "k_max", "n_polar", "n_azimuth"},
                      "grid.");
  s.n_radial = static_cast<std::size_t>(get_num(gr, "n_radial", "grid."));
  s.k_min = get_num(gr, "k_min", "grid.");
  s.k_max = get_num(gr, "k_max", "grid.");
  s.n_polar = static_cast<std::size_t>(get_num(gr, "n_polar", "grid."));
  s.n_azimuth = static_cast<std::size_t>(get_num(gr, "n_azimuth", "grid."));

  const json& in = j.at("initial");
  reject_unknown_keys(in, {"v0", "q0", "pulse"}, "initial.");
  s.v0 = get_vec3(in, "v0", "initial.");
  s.q0 = get_vec3(in, "q0", "initial.");
  if (!(s.v0.norm2() < 1.0)) throw std::runtime_error("scenario: |initial.v0| must be < 1");
  if (in.contains("pulse") && !in["pulse"].is_null()) {
    const json& pj = in["pulse"];
    reject_unknown_keys(pj, {"k0", "width", "amplitude", "polarization",
                             "direction", "delay"},
                        "initial.pulse.");
    PulseSpec p;
    p.k0 = get_num(pj, "k0", "initial.pulse.");
    p.width = get_num(pj, "width", "initial.pulse.");
    p.amplitude = get_num(pj, "amplitude", "initial.pulse.");
    p.polarization = get_vec3(pj, "polarization", "initial.pulse.");
    p.direction = get_vec3(pj, "direction", "initial.pulse.");
    p.delay = get_num(pj, "delay", "initial.pulse.");
    s.pulse = p;
  }

  const json& rn = j.at("run");
  reject_unknown_keys(rn, {"t_final", "dt", "sample_every", "trajectory_every",
                           "energy_drift_abort"},
                      "run.");
  s.t_final = get_num(rn, "t_final", "run.");
  s.dt = get_num(rn, "dt", "run.");
  s.sample_every = static_cast<std::size_t>(get_num(rn, "sample_every", "run."));
  s.trajectory_every =
      static_cast<std::size_t>(get_num(rn, "trajectory_every", "run."));
  s.energy_drift_abort = get_num(rn, "energy_drift_abort", "run.");

  const json& ob = j.at("observables");
  reject_unknown_keys(ob, {"k_ir", "extrapolation_order", "spatial"}, "observables.");
  s.k_ir = get_num(ob, "k_ir", "observables.");
  s.extrapolation_order =
      static_cast<std::size_t>(get_num(ob, "extrapolation_order", "observables."));
  if (ob.contains("spatial") && !ob["spatial"].is_null()) {
    const json& sp = ob["spatial"];
    reject_unknown_keys(sp, {"enabled", "directions", "radii", "window_k", "time",
                             "n_radial", "n_polar", "n_azimuth"},
                        "observables.spatial.");
    s.spatial.enabled = sp.value("enabled", false);
    if (sp.contains("directions"))
      for (const auto& d : sp["directions"])
        s.spatial.directions.push_back(
            {d[0].get<double>(), d[1].get<double>(), d[2].get<double>()});
    if (sp.contains("radii"))
      for (const auto& r : sp["radii"]) s.spatial.radii.push_back(r.get<double>());
    if (sp.contains("window_k")) s.spatial.window_k = sp["window_k"].get<double>();
    if (sp.contains("time")) s.spatial.time = sp["time"].get<double>();
    if (sp.contains("n_radial"))
      s.spatial.n_radial = sp["n_radial"].get<std::size_t>();
    if (sp.contains("n_polar")) s.spatial.n_polar = sp["n_polar"].get<std::size_t>();
    if (sp.contains("n_azimuth"))
      s.spatial.n_azimuth = sp["n_azimuth"].get<std::size_t>();
  }

  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  return s;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("scenario: cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

std::string Scenario::serialize() const {
  json j;
  j["schema_version"] = schema_version;
  j["charge"] = {{"e", e}, {"m", m}, {"r_phi", r_phi}};
  j["grid"] = {{"n_radial", n_radial}, {"k_min", k_min}, {"k_max", k_max},
               {"n_polar", n_polar},   {"n_azimuth", n_azimuth}};
  j["initial"] = {{"v0", vec3_json(v0)}, {"q0", vec3_json(q0)}};
  if (pulse) {
    j["initial"]["pulse"] = {{"k0", pulse->k0},
                             {"width", pulse->width},
                             {"amplitude", pulse->amplitude},
                             {"polarization", vec3_json(pulse->polarization)},
                             {"direction", vec3_json(pulse->direction)},
                             {"delay", pulse->delay}};
  }
  j["run"] = {{"t_final", t_final},
              {"dt", dt},
              {"sample_every", sample_every},
              {"trajectory_every", trajectory_every},
              {"energy_drift_abort", energy_drift_abort}};
  j["observables"] = {{"k_ir", k_ir}, {"extrapolation_order", extrapolation_order}};
  if (spatial.enabled || !spatial.radii.empty()) {
    json sp;
    sp["enabled"] = spatial.enabled;
    sp["directions"] = json::array();
    for (const auto& d : spatial.directions) sp["directions"].push_back(vec3_json(d));
    sp["radii"] = spatial.radii;
    sp["window_k"] = spatial.window_k;
    sp["time"] = spatial.time;
    sp["n_radial"] = spatial.n_radial;
    sp["n_polar"] = spatial.n_polar;
    sp["n_azimuth"] = spatial.n_azimuth;
    j["observables"]["spatial"] = sp;
  }
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

KGrid Scenario::make_grid() const {
  return build_kgrid(n_radial, k_min, k_max, n_polar, n_azimuth);
}

ChargeModel Scenario::make_model() const { return ChargeModel(e, m, r_phi); }

SystemState Scenario::make_initial_state(const KGrid& grid,
                                         const ChargeModel& model) const {
  SystemState st;
  st.t = 0.0;
  st.particle.q = q0;
  st.particle.v = v0;
  const SolitonField sol{v0, &model};
  st.fields = sample_soliton(sol, q0, grid);
  if (pulse) {
    SpectralFieldPair pw =
        make_pulse(grid, pulse->k0, pulse->width, pulse->amplitude,
                   pulse->polarization, pulse->direction);
    if (pulse->delay != 0.0) pw = free_propagate(pw, grid, -pulse->delay);
    axpy(st.fields, 1.0, pw);
  }
  st.fields = enforce_hermitian(st.fields, grid);
  apply_gauss_slaving(st.fields, q0, grid, model);
  return st;
}

Scenario reference_scenario() {
  Scenario s;
  s.e = 0.3;
  s.m = 1.0;
  s.r_phi = 1.0;
  s.n_radial = 32;
  s.k_min = 1e-3;
  s.k_max = 8.0;
  s.n_polar = 8;
  s.n_azimuth = 8;
  s.v0 = {0.0, 0.0, 0.0};
  s.q0 = {0.0, 0.0, 0.0};
  PulseSpec pulse;
  pulse.k0 = 1.0;
  pulse.width = 0.25;
  pulse.amplitude = 1.2;
  pulse.polarization = {1.0, 0.0, 0.0};
  pulse.direction = {0.0, 0.0, 1.0};
  pulse.delay = 5.0;
  s.pulse = pulse;
  s.t_final = 40.0;
  s.dt = 0.02;
  s.sample_every = 100;  // snapshots every 2 time units: 21 over the run
  s.trajectory_every = 1;
  s.energy_drift_abort = 1e-2;
  s.k_ir = 6e-3;
  s.extrapolation_order = 3;
  s.seed = 20260810;
  return s;
}

std::string scenario_hash(const Scenario& s) {
  const std::string text = s.serialize();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunReport::to_json() const {
  json j;
  j["provenance"] = {{"scenario_hash", scenario_hash},
                     {"code_version", code_version}};
  j["conservation"] = {{"energy_drift", energy_drift},
                       {"momentum_drift", momentum_drift},
                       {"gauss_residual", gauss_residual},
                       {"transverse_current_residual", transverse_current_residual}};
  json irc;
  irc["times"] = ir_conservation.times;
  irc["transverse_drift_e"] = ir_conservation.transverse_drift_e;
  irc["transverse_drift_b"] = ir_conservation.transverse_drift_b;
  irc["longitudinal_drift"] = ir_conservation.longitudinal_drift;
  irc["max_transverse_drift"] = ir_conservation.max_transverse_drift;
  irc["max_longitudinal_drift"] = ir_conservation.max_longitudinal_drift;
  j["ir_conservation"] = irc;
  json sp;
  sp["residual_norm_e"] = soft_photon.residual_norm_e;
  sp["residual_norm_b"] = soft_photon.residual_norm_b;
  sp["rhs_norm_e"] = soft_photon.rhs_norm_e;
  sp["rhs_norm_b"] = soft_photon.rhs_norm_b;
  sp["extrapolation_budget"] = soft_photon.extrapolation_budget;
  sp["tail_budget"] = soft_photon.tail_budget;
  j["soft_photon"] = sp;
  json wo = json::array();
  for (const auto& [T, dev] : wave_operator_series) wo.push_back({{"T", T}, {"deviation", dev}});
  j["wave_operator"] = {{"series", wo}, {"ratio", wave_operator_ratio}};
  j["asymptotics"] = {{"v_plus", vec3_json(v_plus)},
                      {"v_minus", vec3_json(v_minus)},
                      {"v_plus_error", v_plus_error},
                      {"v_minus_error", v_minus_error},
                      {"accel_tail_exponent", accel_tail_exponent},
                      {"tail_bound_plus", tail_bound_plus},
                      {"tail_bound_minus", tail_bound_minus}};
  j["coherent"] = {{"max_residual", coherent_max_residual},
                   {"t_dependence", coherent_t_dependence}};
  return j.dump(2) + "\n";
}

std::vector<AcceptanceCheck> acceptance_profile(const RunReport& r) {
  std::vector<AcceptanceCheck> checks;
  auto add = [&](const std::string& name, double value, double threshold,
                 bool less_than = true) {
    checks.push_back({name, value, threshold,
                      less_than ? value < threshold : value > threshold});
  };
  add("gauss_residual", r.gauss_residual, 1e-12);
  add("transverse_current_residual", r.transverse_current_residual, 1e-12);
  add("energy_drift", r.energy_drift, 1e-4);
  add("momentum_drift", r.momentum_drift, 1e-4);
  add("ir_transverse_drift", r.ir_conservation.max_transverse_drift, 1e-3);
  add("ir_longitudinal_drift", r.ir_conservation.max_longitudinal_drift, 1e-12);
  add("soft_photon_residual_e", r.soft_photon.residual_norm_e, 5e-2);
  add("soft_photon_residual_b", r.soft_photon.residual_norm_b, 5e-2);
  const double budget =
      r.soft_photon.extrapolation_budget + r.soft_photon.tail_budget;
  const double residual_abs =
      std::max(r.soft_photon.residual_norm_e * r.soft_photon.rhs_norm_e,
               r.soft_photon.residual_norm_b * r.soft_photon.rhs_norm_b);
  add("soft_photon_budget_covers_residual", residual_abs, budget);
  add("wave_operator_ratio", r.wave_operator_ratio, 0.25);
  add("accel_tail_exponent", r.accel_tail_exponent, 1.5, /*less_than=*/false);
  add("coherent_max_residual", r.coherent_max_residual, 1e-10);
  add("coherent_t_dependence", r.coherent_t_dependence, 1e-10);
  return checks;
}

RunReport run_scenario(const Scenario& scenario, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto t_start = std::chrono::steady_clock::now();
  json timings;

  auto lap = [&, last = t_start](const char* name) mutable {
    const auto now = std::chrono::steady_clock::now();
    timings[name] =
        std::chrono::duration_cast<std::chrono::milliseconds>(now - last).count();
    last = now;
  };

  {
    std::ofstream os(out_dir + "/scenario.json");
    os << scenario.serialize();
  }

  const KGrid grid = scenario.make_grid();
  const ChargeModel model = scenario.make_model();
  const SystemState initial = scenario.make_initial_state(grid, model);
  write_field_file(out_dir + "/initial_state.csv", initial.fields, grid);
  lap("setup_ms");

  RunReport rep;
  rep.scenario_hash = scenario_hash(scenario);
  rep.code_version = kCodeVersion;

  // Structural residuals of the constraint handling, evaluated at the start.
  rep.gauss_residual = gauss_defect(initial.fields, initial.particle.q, grid, model);
  {
    double worst = 0.0, scale = 0.0;
    for (std::size_t n = 0; n < grid.n_nodes(); ++n) {
      const Vec3& kh = grid.khat(n);
      const Vec3 v_tr = initial.particle.v - kh * dot(kh, initial.particle.v);
      const double jmag = std::abs(model.e() * model.phi_hat(grid.kmag(n)));
      worst = std::max(worst, jmag * std::abs(dot(kh, v_tr)));
      scale = std::max(scale, jmag);
    }
    // probe with a generic velocity when the particle starts at rest
    const Vec3 probe{0.3, 0.2, 0.1};
    for (std::size_t id = 0; id < grid.n_directions(); ++id) {
      const Vec3& kh = grid.directions[id];
      worst = std::max(worst, std::abs(dot(kh, probe - kh * dot(kh, probe))));
    }
    rep.transverse_current_residual = worst / (scale + 1e-300);
  }

  // Forward and backward evolution.
  SimulateResult fwd = simulate(initial, grid, model, scenario.t_final,
                                scenario.dt, scenario.sample_every,
                                scenario.trajectory_every,
                                scenario.energy_drift_abort);
  lap("forward_ms");
  SimulateResult bwd = simulate(initial, grid, model, -scenario.t_final,
                                -scenario.dt, scenario.sample_every,
                                scenario.trajectory_every,
                                scenario.energy_drift_abort);
  lap("backward_ms");

  write_trajectory_csv(out_dir + "/trajectory_forward.csv", fwd.trajectory);
  write_trajectory_csv(out_dir + "/trajectory_backward.csv", bwd.trajectory);
  write_field_file(out_dir + "/final_forward.csv", fwd.final_state.fields, grid);
  write_field_file(out_dir + "/final_backward.csv", bwd.final_state.fields, grid);

  // Conservation drifts over the forward snapshots.
  {
    std::ofstream os(out_dir + "/drift.csv");
    os << "t,energy,px,py,pz\n";
    double e0 = 0.0;
    Vec3 p0;
    double max_e = 0.0, max_p = 0.0;
    for (std::size_t i = 0; i < fwd.snapshots.size(); ++i) {
      const double t = fwd.snapshot_times[i];
      const std::size_t j = traj_index_at(fwd.trajectory, t);
      SystemState st{fwd.snapshots[i],
                     ParticleState{fwd.trajectory.samples[j].q,
                                   fwd.trajectory.samples[j].v},
                     t};
      const double en = total_energy(st, grid, model);
      const Vec3 pm = total_momentum(st, grid, model);
      os << fmt(t) << ',' << fmt(en) << ',' << fmt(pm.x) << ',' << fmt(pm.y)
         << ',' << fmt(pm.z) << '\n';
      if (i == 0) {
        e0 = en;
        p0 = pm;
      } else {
        max_e = std::max(max_e, std::abs(en - e0) / std::abs(e0));
        // momentum drift relative to the total-energy scale (|P| may vanish)
        max_p = std::max(max_p, (pm - p0).norm() / std::abs(e0));
      }
    }
    rep.energy_drift = max_e;
    rep.momentum_drift = max_p;
  }
  lap("conservation_ms");

  // Scattering data for both time directions.
  const SolitonField sol0{scenario.v0, &model};
  const SpectralFieldPair initial_deviation =
      subtract(initial.fields, sample_soliton(sol0, scenario.q0, grid));
  ScatterResult sc_plus = scattered_field(fwd.trajectory, initial_deviation,
                                          model, grid, TimeDirection::Future);
  ScatterResult sc_minus = scattered_field(bwd.trajectory, initial_deviation,
                                           model, grid, TimeDirection::Past);
  sc_plus.convergence_series = wave_operator_diagnostic(
      fwd.snapshots, fwd.snapshot_times, fwd.trajectory, model, grid, sc_plus.z_sc);
  sc_minus.convergence_series = wave_operator_diagnostic(
      bwd.snapshots, bwd.snapshot_times, bwd.trajectory, model, grid, sc_minus.z_sc);
  lap("scattering_ms");

  const IRExtractOptions ir_opt{scenario.k_ir, scenario.extrapolation_order};

  auto scatter_json = [&](const ScatterResult& sc, const std::string& stem) {
    write_field_file(out_dir + "/" + stem + ".csv", sc.z_sc, grid);
    json sj;
    sj["direction"] = sc.direction == TimeDirection::Future ? "+" : "-";
    sj["tail_bound"] = sc.tail_bound;
    sj["tail_warning"] = sc.tail_warning;
    json series = json::array();
    for (const auto& [T, dev] : sc.convergence_series)
      series.push_back({{"T", T}, {"deviation", dev}});
    sj["convergence_series"] = series;
    std::ofstream os(out_dir + "/" + stem + ".json");
    os << sj.dump(2) << "\n";
  };
  scatter_json(sc_plus, "z_sc_plus");
  scatter_json(sc_minus, "z_sc_minus");
  rep.tail_bound_plus = sc_plus.tail_bound;
  rep.tail_bound_minus = sc_minus.tail_bound;

  rep.v_plus = fwd.v_final;
  rep.v_minus = bwd.v_final;
  rep.v_plus_error = fwd.v_final_error_bound;
  rep.v_minus_error = bwd.v_final_error_bound;
  rep.accel_tail_exponent =
      -fit_exponent_window(fwd.trajectory, 0.25 * std::abs(scenario.t_final),
                           std::abs(scenario.t_final));

  rep.wave_operator_series = sc_plus.convergence_series;
  {
    double dev_T = 0.0, dev_T4 = 0.0;
    const double Tq = std::abs(scenario.t_final) / 4.0;
    double best_T = 1e300, best_T4 = 1e300;
    for (const auto& [T, dev] : sc_plus.convergence_series) {
      if (std::abs(T - std::abs(scenario.t_final)) < best_T) {
        best_T = std::abs(T - std::abs(scenario.t_final));
        dev_T = dev;
      }
      if (std::abs(T - Tq) < best_T4) {
        best_T4 = std::abs(T - Tq);
        dev_T4 = dev;
      }
    }
    rep.wave_operator_ratio = dev_T4 > 0.0 ? dev_T / dev_T4 : 0.0;
    std::ofstream os(out_dir + "/wave_operator.csv");
    os << "T,deviation\n";
    for (const auto& [T, dev] : sc_plus.convergence_series)
      os << fmt(T) << ',' << fmt(dev) << '\n';
  }

  // IR conservation across the forward snapshots.
  rep.ir_conservation = check_ir_conservation(
      fwd.snapshots, fwd.snapshot_times, fwd.trajectory, model, grid, ir_opt);
  {
    std::ofstream os(out_dir + "/ir_conservation.csv");
    os << "t,transverse_drift_e,transverse_drift_b,longitudinal_drift\n";
    for (std::size_t i = 0; i < rep.ir_conservation.times.size(); ++i)
      os << fmt(rep.ir_conservation.times[i]) << ','
         << fmt(rep.ir_conservation.transverse_drift_e[i]) << ','
         << fmt(rep.ir_conservation.transverse_drift_b[i]) << ','
         << fmt(rep.ir_conservation.longitudinal_drift[i]) << '\n';
  }
  lap("ir_conservation_ms");

  // Soft-photon theorem residual.
  rep.soft_photon = soft_photon_residual(sc_plus, sc_minus, rep.v_plus,
                                         rep.v_minus, model, grid, ir_opt);
  {
    json sj;
    sj["residual_norm_e"] = rep.soft_photon.residual_norm_e;
    sj["residual_norm_b"] = rep.soft_photon.residual_norm_b;
    sj["rhs_norm_e"] = rep.soft_photon.rhs_norm_e;
    sj["rhs_norm_b"] = rep.soft_photon.rhs_norm_b;
    sj["extrapolation_budget"] = rep.soft_photon.extrapolation_budget;
    sj["tail_budget"] = rep.soft_photon.tail_budget;
    json rows = json::array();
    for (std::size_t d = 0; d < rep.soft_photon.directions.size(); ++d)
      rows.push_back({{"khat", vec3_json(rep.soft_photon.directions[d])},
                      {"residual_e", rep.soft_photon.residual_e[d]},
                      {"residual_b", rep.soft_photon.residual_b[d]}});
    sj["per_direction"] = rows;
    std::ofstream os(out_dir + "/soft_photon.json");
    os << sj.dump(2) << "\n";
    std::ofstream cs(out_dir + "/soft_photon.csv");
    cs << "khat_x,khat_y,khat_z,residual_e,residual_b\n";
    for (std::size_t d = 0; d < rep.soft_photon.directions.size(); ++d)
      cs << fmt(rep.soft_photon.directions[d].x) << ','
         << fmt(rep.soft_photon.directions[d].y) << ','
         << fmt(rep.soft_photon.directions[d].z) << ','
         << fmt(rep.soft_photon.residual_e[d]) << ','
         << fmt(rep.soft_photon.residual_b[d]) << '\n';
  }
  lap("soft_photon_ms");

  // Coherent-state IR matching at v_plus over 16 directions, two times.
  {
    const KGrid dir_grid = build_kgrid(4, 1e-3, 1.0, 4, 4);
    const CoherentProfile prof{rep.v_plus, &model};
    const IRMatchReport rep0 = ir_match_check(prof, dir_grid.directions, 0.0);
    const IRMatchReport rep1 = ir_match_check(prof, dir_grid.directions, 7.3);
    rep.coherent_max_residual = std::max(rep0.max_residual, rep1.max_residual);
    double tdep = 0.0;
    for (std::size_t d = 0; d < dir_grid.directions.size(); ++d) {
      tdep = std::max(tdep, std::abs(rep0.residual_e[d] - rep1.residual_e[d]));
      tdep = std::max(tdep, std::abs(rep0.residual_b[d] - rep1.residual_b[d]));
    }
    rep.coherent_t_dependence = tdep;
    json cj;
    cj["v_inf"] = vec3_json(rep.v_plus);
    cj["max_residual"] = rep.coherent_max_residual;
    cj["t_dependence"] = tdep;
    std::ofstream os(out_dir + "/coherent_check.json");
    os << cj.dump(2) << "\n";
    std::ofstream cs(out_dir + "/coherent_check.csv");
    cs << "khat_x,khat_y,khat_z,residual_e_t0,residual_b_t0,residual_e_t1,residual_b_t1\n";
    for (std::size_t d = 0; d < dir_grid.directions.size(); ++d)
      cs << fmt(dir_grid.directions[d].x) << ',' << fmt(dir_grid.directions[d].y)
         << ',' << fmt(dir_grid.directions[d].z) << ','
         << fmt(rep0.residual_e[d]) << ',' << fmt(rep0.residual_b[d]) << ','
         << fmt(rep1.residual_e[d]) << ',' << fmt(rep1.residual_b[d]) << '\n';
  }
  lap("coherent_ms");

  {
    std::ofstream os(out_dir + "/report.json");
    os << rep.to_json();
    std::ofstream ts(out_dir + "/timings.json");
    ts << timings.dump(2) << "\n";
  }
  return rep;
}

std::vector<std::string> emit_plots_data(const std::string& report_dir) {
  namespace fs = std::filesystem;
  auto need = [&](const std::string& name) {
    const std::string p = report_dir + "/" + name;
    if (!fs::exists(p))
      throw std::runtime_error("emit_plots_data: missing artifact " + p);
    return p;
  };
  const std::string plots = report_dir + "/plots";
  fs::create_directories(plots);
  std::vector<std::string> written;

  // conservation drift vs t
  {
    std::ifstream is(need("drift.csv"));
    std::ofstream os(plots + "/conservation_drift.csv");
    std::string line;
    std::getline(is, line);
    os << "t,energy_drift_rel,momentum_drift_rel\n";
    double e0 = 0.0;
    Vec3 p0;
    bool first = true;
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string cell;
      double col[5];
      for (int c = 0; c < 5; ++c) {
        std::getline(ls, cell, ',');
        col[c] = std::stod(cell);
      }
      if (first) {
        e0 = col[1];
        p0 = {col[2], col[3], col[4]};
        first = false;
      }
      const Vec3 dp = Vec3{col[2], col[3], col[4]} - p0;
      os << fmt(col[0]) << ',' << fmt(std::abs(col[1] - e0) / std::abs(e0))
         << ',' << fmt(dp.norm() / std::abs(e0)) << '\n';
    }
    written.push_back(plots + "/conservation_drift.csv");
  }
  // soft-photon residual vs direction
  {
    std::ifstream is(need("soft_photon.csv"));
    std::ofstream os(plots + "/residual_vs_direction.csv");
    os << is.rdbuf();
    written.push_back(plots + "/residual_vs_direction.csv");
  }
  // |vdot| vs t with the fitted power law
  {
    std::ifstream rs(need("report.json"));
    std::stringstream ss;
    ss << rs.rdbuf();
    const json rj = json::parse(ss.str());
    const double p = rj["asymptotics"]["accel_tail_exponent"].get<double>();
    std::ifstream is(need("trajectory_forward.csv"));
    std::ofstream os(plots + "/accel_decay.csv");
    std::string line;
    std::getline(is, line);
    os << "t,accel_norm,fit_power_law\n";
    // anchor the fitted curve at the last sample
    std::vector<std::pair<double, double>> rows;
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string cell;
      double col[10];
      for (int c = 0; c < 10; ++c) {
        std::getline(ls, cell, ',');
        col[c] = std::stod(cell);
      }
      rows.emplace_back(col[0], Vec3{col[7], col[8], col[9]}.norm());
    }
    const double anchor = rows.empty() || rows.back().second <= 0.0
                              ? 0.0
                              : rows.back().second *
                                    std::pow(1.0 + rows.back().first, p);
    for (const auto& [t, a] : rows)
      os << fmt(t) << ',' << fmt(a) << ','
         << fmt(anchor * std::pow(1.0 + std::abs(t), -p)) << '\n';
    written.push_back(plots + "/accel_decay.csv");
  }
  // wave-operator convergence
  {
    std::ifstream is(need("wave_operator.csv"));
    std::ofstream os(plots + "/wave_operator_convergence.csv");
    os << is.rdbuf();
    written.push_back(plots + "/wave_operator_convergence.csv");
  }
  return written;
}

}  // namespace abraham
