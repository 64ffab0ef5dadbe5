// Command-line front end for the Maxwell-Lorentz scattering laboratory.
// Verbs: simulate, scatter, check-conservation, soft-photon, coherent-check,
// soliton-table, spatial-tail, report. Each verb is self-contained: it reads
// a scenario file, runs whatever pipeline stages it needs, and writes its
// artifacts under --out. The exit code of `report` is nonzero iff any
// acceptance-profile threshold fails.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "abraham/coherent.hpp"
#include "abraham/observables.hpp"
#include "abraham/scenario.hpp"
#include "abraham/soliton.hpp"

using namespace abraham;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

int cmd_simulate(const Scenario& sc, const std::string& out, bool backward) {
  std::filesystem::create_directories(out);
  const KGrid grid = sc.make_grid();
  const ChargeModel model = sc.make_model();
  const SystemState initial = sc.make_initial_state(grid, model);
  const double sign = backward ? -1.0 : 1.0;
  const SimulateResult res =
      simulate(initial, grid, model, sign * sc.t_final, sign * sc.dt,
               sc.sample_every, sc.trajectory_every, sc.energy_drift_abort);
  const std::string tag = backward ? "backward" : "forward";
  {
    std::ofstream os(out + "/trajectory_" + tag + ".csv");
    os << "t,qx,qy,qz,vx,vy,vz,ax,ay,az\n";
    for (const auto& s : res.trajectory.samples)
      os << fmt(s.t) << ',' << fmt(s.q.x) << ',' << fmt(s.q.y) << ','
         << fmt(s.q.z) << ',' << fmt(s.v.x) << ',' << fmt(s.v.y) << ','
         << fmt(s.v.z) << ',' << fmt(s.a.x) << ',' << fmt(s.a.y) << ','
         << fmt(s.a.z) << '\n';
  }
  write_field_file(out + "/final_" + tag + ".csv", res.final_state.fields, grid);
  for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "/snapshot_%s_%04zu.csv", tag.c_str(), i);
    write_field_file(out + name, res.snapshots[i], grid);
  }
  json meta;
  meta["scenario_hash"] = scenario_hash(sc);
  meta["direction"] = tag;
  meta["v_final"] = vec3_json(res.v_final);
  meta["v_final_error_bound"] = res.v_final_error_bound;
  meta["energy_drift"] = res.energy_drift;
  meta["snapshot_times"] = res.snapshot_times;
  std::ofstream ms(out + "/simulate_" + tag + ".json");
  ms << meta.dump(2) << "\n";
  std::cout << "simulate(" << tag << "): v_final = (" << res.v_final.x << ", "
            << res.v_final.y << ", " << res.v_final.z
            << "), energy drift = " << res.energy_drift << "\n";
  return 0;
}

int cmd_scatter(const Scenario& sc, const std::string& out) {
  std::filesystem::create_directories(out);
  const KGrid grid = sc.make_grid();
  const ChargeModel model = sc.make_model();
  const SystemState initial = sc.make_initial_state(grid, model);
  const SolitonField sol0{sc.v0, &model};
  const SpectralFieldPair dev0 =
      subtract(initial.fields, sample_soliton(sol0, sc.q0, grid));
  for (const bool backward : {false, true}) {
    const double sign = backward ? -1.0 : 1.0;
    const SimulateResult res =
        simulate(initial, grid, model, sign * sc.t_final, sign * sc.dt,
                 sc.sample_every, sc.trajectory_every, sc.energy_drift_abort);
    ScatterResult scr = scattered_field(
        res.trajectory, dev0, model, grid,
        backward ? TimeDirection::Past : TimeDirection::Future);
    scr.convergence_series =
        wave_operator_diagnostic(res.snapshots, res.snapshot_times,
                                 res.trajectory, model, grid, scr.z_sc);
    const std::string stem = backward ? "z_sc_minus" : "z_sc_plus";
    write_field_file(out + "/" + stem + ".csv", scr.z_sc, grid);
    json sj;
    sj["direction"] = backward ? "-" : "+";
    sj["tail_bound"] = scr.tail_bound;
    sj["tail_warning"] = scr.tail_warning;
    json series = json::array();
    for (const auto& [T, d] : scr.convergence_series)
      series.push_back({{"T", T}, {"deviation", d}});
    sj["convergence_series"] = series;
    std::ofstream os(out + "/" + stem + ".json");
    os << sj.dump(2) << "\n";
    std::cout << stem << ": ||z_sc|| = " << field_norm(scr.z_sc, grid)
              << ", tail_bound = " << scr.tail_bound
              << (scr.tail_warning ? "  [tail warning: run too short]" : "")
              << "\n";
  }
  return 0;
}

int cmd_check_conservation(const Scenario& sc, const std::string& out) {
  std::filesystem::create_directories(out);
  const KGrid grid = sc.make_grid();
  const ChargeModel model = sc.make_model();
  const SystemState initial = sc.make_initial_state(grid, model);
  const SimulateResult res =
      simulate(initial, grid, model, sc.t_final, sc.dt, sc.sample_every,
               sc.trajectory_every, sc.energy_drift_abort);
  const IRExtractOptions opt{sc.k_ir, sc.extrapolation_order};
  const IRConservationReport irr = check_ir_conservation(
      res.snapshots, res.snapshot_times, res.trajectory, model, grid, opt);

  double e0 = 0.0, max_e = 0.0, max_p = 0.0;
  Vec3 p0;
  std::ofstream cs(out + "/conservation.csv");
  cs << "t,energy,px,py,pz,ir_transverse_drift,ir_longitudinal_drift\n";
  for (std::size_t i = 0; i < res.snapshots.size(); ++i) {
    const double t = res.snapshot_times[i];
    std::size_t jbest = 0;
    double err = 1e300;
    for (std::size_t j = 0; j < res.trajectory.samples.size(); ++j)
      if (std::abs(res.trajectory.samples[j].t - t) < err) {
        err = std::abs(res.trajectory.samples[j].t - t);
        jbest = j;
      }
    SystemState st{res.snapshots[i],
                   ParticleState{res.trajectory.samples[jbest].q,
                                 res.trajectory.samples[jbest].v},
                   t};
    const double en = total_energy(st, grid, model);
    const Vec3 pm = total_momentum(st, grid, model);
    if (i == 0) {
      e0 = en;
      p0 = pm;
    } else {
      max_e = std::max(max_e, std::abs(en - e0) / std::abs(e0));
      max_p = std::max(max_p, (pm - p0).norm() / std::abs(e0));
    }
    cs << fmt(t) << ',' << fmt(en) << ',' << fmt(pm.x) << ',' << fmt(pm.y)
       << ',' << fmt(pm.z) << ','
       << fmt(std::max(irr.transverse_drift_e[i], irr.transverse_drift_b[i]))
       << ',' << fmt(irr.longitudinal_drift[i]) << '\n';
  }
  json cj;
  cj["energy_drift"] = max_e;
  cj["momentum_drift"] = max_p;
  cj["ir_max_transverse_drift"] = irr.max_transverse_drift;
  cj["ir_max_longitudinal_drift"] = irr.max_longitudinal_drift;
  std::ofstream os(out + "/conservation.json");
  os << cj.dump(2) << "\n";
  std::cout << "energy drift " << max_e << ", momentum drift " << max_p
            << ", IR transverse drift " << irr.max_transverse_drift
            << ", IR longitudinal drift " << irr.max_longitudinal_drift << "\n";
  return 0;
}

int cmd_soft_photon(const Scenario& sc, const std::string& out) {
  const RunReport rep = run_scenario(sc, out);
  std::cout << "soft-photon residual table (relative to ||rhs||)\n";
  std::cout << "  sector   residual   rhs_norm   extrap_budget   tail_budget\n";
  std::printf("  E        %.3e  %.3e  %.3e       %.3e\n",
              rep.soft_photon.residual_norm_e, rep.soft_photon.rhs_norm_e,
              rep.soft_photon.extrapolation_budget, rep.soft_photon.tail_budget);
  std::printf("  B        %.3e  %.3e\n", rep.soft_photon.residual_norm_b,
              rep.soft_photon.rhs_norm_b);
  std::cout << "  per-direction residuals in " << out << "/soft_photon.csv\n";
  return 0;
}

int cmd_coherent_check(const Scenario& sc, const std::string& out,
                       const std::vector<double>& v_inf, double t) {
  std::filesystem::create_directories(out);
  const ChargeModel model = sc.make_model();
  const Vec3 v{v_inf[0], v_inf[1], v_inf[2]};
  const CoherentProfile prof{v, &model};
  const KGrid dir_grid = build_kgrid(4, 1e-3, 1.0, 4, 4);
  const IRMatchReport rep = ir_match_check(prof, dir_grid.directions, t);
  json cj;
  cj["v_inf"] = vec3_json(v);
  cj["t"] = t;
  cj["max_residual"] = rep.max_residual;
  std::ofstream os(out + "/coherent_check.json");
  os << cj.dump(2) << "\n";
  std::ofstream cs(out + "/coherent_check.csv");
  cs << "khat_x,khat_y,khat_z,residual_e,residual_b\n";
  for (std::size_t d = 0; d < rep.directions.size(); ++d)
    cs << fmt(rep.directions[d].x) << ',' << fmt(rep.directions[d].y) << ','
       << fmt(rep.directions[d].z) << ',' << fmt(rep.residual_e[d]) << ','
       << fmt(rep.residual_b[d]) << '\n';
  std::cout << "coherent-check: max residual " << rep.max_residual << " over "
            << rep.directions.size() << " directions at t = " << t << "\n";
  return 0;
}

int cmd_soliton_table(const Scenario& sc, const std::string& out_file,
                      const std::vector<double>& vel) {
  const ChargeModel model = sc.make_model();
  const Vec3 v{vel[0], vel[1], vel[2]};
  const SolitonField sol{v, &model};
  const KGrid grid = sc.make_grid();
  std::ofstream os(out_file);
  if (!os) throw std::runtime_error("cannot open " + out_file);
  os << "khat_x,khat_y,khat_z,"
        "re_ir_e_x,im_ir_e_x,re_ir_e_y,im_ir_e_y,re_ir_e_z,im_ir_e_z,"
        "re_ir_b_x,im_ir_b_x,re_ir_b_y,im_ir_b_y,re_ir_b_z,im_ir_b_z,"
        "tail_e_x,tail_e_y,tail_e_z\n";
  for (const Vec3& kh : grid.directions) {
    const auto [ee, bb] = ir_limit_soliton(sol, kh);
    const Vec3 tail = soliton_position_tail(sol, kh);
    os << fmt(kh.x) << ',' << fmt(kh.y) << ',' << fmt(kh.z) << ','
       << fmt(ee.x.real()) << ',' << fmt(ee.x.imag()) << ',' << fmt(ee.y.real())
       << ',' << fmt(ee.y.imag()) << ',' << fmt(ee.z.real()) << ','
       << fmt(ee.z.imag()) << ',' << fmt(bb.x.real()) << ',' << fmt(bb.x.imag())
       << ',' << fmt(bb.y.real()) << ',' << fmt(bb.y.imag()) << ','
       << fmt(bb.z.real()) << ',' << fmt(bb.z.imag()) << ',' << fmt(tail.x)
       << ',' << fmt(tail.y) << ',' << fmt(tail.z) << '\n';
  }
  std::cout << "soliton-table: wrote " << grid.directions.size()
            << " directions to " << out_file << "\n";
  return 0;
}

int cmd_spatial_tail(const Scenario& sc, const std::string& out) {
  if (!sc.spatial.enabled)
    throw std::runtime_error(
        "spatial-tail: observables.spatial.enabled is false in this scenario");
  std::filesystem::create_directories(out);
  // Dedicated finer grid: the oscillatory quadrature needs angular resolution
  // ~ window_k * radius, far beyond the evolution grid's needs.
  Scenario fine = sc;
  fine.n_radial = sc.spatial.n_radial;
  fine.n_polar = sc.spatial.n_polar;
  fine.n_azimuth = sc.spatial.n_azimuth;
  const KGrid grid = fine.make_grid();
  const ChargeModel model = fine.make_model();
  const SystemState initial = fine.make_initial_state(grid, model);

  SpatialTailOptions opt;
  opt.directions = sc.spatial.directions;
  opt.radii = sc.spatial.radii;
  opt.window_k = sc.spatial.window_k;

  const SpatialTail tail0 =
      spatial_tail(initial.fields, initial.particle, model, grid, opt);
  const double t_check = sc.spatial.time;
  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(t_check / sc.dt));
  const SimulateResult res =
      simulate(initial, grid, model, t_check, sc.dt, n_steps, n_steps,
               sc.energy_drift_abort);
  const SpatialTail tail1 = spatial_tail(res.final_state.fields,
                                         res.final_state.particle, model, grid, opt);

  json tj;
  tj["t0"] = 0.0;
  tj["t1"] = t_check;
  json rows = json::array();
  double max_rel = 0.0;
  for (std::size_t d = 0; d < opt.directions.size(); ++d) {
    const double rel = (tail1.e_tail[d] - tail0.e_tail[d]).norm() /
                       (tail0.e_tail[d].norm() + 1e-300);
    max_rel = std::max(max_rel, rel);
    rows.push_back({{"xhat", vec3_json(tail0.directions[d])},
                    {"e_tail_t0", vec3_json(tail0.e_tail[d])},
                    {"e_tail_t1", vec3_json(tail1.e_tail[d])},
                    {"b_tail_t0", vec3_json(tail0.b_tail[d])},
                    {"b_tail_t1", vec3_json(tail1.b_tail[d])},
                    {"relative_change_e", rel},
                    {"error_t0", tail0.error[d]},
                    {"error_t1", tail1.error[d]},
                    {"under_resolved",
                     tail0.under_resolved[d] || tail1.under_resolved[d]}});
  }
  tj["per_direction"] = rows;
  tj["max_relative_change_e"] = max_rel;
  tj["flux_t0"] = flux_from_tail(tail0);
  tj["flux_t1"] = flux_from_tail(tail1);
  tj["charge_e"] = sc.e;
  std::ofstream os(out + "/spatial_tail.json");
  os << tj.dump(2) << "\n";
  std::cout << "spatial-tail: max relative change " << max_rel << ", flux(t0) "
            << flux_from_tail(tail0) << ", flux(t1) " << flux_from_tail(tail1)
            << " (charge " << sc.e << ")\n";
  return 0;
}

int cmd_report(const Scenario& sc, const std::string& out, bool emit_plots) {
  const RunReport rep = run_scenario(sc, out);
  if (emit_plots) emit_plots_data(out);
  const auto checks = acceptance_profile(rep);
  bool all_pass = true;
  for (const auto& c : checks) {
    std::printf("%-38s %12.5e  vs %9.2e  [%s]\n", c.name.c_str(), c.value,
                c.threshold, c.pass ? "PASS" : "FAIL");
    all_pass = all_pass && c.pass;
  }
  std::cout << (all_pass ? "all acceptance-profile checks passed"
                         : "acceptance-profile FAILURES present")
            << "; artifacts in " << out << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maxwell-Lorentz scattering laboratory"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = "run";
  bool backward = false;
  bool plots = false;
  std::vector<double> vel{0.0, 0.0, 0.5};
  double t_coherent = 0.0;
  std::string table_out = "soliton_table.csv";

  auto add_common = [&](CLI::App* cmd, bool needs_out = true) {
    cmd->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    if (needs_out) cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* c_sim = app.add_subcommand("simulate", "integrate the coupled system");
  add_common(c_sim);
  c_sim->add_flag("--backward", backward, "evolve toward negative times");

  CLI::App* c_scatter =
      app.add_subcommand("scatter", "compute scattered data z_sc for both time directions");
  add_common(c_scatter);

  CLI::App* c_cons = app.add_subcommand(
      "check-conservation", "energy/momentum and infrared-tail drift report");
  add_common(c_cons);

  CLI::App* c_soft =
      app.add_subcommand("soft-photon", "full pipeline plus the residual table");
  add_common(c_soft);

  CLI::App* c_coh = app.add_subcommand("coherent-check",
                                       "coherent-state infrared matching residuals");
  add_common(c_coh);
  c_coh->add_option("--v-inf", vel, "asymptotic velocity (3 numbers)")->expected(3);
  c_coh->add_option("--t", t_coherent, "evaluation time");

  CLI::App* c_table = app.add_subcommand(
      "soliton-table", "dump soliton IR and spatial tails over the direction grid");
  c_table->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  c_table->add_option("--out", table_out, "output CSV file");
  c_table->add_option("--v", vel, "soliton velocity (3 numbers)")->expected(3);

  CLI::App* c_spatial = app.add_subcommand(
      "spatial-tail", "slow position-space tail conservation check");
  add_common(c_spatial);

  CLI::App* c_report =
      app.add_subcommand("report", "full pipeline, report.json and acceptance profile");
  add_common(c_report);
  c_report->add_flag("--plots", plots, "also write plot-ready CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    const Scenario sc = Scenario::load(scenario_path);
    if (c_sim->parsed()) return cmd_simulate(sc, out_dir, backward);
    if (c_scatter->parsed()) return cmd_scatter(sc, out_dir);
    if (c_cons->parsed()) return cmd_check_conservation(sc, out_dir);
    if (c_soft->parsed()) return cmd_soft_photon(sc, out_dir);
    if (c_coh->parsed()) return cmd_coherent_check(sc, out_dir, vel, t_coherent);
    if (c_table->parsed()) return cmd_soliton_table(sc, table_out, vel);
    if (c_spatial->parsed()) return cmd_spatial_tail(sc, out_dir);
    if (c_report->parsed()) return cmd_report(sc, out_dir, plots);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
