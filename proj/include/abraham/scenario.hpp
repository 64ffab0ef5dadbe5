#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abraham/charge_model.hpp"
#include "abraham/dynamics.hpp"
#include "abraham/kgrid.hpp"
#include "abraham/observables.hpp"
#include "abraham/vec3.hpp"

namespace abraham {

//! Free-pulse initial-data parameters. delay > 0 places the packet a light
//! travel time `delay` before its arrival at the origin (the packet is built
//! at the origin and free-propagated backward by delay).
struct PulseSpec {
  double k0 = 1.0;
  double width = 0.25;
  double amplitude = 0.0;
  Vec3 polarization{1.0, 0.0, 0.0};
  Vec3 direction{0.0, 0.0, 1.0};
  double delay = 0.0;
};

struct SpatialCheckSpec {
  bool enabled = false;
  std::vector<Vec3> directions;
  std::vector<double> radii;
  double window_k = 0.35;
  double time = 10.0;
  // dedicated grid for the oscillatory quadrature
  std::size_t n_radial = 48;
  std::size_t n_polar = 48;
  std::size_t n_azimuth = 16;
};

//! One reproducible experiment. Parsed from a strict, versioned JSON file:
//! unknown keys are errors, every physical parameter is explicit.
struct Scenario {
  int schema_version = 1;
  // charge
  double e = 0.3;
  double m = 1.0;
  double r_phi = 1.0;
  // grid
  std::size_t n_radial = 32;
  double k_min = 1e-3;
  double k_max = 8.0;
  std::size_t n_polar = 8;
  std::size_t n_azimuth = 8;
  // initial data
  Vec3 v0;
  Vec3 q0;
  std::optional<PulseSpec> pulse;
  // run
  double t_final = 40.0;
  double dt = 0.02;
  std::size_t sample_every = 200;
  std::size_t trajectory_every = 1;
  double energy_drift_abort = 1e-2;
  // observables
  double k_ir = 6e-3;
  std::size_t extrapolation_order = 3;
  SpatialCheckSpec spatial;
  // reserved for randomized test data; the reference pipeline is deterministic
  std::uint64_t seed = 0;

  //! Parses the JSON text; throws std::runtime_error naming the offending
  //! path for unknown keys, wrong types, or precondition violations.
  static Scenario parse(const std::string& json_text);
  static Scenario load(const std::string& path);
  //! Canonical serialization; parse(serialize(s)) == s field by field.
  std::string serialize() const;

  KGrid make_grid() const;
  ChargeModel make_model() const;
  //! Soliton at (q0, v0) plus the optional delayed pulse, Gauss-slaved.
  SystemState make_initial_state(const KGrid& grid, const ChargeModel& model) const;
};

//! Everything run_scenario measures, plus provenance. Timings are kept out of
//! this struct's serialization so that report.json is bitwise reproducible;
//! they are written to a separate timings.json.
struct RunReport {
  std::string scenario_hash;
  std::string code_version;

  double energy_drift = 0.0;
  double momentum_drift = 0.0;
  IRConservationReport ir_conservation;
  SoftPhotonReport soft_photon;
  std::vector<std::pair<double, double>> wave_operator_series;
  double wave_operator_ratio = 0.0;  // deviation(T)/deviation(T/4)
  Vec3 v_plus, v_minus;
  double v_plus_error = 0.0, v_minus_error = 0.0;
  double accel_tail_exponent = 0.0;   // fitted p in (1+t)^-p
  double tail_bound_plus = 0.0, tail_bound_minus = 0.0;
  double coherent_max_residual = 0.0;
  double coherent_t_dependence = 0.0;
  double gauss_residual = 0.0;
  double transverse_current_residual = 0.0;

  std::string to_json() const;
};

//! Thresholded judgment of a report (the acceptance profile). Measurement and
//! judgment stay separate: RunReport carries numbers, this applies limits.
struct AcceptanceCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};
std::vector<AcceptanceCheck> acceptance_profile(const RunReport& report);

//! Runs the full pipeline (forward + backward evolution, scattering data,
//! conservation and soft-photon checks, coherent matching) and writes all
//! artifacts under out_dir. Every number in the report traces to a file.
RunReport run_scenario(const Scenario& scenario, const std::string& out_dir);

//! Writes plot-ready CSVs from a completed run directory; throws naming any
//! missing artifact.
std::vector<std::string> emit_plots_data(const std::string& report_dir);

//! FNV-1a hash of the canonical scenario serialization.
std::string scenario_hash(const Scenario& s);

//! The desk-scale reference configuration used by the acceptance suite:
//! e = 0.3, m = 1, r_phi = 1, 32 x 8 x 8 grid over k in [1e-3, 8],
//! rest start plus a delayed transverse pulse, t_final = 40, dt = 0.02.
Scenario reference_scenario();

inline constexpr const char* kCodeVersion = "abraham-0.1.0";

}  // namespace abraham
