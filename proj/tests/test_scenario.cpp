#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "abraham/scenario.hpp"

using namespace abraham;

namespace {

std::string tiny_scenario_json() {
  return R"({
  "schema_version": 1,
  "charge": {"e": 0.3, "m": 1.0, "r_phi": 1.0},
  "grid": {"n_radial": 12, "k_min": 1e-3, "k_max": 5.0, "n_polar": 4, "n_azimuth": 4},
  "initial": {"v0": [0, 0, 0], "q0": [0, 0, 0],
    "pulse": {"k0": 1.0, "width": 0.25, "amplitude": 0.6,
              "polarization": [1, 0, 0], "direction": [0, 0, 1], "delay": 0.5}},
  "run": {"t_final": 2.0, "dt": 0.05, "sample_every": 10,
          "trajectory_every": 1, "energy_drift_abort": 1e-2},
  "observables": {"k_ir": 6e-3, "extrapolation_order": 3},
  "seed": 7
})";
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse-serialize-parse is the identity") {
  const Scenario a = Scenario::parse(tiny_scenario_json());
  const std::string s1 = a.serialize();
  const Scenario b = Scenario::parse(s1);
  const std::string s2 = b.serialize();
  CHECK(s1 == s2);
  CHECK(a.e == b.e);
  CHECK(a.n_radial == b.n_radial);
  CHECK(a.pulse.has_value());
  CHECK(b.pulse.has_value());
  CHECK(a.pulse->amplitude == b.pulse->amplitude);
  CHECK(a.seed == b.seed);
}

TEST_CASE("unknown keys are errors that name the offending path") {
  std::string text = tiny_scenario_json();
  text.insert(text.rfind('}'), R"(, "extra_key": 1)");
  CHECK_THROWS_WITH_AS(Scenario::parse(text),
                       doctest::Contains("extra_key"), std::runtime_error);

  std::string nested = tiny_scenario_json();
  nested.replace(nested.find("\"e\": 0.3"), 8, "\"charge_typo\": 0.3");
  CHECK_THROWS_WITH_AS(Scenario::parse(nested),
                       doctest::Contains("charge.charge_typo"), std::runtime_error);
}

TEST_CASE("precondition violations are rejected at parse time") {
  std::string fast = tiny_scenario_json();
  fast.replace(fast.find("\"v0\": [0, 0, 0]"), 15, "\"v0\": [0, 0, 2]");
  CHECK_THROWS_AS(Scenario::parse(fast), std::runtime_error);

  std::string bad_version = tiny_scenario_json();
  bad_version.replace(bad_version.find("\"schema_version\": 1"), 19,
                      "\"schema_version\": 9");
  CHECK_THROWS_AS(Scenario::parse(bad_version), std::runtime_error);
}

TEST_CASE("initial state satisfies the constraints by construction") {
  const Scenario sc = Scenario::parse(tiny_scenario_json());
  const KGrid grid = sc.make_grid();
  const ChargeModel model = sc.make_model();
  const SystemState st = sc.make_initial_state(grid, model);
  CHECK(gauss_defect(st.fields, st.particle.q, grid, model) < 1e-12);
  CHECK(hermitian_defect(st.fields, grid) < 1e-13);
  CHECK(transversality_defect(st.fields, grid) < 1e-13);
}

TEST_CASE("run_scenario is deterministic: byte-identical reports") {
  const Scenario sc = Scenario::parse(tiny_scenario_json());
  const auto tmp = std::filesystem::temp_directory_path();
  const std::string d1 = (tmp / "abraham_run_a").string();
  const std::string d2 = (tmp / "abraham_run_b").string();
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
  run_scenario(sc, d1);
  run_scenario(sc, d2);
  CHECK(slurp(d1 + "/report.json") == slurp(d2 + "/report.json"));
  CHECK(!slurp(d1 + "/report.json").empty());

  // plot emission works and is reproducible too
  emit_plots_data(d1);
  emit_plots_data(d2);
  CHECK(slurp(d1 + "/plots/conservation_drift.csv") ==
        slurp(d2 + "/plots/conservation_drift.csv"));
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST_CASE("soliton-only scenario: nothing scatters") {
  Scenario sc = Scenario::parse(tiny_scenario_json());
  sc.pulse.reset();
  sc.v0 = {0, 0, 0.3};
  const auto tmp = std::filesystem::temp_directory_path();
  const std::string dir = (tmp / "abraham_run_soliton").string();
  std::filesystem::remove_all(dir);
  const RunReport rep = run_scenario(sc, dir);
  CHECK(rep.energy_drift < 1e-6);
  CHECK(rep.momentum_drift < 1e-6);
  CHECK(rep.ir_conservation.max_transverse_drift < 1e-6);
  CHECK((rep.v_plus - sc.v0).norm() < 1e-8);
  CHECK((rep.v_minus - sc.v0).norm() < 1e-8);
  // residuals are reported against a floor when nothing moved
  CHECK(rep.soft_photon.rhs_norm_e < 1e-10);
  std::filesystem::remove_all(dir);
}

TEST_CASE("e = 0 scenario with a pulse: fully decoupled") {
  Scenario sc = Scenario::parse(tiny_scenario_json());
  sc.e = 0.0;
  const auto tmp = std::filesystem::temp_directory_path();
  const std::string dir = (tmp / "abraham_run_free").string();
  std::filesystem::remove_all(dir);
  const RunReport rep = run_scenario(sc, dir);
  CHECK(rep.v_plus.norm() < 1e-14);
  CHECK(rep.v_minus.norm() < 1e-14);
  CHECK(rep.soft_photon.rhs_norm_e < 1e-16);
  for (const auto& [T, dev] : rep.wave_operator_series) {
    CHECK(dev < 1e-10);
    (void)T;
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("emit_plots_data names the missing artifact") {
  const auto tmp = std::filesystem::temp_directory_path();
  const std::string dir = (tmp / "abraham_empty_dir").string();
  std::filesystem::create_directories(dir);
  CHECK_THROWS_WITH_AS(emit_plots_data(dir), doctest::Contains("drift.csv"),
                       std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scenario hash is stable and sensitive") {
  const Scenario a = Scenario::parse(tiny_scenario_json());
  Scenario b = a;
  CHECK(scenario_hash(a) == scenario_hash(b));
  b.e = 0.31;
  CHECK(scenario_hash(a) != scenario_hash(b));
}
