// Python bindings for the core operations. Field data crosses the boundary
// as numpy arrays of shape (n_nodes, 3) per sector, complex128.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "abraham/coherent.hpp"
#include "abraham/dynamics.hpp"
#include "abraham/observables.hpp"
#include "abraham/scattering.hpp"
#include "abraham/scenario.hpp"
#include "abraham/soliton.hpp"

namespace py = pybind11;
using namespace abraham;

namespace {

py::array_t<std::complex<double>> to_array(const std::vector<CVec3>& v) {
  py::array_t<std::complex<double>> out({v.size(), std::size_t(3)});
  auto r = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < v.size(); ++i) {
    r(i, 0) = v[i].x;
    r(i, 1) = v[i].y;
    r(i, 2) = v[i].z;
  }
  return out;
}

std::vector<CVec3> from_array(const py::array_t<std::complex<double>>& a) {
  if (a.ndim() != 2 || a.shape(1) != 3)
    throw std::invalid_argument("expected an (n, 3) complex array");
  std::vector<CVec3> v(a.shape(0));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    v[i] = {r(i, 0), r(i, 1), r(i, 2)};
  return v;
}

Vec3 to_vec3(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> from_vec3(const Vec3& v) { return {v.x, v.y, v.z}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral Maxwell-Lorentz laboratory: solitons, scattering, "
            "infrared tails and the soft-photon identity";

  py::class_<KGrid>(m, "KGrid")
      .def_property_readonly("n_nodes", &KGrid::n_nodes)
      .def_property_readonly("n_radial", &KGrid::n_radial)
      .def_property_readonly("n_directions", &KGrid::n_directions)
      .def_property_readonly("radial_nodes",
                             [](const KGrid& g) { return g.radial_nodes; })
      .def_property_readonly("radial_weights",
                             [](const KGrid& g) { return g.radial_weights; })
      .def_property_readonly("angular_weights",
                             [](const KGrid& g) { return g.angular_weights; })
      .def_property_readonly("directions",
                             [](const KGrid& g) {
                               std::vector<std::array<double, 3>> d;
                               d.reserve(g.directions.size());
                               for (const auto& v : g.directions)
                                 d.push_back(from_vec3(v));
                               return d;
                             })
      .def_property_readonly("antipode_index",
                             [](const KGrid& g) { return g.antipode_index; });

  m.def("build_kgrid", &build_kgrid, py::arg("n_radial"), py::arg("k_min"),
        py::arg("k_max"), py::arg("n_polar"), py::arg("n_azimuth"));

  py::class_<SpectralFieldPair>(m, "SpectralFieldPair")
      .def(py::init<std::size_t>())
      .def_property(
          "e_hat",
          [](const SpectralFieldPair& s) { return to_array(s.e_hat); },
          [](SpectralFieldPair& s, const py::array_t<std::complex<double>>& a) {
            s.e_hat = from_array(a);
          })
      .def_property(
          "b_hat",
          [](const SpectralFieldPair& s) { return to_array(s.b_hat); },
          [](SpectralFieldPair& s, const py::array_t<std::complex<double>>& a) {
            s.b_hat = from_array(a);
          })
      .def("__len__", &SpectralFieldPair::size);

  py::class_<FieldFunctionals>(m, "FieldFunctionals")
      .def_readonly("energy", &FieldFunctionals::energy)
      .def_property_readonly(
          "momentum", [](const FieldFunctionals& f) { return from_vec3(f.momentum); })
      .def_readonly("l2_norm", &FieldFunctionals::l2_norm);

  m.def("free_propagate", &free_propagate, py::arg("state"), py::arg("grid"),
        py::arg("t"));
  m.def("functionals",
        [](const SpectralFieldPair& s, const KGrid& g) { return functionals(s, g); });
  m.def("enforce_hermitian", &enforce_hermitian);
  m.def("hermitian_defect", &hermitian_defect);
  m.def("field_norm", &field_norm);

  py::class_<ChargeModel>(m, "ChargeModel")
      .def(py::init<double, double, double>(), py::arg("e"), py::arg("m"),
           py::arg("r_phi"))
      .def_property_readonly("e", &ChargeModel::e)
      .def_property_readonly("m", &ChargeModel::m)
      .def_property_readonly("r_phi", &ChargeModel::r_phi)
      .def("profile", &ChargeModel::profile)
      .def("phi_hat", &ChargeModel::phi_hat);

  m.def("soliton_momentum",
        [](const ChargeModel& model, const std::array<double, 3>& v,
           const std::array<double, 3>& k) {
          const SolitonField s{to_vec3(v), &model};
          const auto [e, b] = soliton_momentum(s, to_vec3(k));
          return py::make_tuple(
              py::make_tuple(e.x, e.y, e.z), py::make_tuple(b.x, b.y, b.z));
        });
  m.def("soliton_vgrad",
        [](const ChargeModel& model, const std::array<double, 3>& v,
           const std::array<double, 3>& k, const std::array<double, 3>& dv) {
          const SolitonField s{to_vec3(v), &model};
          const auto [e, b] = soliton_vgrad(s, to_vec3(k), to_vec3(dv));
          return py::make_tuple(
              py::make_tuple(e.x, e.y, e.z), py::make_tuple(b.x, b.y, b.z));
        });
  m.def("soliton_position_tail",
        [](const ChargeModel& model, const std::array<double, 3>& v,
           const std::array<double, 3>& x_hat) {
          const SolitonField s{to_vec3(v), &model};
          return from_vec3(soliton_position_tail(s, to_vec3(x_hat)));
        });
  m.def("ir_limit_soliton",
        [](const ChargeModel& model, const std::array<double, 3>& v,
           const std::array<double, 3>& k_hat) {
          const SolitonField s{to_vec3(v), &model};
          const auto [e, b] = ir_limit_soliton(s, to_vec3(k_hat));
          return py::make_tuple(
              py::make_tuple(e.x, e.y, e.z), py::make_tuple(b.x, b.y, b.z));
        });
  m.def("sample_soliton",
        [](const ChargeModel& model, const std::array<double, 3>& v,
           const std::array<double, 3>& q, const KGrid& grid) {
          const SolitonField s{to_vec3(v), &model};
          return sample_soliton(s, to_vec3(q), grid);
        });

  m.def("make_pulse",
        [](const KGrid& grid, double k0, double width, double amplitude,
           const std::array<double, 3>& pol, const std::array<double, 3>& dir) {
          return make_pulse(grid, k0, width, amplitude, to_vec3(pol), to_vec3(dir));
        },
        py::arg("grid"), py::arg("k0"), py::arg("width"), py::arg("amplitude"),
        py::arg("polarization"), py::arg("direction"));

  py::class_<ParticleState>(m, "ParticleState")
      .def(py::init([](const std::array<double, 3>& q, const std::array<double, 3>& v) {
             return ParticleState{to_vec3(q), to_vec3(v)};
           }),
           py::arg("q"), py::arg("v"))
      .def_property_readonly("q", [](const ParticleState& p) { return from_vec3(p.q); })
      .def_property_readonly("v", [](const ParticleState& p) { return from_vec3(p.v); })
      .def("gamma", &ParticleState::gamma);

  py::class_<SystemState>(m, "SystemState")
      .def(py::init<>())
      .def_readwrite("fields", &SystemState::fields)
      .def_readwrite("particle", &SystemState::particle)
      .def_readwrite("t", &SystemState::t);

  py::class_<TrajectorySample>(m, "TrajectorySample")
      .def_readonly("t", &TrajectorySample::t)
      .def_property_readonly("q", [](const TrajectorySample& s) { return from_vec3(s.q); })
      .def_property_readonly("v", [](const TrajectorySample& s) { return from_vec3(s.v); })
      .def_property_readonly("a", [](const TrajectorySample& s) { return from_vec3(s.a); });

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("samples", &Trajectory::samples);

  py::class_<SimulateResult>(m, "SimulateResult")
      .def_readonly("final_state", &SimulateResult::final_state)
      .def_readonly("trajectory", &SimulateResult::trajectory)
      .def_readonly("snapshot_times", &SimulateResult::snapshot_times)
      .def_readonly("snapshots", &SimulateResult::snapshots)
      .def_readonly("energy_drift", &SimulateResult::energy_drift)
      .def_property_readonly(
          "v_final", [](const SimulateResult& r) { return from_vec3(r.v_final); })
      .def_readonly("v_final_error_bound", &SimulateResult::v_final_error_bound);

  m.def("step", &step, py::arg("state"), py::arg("grid"), py::arg("model"),
        py::arg("dt"));
  m.def("simulate", &simulate, py::arg("initial"), py::arg("grid"),
        py::arg("model"), py::arg("t_final"), py::arg("dt"),
        py::arg("sample_every"), py::arg("trajectory_every") = 1,
        py::arg("energy_drift_abort") = 1e-2);
  m.def("smeared_fields_at_particle",
        [](const SystemState& st, const KGrid& g, const ChargeModel& model) {
          const auto [e, b] = smeared_fields_at_particle(st, g, model);
          return py::make_tuple(from_vec3(e), from_vec3(b));
        });
  m.def("total_energy", &total_energy);
  m.def("gauss_defect",
        [](const SpectralFieldPair& f, const std::array<double, 3>& q,
           const KGrid& g, const ChargeModel& model) {
          return gauss_defect(f, to_vec3(q), g, model);
        });

  py::enum_<TimeDirection>(m, "TimeDirection")
      .value("Future", TimeDirection::Future)
      .value("Past", TimeDirection::Past);

  py::class_<ScatterResult>(m, "ScatterResult")
      .def_readonly("z_sc", &ScatterResult::z_sc)
      .def_readonly("tail_bound", &ScatterResult::tail_bound)
      .def_readonly("tail_warning", &ScatterResult::tail_warning)
      .def_readonly("convergence_series", &ScatterResult::convergence_series);

  m.def("scattered_field", &scattered_field, py::arg("trajectory"),
        py::arg("initial_deviation"), py::arg("model"), py::arg("grid"),
        py::arg("direction"));

  py::class_<IRTail>(m, "IRTail")
      .def_property_readonly("e_tail", [](const IRTail& t) { return to_array(t.e_tail); })
      .def_property_readonly("b_tail", [](const IRTail& t) { return to_array(t.b_tail); })
      .def_readonly("error_e", &IRTail::error_e)
      .def_readonly("error_b", &IRTail::error_b);

  m.def("ir_extract",
        [](const SpectralFieldPair& f, const KGrid& g, double k_ir,
           std::size_t max_order) {
          return ir_extract(f, g, IRExtractOptions{k_ir, max_order});
        },
        py::arg("field"), py::arg("grid"), py::arg("k_ir") = 6e-3,
        py::arg("max_order") = 3);

  py::class_<SoftPhotonReport>(m, "SoftPhotonReport")
      .def_readonly("residual_norm_e", &SoftPhotonReport::residual_norm_e)
      .def_readonly("residual_norm_b", &SoftPhotonReport::residual_norm_b)
      .def_readonly("rhs_norm_e", &SoftPhotonReport::rhs_norm_e)
      .def_readonly("rhs_norm_b", &SoftPhotonReport::rhs_norm_b)
      .def_readonly("residual_e", &SoftPhotonReport::residual_e)
      .def_readonly("residual_b", &SoftPhotonReport::residual_b)
      .def_readonly("extrapolation_budget", &SoftPhotonReport::extrapolation_budget)
      .def_readonly("tail_budget", &SoftPhotonReport::tail_budget);

  m.def("soft_photon_residual",
        [](const ScatterResult& sp, const ScatterResult& sm,
           const std::array<double, 3>& vp, const std::array<double, 3>& vm,
           const ChargeModel& model, const KGrid& grid) {
          return soft_photon_residual(sp, sm, to_vec3(vp), to_vec3(vm), model, grid);
        });

  m.def("w_amplitude",
        [](const ChargeModel& model, const std::array<double, 3>& v_inf,
           const std::array<double, 3>& k) {
          const CoherentProfile p{to_vec3(v_inf), &model};
          const CVec3 w = w_amplitude(p, to_vec3(k));
          return py::make_tuple(w.x, w.y, w.z);
        });
  m.def("expected_fields",
        [](const ChargeModel& model, const std::array<double, 3>& v_inf,
           const std::array<double, 3>& k, double t) {
          const CoherentProfile p{to_vec3(v_inf), &model};
          const auto [e, b] = expected_fields(p, to_vec3(k), t);
          return py::make_tuple(
              py::make_tuple(e.x, e.y, e.z), py::make_tuple(b.x, b.y, b.z));
        });
  m.def("ir_match_check",
        [](const ChargeModel& model, const std::array<double, 3>& v_inf,
           const std::vector<std::array<double, 3>>& dirs, double t) {
          const CoherentProfile p{to_vec3(v_inf), &model};
          std::vector<Vec3> d;
          d.reserve(dirs.size());
          for (const auto& x : dirs) d.push_back(to_vec3(x));
          const IRMatchReport rep = ir_match_check(p, d, t);
          return py::make_tuple(rep.max_residual, rep.residual_e, rep.residual_b);
        });

  py::class_<Scenario>(m, "Scenario")
      .def_static("parse", &Scenario::parse)
      .def_static("load", &Scenario::load)
      .def("serialize", &Scenario::serialize);

  m.def("run_scenario",
        [](const Scenario& sc, const std::string& out_dir) {
          return run_scenario(sc, out_dir).to_json();
        },
        py::arg("scenario"), py::arg("out_dir"));

  m.attr("__version__") = kCodeVersion;
}
