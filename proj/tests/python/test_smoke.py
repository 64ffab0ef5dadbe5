"""Python smoke tests for the compiled module: a light pass over the main
operations, asserting the same invariants the C++ suites check in depth."""

import json
import math

import numpy as np
import pytest

import abraham as ab

TWO_PI_POW_32_INV = (2.0 * math.pi) ** -1.5


@pytest.fixture(scope="module")
def grid():
    return ab.build_kgrid(16, 1e-3, 6.0, 6, 6)


@pytest.fixture(scope="module")
def model():
    return ab.ChargeModel(e=0.3, m=1.0, r_phi=1.0)


def test_grid_weights_and_antipodes(grid):
    assert abs(sum(grid.angular_weights) - 4.0 * math.pi) < 1e-12
    anti = grid.antipode_index
    for d, a in enumerate(anti):
        assert anti[a] == d and a != d


def test_phi_hat_normalization(model):
    assert abs(model.phi_hat(0.0) - TWO_PI_POW_32_INV) < 1e-10
    assert model.profile(1.5) == 0.0


def test_free_propagation_is_unitary(grid, model):
    field = ab.sample_soliton(model, (0, 0, 0.4), (0, 0, 0), grid)
    e0 = ab.functionals(field, grid).energy
    moved = ab.free_propagate(field, grid, 3.7)
    e1 = ab.functionals(moved, grid).energy
    assert abs(e1 - e0) < 1e-12 * e0
    # group property
    twice = ab.free_propagate(ab.free_propagate(field, grid, 1.1), grid, -1.1)
    assert np.abs(np.asarray(twice.e_hat) - np.asarray(field.e_hat)).max() < 1e-12


def test_soliton_gauss_law(model):
    k = (0.3, -0.7, 1.1)
    (e, _b) = ab.soliton_momentum(model, (0.2, 0.1, 0.5), k)
    div = 1j * sum(ki * ei for ki, ei in zip(k, e))
    rho = model.e * model.phi_hat(math.sqrt(sum(ki * ki for ki in k)))
    assert abs(div - rho) < 1e-13 * abs(rho)


def test_ir_limit_matches_extraction(grid, model):
    v = (0.0, 0.0, 0.5)
    field = ab.sample_soliton(model, v, (0, 0, 0), grid)
    tail = ab.ir_extract(field, grid)
    e_tail = np.asarray(tail.e_tail)
    for i, khat in enumerate(grid.directions):
        (e_cl, _b_cl) = ab.ir_limit_soliton(model, v, khat)
        assert np.abs(e_tail[i] - np.asarray(e_cl)).max() < 1e-6


def test_pulse_is_transverse_and_ir_regular(grid):
    pulse = ab.make_pulse(grid, k0=1.0, width=0.25, amplitude=0.5,
                          polarization=(1, 0, 0), direction=(0, 0, 1))
    e = np.asarray(pulse.e_hat)
    dirs = np.asarray(grid.directions)
    nd = len(grid.directions)
    for ir in range(3):  # smallest shells carry ~no amplitude
        block = e[ir * nd:(ir + 1) * nd]
        assert np.abs(block).max() < 1e-10
    # transversality on a sample of nodes
    for n in range(0, len(pulse), 37):
        khat = dirs[n % nd]
        assert abs(np.dot(khat, e[n])) < 1e-12


def test_short_simulation_conserves_energy(grid, model):
    state = ab.SystemState()
    state.fields = ab.sample_soliton(model, (0, 0, 0.3), (0, 0, 0), grid)
    state.particle = ab.ParticleState(q=(0, 0, 0), v=(0, 0, 0.3))
    res = ab.simulate(state, grid, model, t_final=1.0, dt=0.05,
                      sample_every=10)
    assert res.energy_drift < 1e-8
    assert abs(res.v_final[2] - 0.3) < 1e-8
    assert ab.gauss_defect(res.final_state.fields,
                           res.final_state.particle.q, grid, model) < 1e-12


def test_coherent_matching():
    model = ab.ChargeModel(e=1.0, m=1.0, r_phi=1.0)
    dirs = [(1, 0, 0), (0, 1, 0), (0.6, 0, 0.8)]
    max_residual, _res_e, _res_b = ab.ir_match_check(model, (0, 0, 0.5), dirs, 0.0)
    assert max_residual < 1e-10


def test_scenario_roundtrip_and_tiny_run(tmp_path):
    text = json.dumps({
        "schema_version": 1,
        "charge": {"e": 0.3, "m": 1.0, "r_phi": 1.0},
        "grid": {"n_radial": 12, "k_min": 1e-3, "k_max": 5.0,
                 "n_polar": 4, "n_azimuth": 4},
        "initial": {"v0": [0, 0, 0], "q0": [0, 0, 0],
                    "pulse": {"k0": 1.0, "width": 0.25, "amplitude": 0.6,
                              "polarization": [1, 0, 0],
                              "direction": [0, 0, 1], "delay": 0.5}},
        "run": {"t_final": 1.0, "dt": 0.05, "sample_every": 10,
                "trajectory_every": 1, "energy_drift_abort": 1e-2},
        "observables": {"k_ir": 6e-3, "extrapolation_order": 3},
        "seed": 7,
    })
    sc = ab.Scenario.parse(text)
    assert ab.Scenario.parse(sc.serialize()).serialize() == sc.serialize()

    report = json.loads(ab.run_scenario(sc, str(tmp_path / "run")))
    assert report["conservation"]["energy_drift"] < 1e-4
    assert (tmp_path / "run" / "report.json").exists()
    assert (tmp_path / "run" / "timings.json").exists()


def test_unknown_scenario_key_rejected():
    with pytest.raises(RuntimeError):
        ab.Scenario.parse('{"schema_version": 1, "mystery": 2}')
