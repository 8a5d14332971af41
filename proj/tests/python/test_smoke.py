# test_smoke.py — Smoke tests of the Python module

import numpy as np
import pytest

import xymark


def test_vacuum_sector_run():
    spec = xymark.SystemSpec.with_detuning(N=200, J=1.0, h=0.0, Omega=0.4, Delta_h=0.0, m0=100)
    tr = xymark.evolve_vacuum(spec, xymark.TimeGrid.from_final(20.0, 0.05))
    assert tr.engine == "sector"
    assert len(tr) == 401
    assert np.allclose(np.abs(tr.b) ** 2, tr.a)
    assert xymark.non_markovianity(tr)["N_degree"] <= 1e-3


def test_engines_agree_for_edge_coupling():
    spec = xymark.SystemSpec.with_detuning(6, 1.0, 0.0, 0.4, 1.0, 1)
    grid = xymark.TimeGrid.from_final(5.0, 0.05)
    env = xymark.ThermalEnv(1.0)
    g = xymark.channel_m01(spec, env, grid)
    d = xymark.tomography(spec, env, grid)
    assert np.max(np.abs(g.a - d.a)) < 1e-8
    assert np.max(np.abs(g.b - d.b)) < 1e-8


def test_trajectory_overrides_and_errors():
    out = xymark.trajectory({"N": "60", "Omega": "0", "t_fin": "5"})
    assert out["N_degree"] == 0.0
    assert out["N_BLP"] == 0.0
    assert np.all(out["rates"]["gamma3"] == 0.0)
    assert xymark.resolve_engine({"m0": "1"}) == "gaussian"
    with pytest.raises(xymark.CapabilityError):
        xymark.resolve_engine({"env": "thermal", "N": "20"})
    with pytest.raises(xymark.ConfigError):
        xymark.trajectory({"nope": "1"})


def test_correlations_and_bound_states():
    spec = xymark.SystemSpec(8, 1.0, 0.0, 0.4, 0.0, 4)
    grid = xymark.TimeGrid.from_final(3.0, 0.1)
    g = xymark.correlation_gaussian(spec, 1.0, grid)
    d = xymark.dense_correlations(spec, xymark.ThermalEnv(1.0), grid)
    assert np.max(np.abs(g["plus"] - d["plus"])) < 1e-8
    energies = xymark.bound_states(xymark.SystemSpec.with_detuning(401, 1.0, 0.0, 0.4, 0.0, 201))
    assert len(energies) == 2 and abs(energies[0] + energies[1]) < 1e-6


def test_acceptance_check_from_python():
    r = xymark.run_check(10)
    assert r["pass"], r["detail"]
