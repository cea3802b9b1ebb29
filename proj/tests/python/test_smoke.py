import numpy as np
import pytest

import diracsea


def test_free_evolution_is_unitary_and_creates_no_pairs():
    lat = diracsea.Lattice(N=32, nsteps=100)
    u = diracsea.evolve(lat)
    assert u.shape == (64, 64)
    assert np.allclose(u.conj().T @ u, np.eye(64), atol=1e-10)
    minus, plus = diracsea.free_projectors(lat)
    assert diracsea.pair_number(u, minus, plus) < 1e-20


def test_weak_pulse_scales_with_e_squared():
    pulse = diracsea.GaussianPulse(1.0, sigma_t=0.5, sigma_x=1.0)
    values = []
    for e in (0.025, 0.05):
        lat = diracsea.Lattice(N=32, e=e, nsteps=100)
        minus, plus = diracsea.free_projectors(lat)
        values.append(diracsea.pair_number(diracsea.evolve(lat, a0=[pulse]), minus, plus))
    assert values[1] / values[0] == pytest.approx(4.0, rel=0.02)


def test_invalid_lattice_raises():
    with pytest.raises(ValueError):
        diracsea.Lattice(N=100)


def test_run_writes_outputs(tmp_path):
    cfg = {
        "schema": 1,
        "experiment": "evolve",
        "lattice": {"N": 32, "L": 20.0, "m": 1.0, "e": 0.05, "t0": -4.0, "t1": 4.0, "nsteps": 100},
    }
    summary, outputs = diracsea.run(cfg, out_dir=str(tmp_path))
    assert summary["pair_number"] < 1e-20
    assert (tmp_path / "evolve.csv").exists()
    assert (tmp_path / "manifest.json").exists()
    assert len(outputs) == 3
