import json
import math
import os
import pathlib

import numpy as np
import pytest

import nlvpy


trapezoid = getattr(np, "trapezoid", None) or np.trapz

CONFIGS = pathlib.Path(os.environ.get("NLV_CONFIG_DIR", pathlib.Path(__file__).parents[2] / "configs"))


def test_constant_growth_eigenpair():
    x = np.linspace(0.0, 1.0, 101)
    s = nlvpy.eigenpair_arrays(0.0, 1.0, 0.01, np.full_like(x, 0.5))
    assert s["H"] == pytest.approx(0.5, abs=1e-12)
    assert trapezoid(s["A1"], x) == pytest.approx(1.0, abs=1e-12)
    # second Neumann mode of the discrete Laplacian, shifted by the growth rate
    h = x[1] - x[0]
    expected = 0.5 - 4 * 0.01 / h**2 * math.sin(math.pi * h / 2) ** 2
    assert s["lambda2"] == pytest.approx(expected, rel=1e-8)


def test_config_round_trip_and_errors():
    cfg = nlvpy.Config.load(CONFIGS / "species1.cfg")
    cfg.set("grid.n", "101")
    assert cfg.get("grid.n") == "101"
    assert len(cfg.nodes()) == 101
    assert set(cfg.echo()) == set(nlvpy.Config.keys())
    with pytest.raises(nlvpy.ConfigError, match="grid.n"):
        cfg.set("grid.nn", "5")
    with pytest.raises(ValueError):
        nlvpy.Config.load(CONFIGS / "does_not_exist.cfg")


def test_steady_state_mass_matches_spectrum():
    cfg = nlvpy.figure1_config(1.0)
    cfg.set("grid.n", "101")
    s = nlvpy.eigenpair(cfg, 1)
    g = nlvpy.steady_state(cfg, 1)
    assert g.min() > 0
    assert trapezoid(g, cfg.nodes()) > 0
    assert s["H"] > 0


def test_classifier_and_mass_ode():
    mu = [[1.0, 0.5], [0.5, 1.0]]
    assert nlvpy.classify(1.0, 1.0, mu)["regime"] == "Coexistence"
    assert nlvpy.classify(1.0, 1.0, [[1.0, 2.0], [2.0, 1.0]])["regime"] == "Bistable"
    traj = nlvpy.mass_ode(1.0, 1.0, mu, [0.1, 0.2], 200.0)
    assert traj["rho1"][-1] == pytest.approx(2.0 / 3.0, rel=1e-6)
    assert traj["rho2"][-1] == pytest.approx(2.0 / 3.0, rel=1e-6)
    with pytest.raises(nlvpy.NumericalError):
        nlvpy.mass_ode(5.0, 0.1, [[1e-9, 0.0], [0.0, 1.0]], [1.0, 1.0], 100.0)


def test_two_bump_sweep_and_summary():
    cfg = nlvpy.Config.load(CONFIGS / "figure1.cfg")
    cfg.set("grid.n", "101")
    cfg.set("sweep.values", "0.4,1.0,1.8")
    rows = nlvpy.sweep(cfg, 2)
    assert [r.regime for r in rows] == ["Fixation1", "Coexistence", "Fixation2"]
    assert all(r.ok and r.agreement for r in rows)
    assert rows[1].g1 is not None and rows[1].g2 is not None
    doc = json.loads(nlvpy.summary_json(cfg, rows, False))
    assert [run["regime"] for run in doc["runs"]] == ["Fixation1", "Coexistence", "Fixation2"]


def test_field_csv_round_trip():
    rng = np.random.default_rng(5)
    g1, g2 = rng.random(33), rng.random(33) ** 9
    table = nlvpy.parse_field_csv(nlvpy.field_csv(0.0, 1.0, g1, g2))
    assert np.array_equal(table["g1"], g1)
    assert np.array_equal(table["g2"], g2)
    with pytest.raises(ValueError):
        nlvpy.field_csv(0.0, 1.0, np.ones((2, 2)))
