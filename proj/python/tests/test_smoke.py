import json
import math

import numpy as np
import pytest

import graphon_games as gg


def test_beach_constant():
    r = gg.solve_nash("beach", "constant:0.5", M=64)
    assert r["converged"]
    assert np.allclose(r["alpha"], 0.4, atol=1e-10)
    assert r["certificate"]["uniquenessOk"]
    assert len(r["x"]) == 64


def test_spectrum_and_resolvent():
    lam = gg.eigenvalues("minmax", M=512, k=3)
    assert np.allclose(lam, [1 / (math.pi * k) ** 2 for k in (1, 2, 3)], rtol=1e-4)
    assert gg.operator_norm("constant:0.7", M=32) == pytest.approx(0.7)
    assert np.allclose(gg.resolvent("constant:1", 0.5, M=16), 2.0)


def test_poa():
    r = gg.price_of_anarchy("cities:k=1,theta=0.25", "constant:1", M=32)
    assert r["poa"] == pytest.approx(gg.poa_closed_form("constant", 0.25, 1.0), rel=1e-9)
    with pytest.raises(gg.ConditionViolation):
        gg.poa_closed_form("constant", 0.6, 1.0)


def test_finite_game():
    W, latent = gg.sample_graph("constant:0.5", 30, kind="bernoulli", seed=3)
    assert W.shape == (30, 30) and np.all(np.diag(W) == 0)
    assert np.all(np.diff(latent) >= 0)
    a = gg.finite_nash(W)
    b = gg.finite_nash(W, method="best-response")
    assert np.max(np.abs(a - b)) < 1e-9
    eps, se = gg.epsilon_nash(W, a)
    assert eps < 1e-12 and se == 0


def test_errors_and_run(tmp_path):
    with pytest.raises(gg.ConfigError):
        gg.solve_nash("beach", "nosuch")
    text = gg.run({"command": "solve", "graphon": "minmax", "gridM": 32, "outDir": str(tmp_path)})
    assert "certified" in text
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["outputs"] == ["profile.csv", "aggregate.csv"]
    assert gg.game_spec("beach")["name"] == "beach"
