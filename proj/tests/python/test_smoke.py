import json

import numpy as np
import pytest

import lhkit


def test_lp_pieces_reconstruct():
    f = lhkit.random_bandlimited(3, 64)
    total = sum(lhkit.P_k(f, k) for k in range(0, 5))
    assert np.linalg.norm(total - f) / np.linalg.norm(f) < 1e-12


def test_constant_field_isometry():
    spec = lhkit.FieldSpec.sinusoidal(0.0, [0.0], [0.0])
    ops = lhkit.FieldOperators(spec, 32)
    f = lhkit.random_bandlimited(5, 32, zero_mean_lines=True)
    assert lhkit.lp_norm(ops.H_v(f), 2.0) == pytest.approx(lhkit.lp_norm(f, 2.0), rel=1e-12)


def test_apply_operator_adjoint_pairing():
    spec = lhkit.FieldSpec.sinusoidal(0.05, [0.0, 0.5], [0.25, -0.375])
    f = lhkit.random_bandlimited(1, 32)
    g = lhkit.random_bandlimited(2, 32)
    tf = lhkit.apply_operator("PtildeK:2", spec, f)
    tg = lhkit.apply_operator("PtildeK:2", spec, g, adjoint=True)
    assert abs(np.vdot(g, tf) - np.vdot(tg, f)) / f.size < 1e-12


def test_fit_decay():
    fit = lhkit.fit_decay([1, 2, 3, 4], [2.0 ** (-0.5 * l) for l in (1, 2, 3, 4)])
    assert fit.slope == pytest.approx(-0.5)


def test_beta_linear_is_zero():
    xs = np.linspace(0.0, 1.0, 257)
    assert lhkit.beta_j0(list(0.3 * xs), 0.0, 1.0, 0.25, 0.25, 2) < 1e-12


def test_run_experiment_outputs():
    csv, summary = lhkit.run_experiment(json.dumps({"experiment": "square", "n": 32, "trials": 3, "seed": 1}))
    lines = csv.strip().splitlines()
    assert lines[0] == "experiment,seed,n,p,l,in_norm,out_norm,ratio"
    assert len(lines) == 4
    assert json.loads(summary)["experiment"] == "square"


def test_config_errors_raise():
    with pytest.raises(lhkit.ConfigError):
        lhkit.run_experiment(json.dumps({"experiment": "square", "n": 48}))
    with pytest.raises(lhkit.ConfigError):
        lhkit.FieldOperators(lhkit.FieldSpec.sinusoidal(0.05, [0.0], [0.0]), 12)
