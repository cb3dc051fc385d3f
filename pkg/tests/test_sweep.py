import importlib
import json

import numpy as np
import pytest

from lclimit.errors import SolverError
from lclimit.fields import Grid, Params
from lclimit.sweep import METRICS, SCHEMA_VERSION, SweepConfig, fit_slope, sweep
from lclimit.trajectory import SchemeConfig


def _cfg(**kw):
    base = dict(params=Params(mu=0.5, lam=0.5, zeta=0.5), grid=Grid((2 * np.pi,) * 2, (24, 24)),
                scheme=SchemeConfig(dt=5e-3, t_end=0.1, output_every=5),
                eps_list=(0.1, 0.05, 0.025), seed=1)
    base.update(kw)
    return SweepConfig(**base)


@pytest.fixture(scope="module")
def small_report():
    return sweep(_cfg())


def test_fit_slope_exact_power_law():
    x = np.array([0.1, 0.05, 0.025, 0.0125])
    f = fit_slope(x, 3 * x ** 1.5)
    assert f.slope == pytest.approx(1.5) and f.residual < 1e-12 and f.half_width < 1e-10
    noisy = fit_slope(x, 3 * x ** 1.5 * np.array([1.1, 0.9, 1.05, 1.0]))
    assert noisy.half_width > 0


def test_config_validation():
    with pytest.raises(ValueError):
        _cfg(eps_list=(0.1, 0.05))
    with pytest.raises(ValueError):
        _cfg(eps_list=(0.1, 0.05, 0.01))


def test_report_contents(small_report):
    r = small_report
    assert set(r.metrics) == set(METRICS)
    assert not r.failures and r.converged_eps == [0.1, 0.05, 0.025]
    assert np.all(r.metric("max_d") <= 1 + 1e-8)
    assert np.all(r.metric("energy_excess") <= 1e-6)
    assert np.all(np.isfinite(r.metric("Qu_L2L2")))
    assert r.slopes["sup_L2_rho_dev"]["slope"] == pytest.approx(1.0, abs=0.05)
    d = json.loads(r.to_json())
    assert d["schema_version"] == SCHEMA_VERSION
    assert d["reference"]["max_div_u"] < 1e-10


def test_sweep_is_deterministic(small_report):
    assert sweep(_cfg()).to_json() == small_report.to_json()


def test_worker_pool_gives_identical_bytes(small_report):
    assert sweep(_cfg(workers=2)).to_json() == small_report.to_json()


def test_failed_run_gives_partial_report(monkeypatch):
    sw = importlib.import_module("lclimit.sweep")
    real = sw._run_one

    def flaky(cfg, eps):
        if eps < 0.03:
            raise SolverError("density reached vacuum", 0.05)
        return real(cfg, eps)
    monkeypatch.setattr(sw, "_run_one", flaky)
    r = sw.sweep(_cfg(eps_list=(0.1, 0.05, 0.025)))
    assert list(r.failures) == ["0.025"] and "t = 0.05" in r.failures["0.025"]
    assert r.metrics["sup_L2_rho_dev"][2] is None
    assert r.slopes["sup_L2_rho_dev"]["n"] == 2
