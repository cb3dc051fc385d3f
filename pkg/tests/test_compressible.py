import numpy as np
import pytest

from lclimit.compressible import advance, run, step, well_prepared_initial
from lclimit.errors import ConfigError, SolverError
from lclimit.fields import Grid, Params, State
from lclimit.trajectory import SchemeConfig

P = Params(mu=0.5, lam=0.5, zeta=0.5, eps=0.1)


def _damped_mode(dt):
    """1D linear acoustic mode against the closed-form damped oscillator."""
    g = Grid((2 * np.pi,), (32,))
    eps, delta = 0.5, 1e-4
    p = Params(mu=0.3, xi=0.0, a=1.0, gamma=2.0, eps=eps)
    X = g.coords[0]
    s = State.from_arrays(g, 0.0, 1 + eps * delta * np.cos(X), np.zeros((1, 32)), np.ones((1, 32)))
    traj = run(s, p, SchemeConfig(dt=dt, t_end=2.0, imex_theta=0.5, output_every=10))
    om = np.sqrt(2.0 / eps ** 2 - p.mu ** 2 / 4)
    err = 0.0
    for st in traj.states:
        t = st.t
        amp = g.integrate((st.rho.values - 1) / eps * np.cos(X)) / np.pi
        exact = delta * np.exp(-p.mu * t / 2) * (np.cos(om * t) + p.mu / (2 * om) * np.sin(om * t))
        err = max(err, abs(amp - exact) / delta)
    return err


def test_linear_acoustic_mode_matches_damped_oscillator():
    e1, e2 = _damped_mode(0.01), _damped_mode(0.005)
    assert e1 < 5e-4
    assert 3.0 < e1 / e2 < 5.0          # second order in time


@pytest.mark.parametrize("grid", [Grid((2 * np.pi, 2 * np.pi), (32, 32)),
                                  Grid((np.pi, np.pi), (24, 24), boundary="dirichlet-rectangle"),
                                  Grid((2 * np.pi,), (32,))])
def test_mass_energy_and_director_bounds(grid):
    s = well_prepared_initial(grid, P, 3)
    traj = run(s, P, SchemeConfig(dt=5e-3, t_end=0.05))
    mass = traj.column("mass")
    assert np.max(np.abs(mass - mass[0])) < 1e-12 * mass[0]
    E = traj.column("E_eps") + traj.column("dissipation")
    assert np.all(E <= E[0] * (1 + 1e-6))
    assert np.max(traj.column("max|d|")) <= 1 + 1e-8
    assert len(traj.rows) == 11


def test_frozen_torus_row():
    g = Grid((2 * np.pi, 2 * np.pi), (32, 32))
    traj = run(well_prepared_initial(g, P, 3), P, SchemeConfig(dt=5e-3, t_end=0.05))
    expected = (0.05, 8.781161324610293, 0.8651068133497242, 39.47841760435743,
                0.9996534558310044, 0.132402150587142, 1.3162285838667578, 1.0539156699435541)
    assert np.allclose(traj.rows[-1], expected, rtol=1e-8, atol=1e-12)


def test_frozen_rectangle_row():
    g = Grid((np.pi, np.pi), (24, 24), boundary="dirichlet-rectangle")
    traj = run(well_prepared_initial(g, P, 3), P, SchemeConfig(dt=5e-3, t_end=0.05))
    expected = (0.05, 1.8730132579069052, 0.22878816334295285, 9.869604401089358, 1.0,
                0.035383153144141914, 0.8154582953318791, 0.2751962481794506)
    assert np.allclose(traj.rows[-1], expected, rtol=1e-8, atol=1e-12)


def test_rectangle_walls_hold_no_slip():
    g = Grid((np.pi, np.pi), (24, 24), boundary="dirichlet-rectangle")
    s = step(well_prepared_initial(g, P, 1), P, SchemeConfig(dt=5e-3, t_end=5e-3))
    assert np.all(s.u.values[:, g.boundary_mask] == 0)


def test_rest_state_is_steady():
    g = Grid((2 * np.pi, 2 * np.pi), (16, 16))
    d = np.zeros((2, 16, 16))
    d[1] = 1
    s = State.from_arrays(g, 0.0, np.ones((16, 16)), np.zeros_like(d), d)
    new, diss = advance(s, P, SchemeConfig(dt=0.01, t_end=0.01))
    assert np.allclose(new.rho.values, 1) and np.allclose(new.u.values, 0, atol=1e-14)
    assert diss == 0.0 and new.t == 0.01


def test_well_prepared_data():
    g = Grid((2 * np.pi, 2 * np.pi), (32, 32))
    s = well_prepared_initial(g, P, 0)
    phi = (s.rho.values - 1) / P.eps
    assert abs(g.mean(phi)) < 1e-12
    assert np.isclose(np.max(np.abs(phi)), 0.5)
    assert np.isclose(np.max(np.abs(s.u.values)), 0.5)
    assert np.allclose(np.sum(s.d.values ** 2, 0), 1)
    s2 = well_prepared_initial(g, P.with_eps(0.01), 0)
    assert np.array_equal(s.u.values, s2.u.values)      # only rho depends on eps


def test_advective_limit_is_a_config_error():
    g = Grid((2 * np.pi, 2 * np.pi), (32, 32))
    with pytest.raises(ConfigError):
        run(well_prepared_initial(g, P, 0), P, SchemeConfig(dt=1.0, t_end=1.0))


def test_scheme_config_validation():
    for kw in (dict(dt=0.0, t_end=1), dict(dt=0.1, t_end=-1), dict(dt=0.1, t_end=1, imex_theta=0.3),
               dict(dt=0.1, t_end=1, output_every=0), dict(dt=0.1, t_end=1, cfl_safety=2)):
        with pytest.raises(ConfigError):
            SchemeConfig(**kw)


def test_step_failure_is_reported_with_time(monkeypatch):
    g = Grid((2 * np.pi,), (16,))
    s = well_prepared_initial(g, P, 0)

    def bad(state, p, cfg, ops):
        raise FloatingPointError("overflow")
    with pytest.raises(SolverError) as info:
        run(s, P, SchemeConfig(dt=0.01, t_end=0.05), stepper=bad)
    assert info.value.t == pytest.approx(0.01)


def test_vacuum_is_rejected():
    g = Grid((2 * np.pi,), (32,))
    X = g.coords[0]
    p = Params(eps=1.0, a=1.0)
    s = State.from_arrays(g, 0.0, 1 + 0.999 * np.cos(X), np.stack([2.0 * np.sin(X)]),
                          np.ones((1, 32)))
    with pytest.raises(SolverError):
        run(s, p, SchemeConfig(dt=0.05, t_end=2.0, cfl_safety=1.0))


def test_snapshot_cadence(tmp_path):
    g = Grid((2 * np.pi,), (16,))
    traj = run(well_prepared_initial(g, P, 0), P, SchemeConfig(dt=0.01, t_end=0.07, output_every=3))
    assert np.allclose(traj.times, [0, 0.03, 0.06, 0.07])
    paths = traj.write_snapshots(tmp_path)
    assert len(paths) == 4
    traj.write_csv(tmp_path / "d.csv")
    assert (tmp_path / "d.csv").read_text().splitlines()[0].startswith("t,E_eps")
