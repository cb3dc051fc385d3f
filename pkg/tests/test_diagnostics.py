import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from lclimit.diagnostics import (convexity_gap, density_metrics, energy, energy_arrays,
                                 forward_gradient_sq, projected_convergence, qp_norms,
                                 sampled_nu, velocity_split)
from lclimit.fields import Grid, Params, State
from lclimit.helmholtz import PoissonContext

T2 = Grid((2 * np.pi, 2 * np.pi), (64, 64))


def _state(g, rho=None, u=None, d=None, t=0.0):
    shape = (g.dim,) + g.shape
    if d is None:
        d = np.zeros(shape)
        d[0] = 1
    return State.from_arrays(g, t, np.ones(g.shape) if rho is None else rho,
                             np.zeros(shape) if u is None else u, d)


def test_rest_state_has_zero_energy():
    e = energy(_state(T2), Params())
    assert (e.kinetic, e.elastic, e.potential, e.pressure_dev) == (0, 0, 0, 0)


def test_planar_twist_elastic_energy():
    g = Grid((2 * np.pi, 2 * np.pi), (256, 256))
    X, _ = g.coords
    p = Params(alpha=0.7)
    e = energy(_state(g, d=np.stack([np.cos(X), np.sin(X)])), p)
    assert e.elastic == pytest.approx(p.alpha / 2 * g.volume, rel=1e-4)
    assert e.potential == pytest.approx(0.0, abs=1e-12)


def test_pressure_deviation_oracle():
    X, _ = T2.coords
    for eps in (0.1, 0.01):
        p = Params(gamma=2.0, eps=eps)
        e = energy(_state(T2, rho=1 + eps * 0.1 * np.sin(X)), p)
        assert e.pressure_dev == pytest.approx(0.005 * T2.volume, rel=1e-8)


def test_pressure_deviation_taylor_limit_gamma3():
    X, _ = T2.coords
    p = Params(gamma=3.0, eps=1e-4)
    e = energy(_state(T2, rho=1 + p.eps * 0.1 * np.sin(X)), p)
    # gamma (gamma-1)/2 (rho-1)^2 / (eps^2 (gamma-1)) = 1.5 * 0.01 sin^2
    assert e.pressure_dev == pytest.approx(1.5 * 0.01 * T2.volume / 2, rel=1e-3)


def test_kinetic_energy():
    X, Y = T2.coords
    u = np.stack([np.sin(Y), 0 * X])
    e = energy(_state(T2, rho=2 * np.ones(T2.shape), u=u), Params(), dissipation_cum=0.3)
    assert e.kinetic == pytest.approx(0.5 * 2 * T2.volume / 2)
    assert e.total_with_dissipation == pytest.approx(e.total + 0.3)


def test_energy_rejects_vacuum():
    with pytest.raises(ValueError):
        energy_arrays(T2, np.zeros(T2.shape), np.zeros((2, 64, 64)), np.zeros((2, 64, 64)), Params())


def test_forward_gradient_on_rectangle_is_edge_sum():
    g = Grid((1.0,), (11,), boundary="dirichlet-rectangle")
    d = np.stack([g.coords[0] ** 2])
    edges = np.sum(np.diff(d[0]) ** 2) / g.spacing[0]
    assert g.integrate(forward_gradient_sq(g, d)) == pytest.approx(edges, rel=1e-12)


@pytest.mark.parametrize("x,gamma,value,ratio", [(2.0, 2.0, 1.0, 1.0), (0.0, 2.0, 1.0, 1.0),
                                                 (3.0, 3.0, 20.0, 2.5)])
def test_convexity_gap_points(x, gamma, value, ratio):
    v, r = convexity_gap(x, gamma)
    assert v == pytest.approx(value) and r == pytest.approx(ratio)


def test_convexity_gap_tangency_and_domain():
    v, r = convexity_gap(1.0, 2.0)
    assert v == 0 and np.isnan(r)
    with pytest.raises(ValueError):
        convexity_gap(-0.1, 2.0)
    # middle case of the three-regime bound divides by |x - 1|^2
    v, r = convexity_gap(1.2, 1.6)
    assert r == pytest.approx(v / 0.04)


@given(st.floats(1.51, 4.0))
def test_sampled_nu_is_positive(gamma):
    assert sampled_nu(gamma) > 0


@given(st.floats(0.0, 10.0), st.floats(1.51, 4.0))
def test_convexity_gap_nonnegative(x, gamma):
    v, _ = convexity_gap(x, gamma)
    assert v >= -1e-12


def test_density_metrics_examples():
    g = Grid((2 * np.pi,), (128,))
    X = g.coords[0]
    p = Params(eps=0.01)
    assert np.allclose(density_metrics(_state(g), p), 0.0, atol=1e-12)
    m = density_metrics(_state(g, rho=1 + p.eps * 0.2 * np.ones(g.shape)), p)
    assert m[1] == pytest.approx(0.0, abs=1e-12)
    m = density_metrics(_state(g, rho=1 + p.eps * np.sin(X)), p)
    assert m[1] == pytest.approx(np.sqrt(np.pi), rel=1e-12)
    assert m[0] == pytest.approx(p.eps * np.sqrt(np.pi), rel=1e-12)
    assert m[2] == 0.0


@given(st.integers(0, 10_000), st.floats(2.0, 3.5), st.floats(1e-3, 0.5))
def test_density_chain_from_energy(seed, gamma, eps):
    """||rho-1||_gamma^gamma <= (gamma-1) eps^2 pressure_dev / (a nu) for gamma >= 2."""
    g = Grid((1.0, 1.0), (16, 16))
    rho = np.random.default_rng(seed).uniform(0.05, 3.5, g.shape)
    p = Params(gamma=gamma, eps=eps, a=1.3)
    e = energy(_state(g, rho=rho), p)
    lhs = density_metrics(_state(g, rho=rho), p)[0] ** gamma
    nu = sampled_nu(gamma)
    assert lhs <= (gamma - 1) * eps ** 2 * e.pressure_dev / (p.a * nu) * (1 + 1e-9)


def test_velocity_split_examples():
    X, Y = T2.coords
    u = np.stack([np.sin(Y), np.cos(X)])
    u1, u2 = velocity_split(_state(T2, u=u))
    assert u2 == 0.0 and u1 == pytest.approx(T2.l2(u))
    rho = np.where(X < np.pi, 2.0, 1.0)
    u1, u2 = velocity_split(_state(T2, rho=rho, u=u))
    left = X < np.pi
    assert u2 == pytest.approx(np.sqrt(T2.integrate(np.where(left, np.sum(u ** 2, 0), 0))))
    assert u1 == pytest.approx(np.sqrt(T2.integrate(np.where(left, 0, np.sum(u ** 2, 0)))))


@given(st.integers(0, 10_000))
def test_velocity_split_pythagoras(seed):
    g = Grid((1.0, 1.0), (16, 16))
    rng = np.random.default_rng(seed)
    s = _state(g, rho=rng.uniform(0.1, 2.0, g.shape), u=rng.standard_normal((2, 16, 16)))
    u1, u2 = velocity_split(s)
    assert u1 ** 2 + u2 ** 2 == pytest.approx(g.l2(s.u.values) ** 2, rel=1e-12)


def test_projected_convergence_examples():
    g = Grid((2 * np.pi, 2 * np.pi), (32, 32))
    X, Y = g.coords
    ctx = PoissonContext(g)
    w = np.stack([-np.sin(Y), np.sin(X)])
    grad = ctx.grad_a(np.cos(X + Y))
    ref = [_state(g, u=w * np.exp(-t), t=t) for t in (0.0, 0.5, 1.0)]
    assert projected_convergence(ref, ref) == (0.0, 0.0, 0.0)
    traj = [_state(g, u=w * np.exp(-t) + grad, t=t) for t in (0.0, 0.5, 1.0)]
    pe, qn, ue = projected_convergence(traj, ref, ctx)
    assert pe < 1e-24
    assert qn == pytest.approx(g.l2(grad) ** 2 * 1.0)
    assert ue == pytest.approx(qn)
    with pytest.raises(ValueError):
        projected_convergence(traj[:2], ref)
    with pytest.raises(ValueError):
        projected_convergence(traj, [_state(g, t=t) for t in (0.0, 0.4, 1.0)])


def test_qp_norms_pythagoras():
    g = Grid((2 * np.pi, 2 * np.pi), (32, 32))
    ctx = PoissonContext(g)
    v = np.random.default_rng(0).standard_normal((2, 32, 32))
    q, pn = qp_norms(ctx, v)
    assert q ** 2 + pn ** 2 == pytest.approx(g.l2(v) ** 2, rel=1e-10)
