import numpy as np
import pytest
from hypothesis import given, strategies as st

from lclimit.acoustics import (AcousticVec, apply_A, direct_solve, duhamel_solve, semigroup_L)
from lclimit.fields import Grid

G1 = Grid((2 * np.pi,), (32,))
G2 = Grid((2 * np.pi, 2 * np.pi), (32, 32))


def _random(g, seed, kmax=4):
    rng = np.random.default_rng(seed)
    X = g.coords
    def smooth():
        f = np.zeros(g.shape)
        for _ in range(6):
            k = rng.integers(-kmax, kmax + 1, g.dim)
            f += rng.standard_normal() * np.cos(sum(kk * x for kk, x in zip(k, X)) + rng.uniform(0, 6))
        return f
    return AcousticVec.from_arrays(g, smooth(), np.stack([smooth() for _ in range(g.dim)]))


def test_apply_A_examples():
    X, _ = G2.coords
    z = np.zeros((2,) + G2.shape)
    out = apply_A(AcousticVec.from_arrays(G2, np.full(G2.shape, 2.0), z), 1.0)
    assert np.max(np.abs(out.pack())) < 1e-14
    out = apply_A(AcousticVec.from_arrays(G2, np.cos(X), z), 2.0)
    assert np.max(np.abs(out.m.values[0] + 2 * np.sin(X))) < 1e-12
    assert np.max(np.abs(out.phi.values)) < 1e-12


def test_mode_symbol_eigenvalues():
    # per-mode symbol of A on exp(i k x): [[0, i k], [i B k, 0]]
    B, k = 2.5, 3.0
    M = np.array([[0, 1j * k], [1j * B * k, 0]])
    ev = np.sort_complex(np.linalg.eigvals(M))
    assert np.allclose(ev, [-1j * np.sqrt(B) * k, 1j * np.sqrt(B) * k])
    g = Grid((2 * np.pi,), (32,))
    X = g.coords[0]
    v = AcousticVec.from_arrays(g, np.cos(3 * X), np.stack([np.sqrt(B) * np.sin(3 * X)]))
    Av = apply_A(v, B)
    # (phi, m) = (cos, sqrt(B) sin) is an eigenvector of A^2 with eigenvalue -B k^2
    AAv = apply_A(Av, B)
    assert np.allclose(AAv.pack(), -B * k ** 2 * v.pack(), atol=1e-10)


def test_semigroup_single_mode_and_identity():
    X = G1.coords[0]
    v0 = AcousticVec.from_arrays(G1, np.cos(X), np.zeros((1, 32)))
    assert semigroup_L(0.0, v0, 1.0).max_abs_diff(v0) < 1e-15
    for t in (0.3, 2.0, 17.0):
        v = semigroup_L(t, v0, 1.0)
        assert np.max(np.abs(v.phi.values - np.cos(t) * np.cos(X))) < 1e-12
        assert np.max(np.abs(v.m.values[0] - np.sin(t) * np.sin(X))) < 1e-12


@given(st.integers(0, 1000), st.floats(0.1, 4.0))
def test_weighted_energy_and_group_law(seed, B):
    v0 = _random(G2, seed)
    e0 = v0.weighted_energy(B)
    for t in (1.0, 37.0, 100.0):
        assert abs(semigroup_L(t, v0, B).weighted_energy(B) - e0) <= 1e-12 * e0
    lhs = semigroup_L(1.3, semigroup_L(2.1, v0, B), B)
    assert lhs.max_abs_diff(semigroup_L(3.4, v0, B)) < 1e-12 * np.max(np.abs(v0.pack())) * 10
    back = semigroup_L(-2.1, semigroup_L(2.1, v0, B), B)
    assert back.max_abs_diff(v0) < 1e-12 * 10


def test_semigroup_rejects_bounded_grid():
    g = Grid((1.0, 1.0), (9, 9), boundary="dirichlet-rectangle")
    with pytest.raises(ValueError):
        semigroup_L(1.0, AcousticVec.zeros(g), 1.0)
    with pytest.raises(ValueError):
        apply_A(AcousticVec.zeros(G1), -1.0)


def test_duhamel_without_forcing_is_the_flow():
    v0 = _random(G2, 3)
    assert duhamel_solve(v0, None, 0.7, 0.1, 1.0).max_abs_diff(semigroup_L(7.0, v0, 1.0)) < 1e-13


def test_duhamel_constant_forcing_closed_form():
    X = G1.coords[0]
    B, eps, c, t = 2.0, 0.05, 0.8, 0.37
    G = AcousticVec.from_arrays(G1, np.zeros(32), np.stack([c * np.sin(X)]))
    v = duhamel_solve(AcousticVec.zeros(G1), lambda s: G, t, eps, B)
    w = np.sqrt(B) / eps
    a = -(c * eps / B) * (1 - np.cos(w * t))
    b = c * eps / np.sqrt(B) * np.sin(w * t)
    assert np.max(np.abs(v.phi.values - a * np.cos(X))) < 1e-8
    assert np.max(np.abs(v.m.values[0] - b * np.sin(X))) < 1e-8


def test_duhamel_matches_direct_integrator():
    v0 = _random(Grid((2 * np.pi, 2 * np.pi), (16, 16)), 5, kmax=3)
    g = v0.grid
    X, Y = g.coords
    def forcing(s):
        return AcousticVec.from_arrays(g, 0 * X, np.stack([np.sin(3 * s) * np.cos(X + Y),
                                                          np.cos(s) * np.sin(2 * Y)]))
    a = duhamel_solve(v0, forcing, 1.0, 0.1, 1.5)
    b = direct_solve(v0, forcing, 1.0, 0.1, 1.5)
    assert a.max_abs_diff(b) <= 1e-6


def test_sampled_forcing_is_interpolated():
    X = G1.coords[0]
    times = np.linspace(0, 1, 11)
    samples = [AcousticVec.from_arrays(G1, 0 * X, np.stack([s * np.sin(X)])) for s in times]
    a = duhamel_solve(AcousticVec.zeros(G1), (times, samples), 1.0, 0.5, 1.0)
    b = duhamel_solve(AcousticVec.zeros(G1),
                      lambda s: AcousticVec.from_arrays(G1, 0 * X, np.stack([s * np.sin(X)])),
                      1.0, 0.5, 1.0)
    assert a.max_abs_diff(b) < 1e-12


def test_vec_arithmetic():
    v = _random(G1, 1)
    assert (v + v - 2 * v).weighted_energy(1.0) < 1e-28
    with pytest.raises(ValueError):
        AcousticVec(v.phi, AcousticVec.zeros(Grid((1.0,), (32,))).m)
