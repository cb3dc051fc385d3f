"""Neumann eigenmodes of -lap on a rectangle or a disk and their viscous corrections.

Every quantity here is closed form: product cosines on the rectangle,
``J_n(lam r) cos(n t)`` / ``sin(n t)`` on the disk with ``lam R`` a zero of
``J_n'``.  Boundary integrals of ``|grad phi|^2`` are exact line integrals,
never grid quadrature, so the eigenvalue correction does not depend on any
PDE discretization.

Conventions for the correction::

    i lam1(+-) = -((1 +- i)/2) sqrt(mu / (2 lam0^3)) * int_dD |grad phi|^2

and the stretched boundary coordinate is called ``stretch``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from ..fields import Params  # noqa: F401  (re-exported type in signatures)

RECTANGLE = "rectangle"
DISK = "disk"


@dataclass(frozen=True)
class NeumannMode:
    """One normalized Neumann eigenfunction.

    ``index`` is ``(k, l)`` on the rectangle and ``(n, s, parity)`` on the
    disk (``parity`` 0 for cosine, 1 for sine, s counts zeros of ``J_n'``).
    """

    domain_kind: str
    size: tuple
    index: tuple
    lambda0: float
    coef: float = field(repr=False)

    def phi0(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        if self.domain_kind == RECTANGLE:
            (Lx, Ly), (k, l) = self.size, self.index
            return self.coef * np.cos(k * np.pi * x / Lx) * np.cos(l * np.pi * y / Ly)
        n, _, par = self.index
        r, th = np.hypot(x, y), np.arctan2(y, x)
        ang = np.cos(n * th) if par == 0 else np.sin(n * th)
        return self.coef * special.jv(n, self.lambda0 * r) * ang

    def grad_phi0(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        if self.domain_kind == RECTANGLE:
            (Lx, Ly), (k, l) = self.size, self.index
            a, b = k * np.pi / Lx, l * np.pi / Ly
            gx = -self.coef * a * np.sin(a * x) * np.cos(b * y)
            gy = -self.coef * b * np.cos(a * x) * np.sin(b * y)
            return np.stack([gx, gy])
        n, _, par = self.index
        r, th = np.hypot(x, y), np.arctan2(y, x)
        lam = self.lambda0
        ang = np.cos(n * th) if par == 0 else np.sin(n * th)
        dang = -n * np.sin(n * th) if par == 0 else n * np.cos(n * th)
        fr = self.coef * lam * special.jvp(n, lam * r) * ang
        with np.errstate(invalid="ignore", divide="ignore"):
            jr = np.where(r > 0, special.jv(n, lam * r) / np.where(r > 0, r, 1.0),
                          0.5 * lam if n == 1 else 0.0)
        ft = self.coef * jr * dang
        c, s = np.cos(th), np.sin(th)
        return np.stack([fr * c - ft * s, fr * s + ft * c])

    def boundary_integral(self) -> float:
        """Exact ``int_dD |grad phi0|^2`` (only tangential derivatives survive)."""
        if self.domain_kind == RECTANGLE:
            (Lx, Ly), (k, l) = self.size, self.index
            c2 = self.coef ** 2
            # sides x = 0, Lx carry |d_y phi|^2, sides y = 0, Ly carry |d_x phi|^2
            sx = c2 * (l * np.pi / Ly) ** 2 * Ly if l > 0 else 0.0
            sy = c2 * (k * np.pi / Lx) ** 2 * Lx if k > 0 else 0.0
            return float(sx + sy)
        (R,) = self.size
        n = self.index[0]
        if n == 0:
            return 0.0
        return float(self.coef ** 2 * special.jv(n, self.lambda0 * R) ** 2 * n ** 2 * np.pi / R)

    def distance_to_boundary(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        if self.domain_kind == RECTANGLE:
            Lx, Ly = self.size
            return np.minimum(np.minimum(x, Lx - x), np.minimum(y, Ly - y))
        return self.size[0] - np.hypot(x, y)

    def nearest_boundary_point(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        if self.domain_kind == RECTANGLE:
            Lx, Ly = self.size
            dists = np.stack([x, Lx - x, y, Ly - y])
            j = np.argmin(dists, axis=0)
            bx = np.choose(j, [np.zeros_like(x), np.full_like(x, Lx), x, x])
            by = np.choose(j, [y, y, np.zeros_like(y), np.full_like(y, Ly)])
            return bx, by
        R = self.size[0]
        r = np.hypot(x, y)
        th = np.arctan2(y, x)
        return R * np.cos(th), R * np.sin(th)


def _rectangle_modes(Lx: float, Ly: float, count: int):
    kmax = int(np.ceil(np.sqrt(count))) + 3
    out = []
    for k in range(kmax + 1):
        for l in range(kmax + 1):
            if k == 0 and l == 0:
                continue
            lam = np.hypot(k * np.pi / Lx, l * np.pi / Ly)
            coef = np.sqrt((1 if k == 0 else 2) * (1 if l == 0 else 2) / (Lx * Ly))
            out.append(NeumannMode(RECTANGLE, (Lx, Ly), (k, l), float(lam), float(coef)))
    out.sort(key=lambda m: (round(m.lambda0, 12), m.index))
    return out[:count]


def _disk_modes(R: float, count: int):
    nmax = count + 2
    smax = count + 2
    out = []
    for n in range(nmax):
        zeros = special.jnp_zeros(n, smax)
        if n == 0:
            zeros = zeros[zeros > 1e-8]
        for s, z in enumerate(zeros, start=1):
            lam = z / R
            radial = (R ** 2 / 2) * (1 - (n / z) ** 2) * special.jv(n, z) ** 2
            ang = 2 * np.pi if n == 0 else np.pi
            coef = 1.0 / np.sqrt(radial * ang)
            for par in ((0,) if n == 0 else (0, 1)):
                out.append(NeumannMode(DISK, (R,), (n, s, par), float(lam), float(coef)))
    out.sort(key=lambda m: (round(m.lambda0, 12), m.index))
    return out[:count]


def neumann_modes(domain_kind: str, count: int, size=None) -> list:
    """First ``count`` nonconstant normalized Neumann modes, sorted by ``lambda0``.

    ``size`` is ``(Lx, Ly)`` for a rectangle (default ``(pi, pi)``) and
    ``(R,)`` or ``R`` for a disk (default unit disk).  Equal-frequency
    partners (product modes with swapped indices, cosine/sine pairs on the
    disk) are already orthogonal for the boundary form
    ``int_dD grad phi_k . grad phi_l``; :func:`boundary_gram` checks it.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if domain_kind == RECTANGLE:
        Lx, Ly = size if size is not None else (np.pi, np.pi)
        return _rectangle_modes(float(Lx), float(Ly), count)
    if domain_kind == DISK:
        R = float(np.atleast_1d(size)[0]) if size is not None else 1.0
        return _disk_modes(R, count)
    raise ValueError(f"unsupported domain kind {domain_kind!r}")


def boundary_gram(modes, samples: int = 4096) -> np.ndarray:
    """``int_dD grad phi_k . grad phi_l`` by a fine boundary quadrature (cross-check only)."""
    m0 = modes[0]
    if m0.domain_kind == RECTANGLE:
        Lx, Ly = m0.size
        t = (np.arange(samples) + 0.5) / samples
        pts, wts = [], []
        for (x, y, L) in [(t * Lx, 0 * t, Lx), (t * Lx, 0 * t + Ly, Lx),
                          (0 * t, t * Ly, Ly), (0 * t + Lx, t * Ly, Ly)]:
            pts.append((x, y))
            wts.append(np.full(samples, L / samples))
        X = np.concatenate([p[0] for p in pts])
        Y = np.concatenate([p[1] for p in pts])
        W = np.concatenate(wts)
    else:
        R = m0.size[0]
        th = 2 * np.pi * np.arange(samples) / samples
        X, Y, W = R * np.cos(th), R * np.sin(th), np.full(samples, 2 * np.pi * R / samples)
    grads = [m.grad_phi0(X, Y) for m in modes]
    n = len(modes)
    G = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            G[i, j] = np.sum(W * np.sum(grads[i] * grads[j], axis=0))
    return G


# -- viscous correction ----------------------------------------------------------------

@dataclass(frozen=True)
class ModeExpansion:
    mode: NeumannMode
    mu: float
    lambda1_plus: complex
    lambda1_minus: complex
    boundary_integral: float
    h_condition_active: bool

    @property
    def i_lambda1_plus(self) -> complex:
        return 1j * self.lambda1_plus

    @property
    def i_lambda1_minus(self) -> complex:
        return 1j * self.lambda1_minus

    def i_lambda_eps(self, eps: float, sign: int = +1) -> complex:
        """``i lam_{k,eps,2} = +-i lam0 + sqrt(eps) i lam1 + 0 * eps``."""
        il1 = self.i_lambda1_plus if sign > 0 else self.i_lambda1_minus
        return sign * 1j * self.mode.lambda0 + np.sqrt(eps) * il1


def mode_expansion(mode: NeumannMode, p) -> ModeExpansion:
    """First viscous correction of the acoustic eigenvalue for ``mode``."""
    mu = p.mu if hasattr(p, "mu") else float(p)
    bi = mode.boundary_integral()
    base = np.sqrt(mu / (2 * mode.lambda0 ** 3)) * bi
    il_plus = -0.5 * (1 + 1j) * base
    il_minus = -0.5 * (1 - 1j) * base
    return ModeExpansion(mode, mu, complex(il_plus / 1j), complex(il_minus / 1j),
                         float(bi), bool(bi > 0))


def boundary_layer_profile(mode: NeumannMode, p, eps: float, x, y, sign: int = +1):
    """Boundary-layer momentum ``m^b`` at points ``(x, y)``; shape ``(2, ...)`` complex.

    ``m^b = -m^int(trace) exp(-stretch (1 +- i) sqrt(lam0/(2 mu)))`` with
    ``stretch = L(x)/sqrt(eps)``, ``L`` the exact distance to the wall and
    ``m^int = +- grad phi0 / (i lam0)`` the inviscid eigen-momentum.
    """
    mu = p.mu if hasattr(p, "mu") else float(p)
    bx, by = mode.nearest_boundary_point(x, y)
    trace = sign * mode.grad_phi0(bx, by) / (1j * mode.lambda0)
    stretch = mode.distance_to_boundary(x, y) / np.sqrt(eps)
    return -trace * layer_factor(stretch, mode.lambda0, mu, sign)


def layer_factor(stretch, lambda0: float, mu: float, sign: int = +1):
    """``exp(-stretch (1 +- i) sqrt(lambda0/(2 mu)))``."""
    kappa = np.sqrt(lambda0 / (2 * mu))
    return np.exp(-np.asarray(stretch, float) * (1 + sign * 1j) * kappa)


def layer_ode_residual(lambda0: float, mu: float, sign: int = +1,
                       stretch=None, h: float = 1e-4) -> float:
    """Max of ``|mu f'' - (+-i lam0) f|`` with ``f''`` from central differences."""
    if stretch is None:
        stretch = np.linspace(0.0, 5.0, 51)
    s = np.asarray(stretch, float) + 2 * h
    f = lambda z: layer_factor(z, lambda0, mu, sign)
    d2 = (f(s + h) - 2 * f(s) + f(s - h)) / h ** 2
    return float(np.max(np.abs(mu * d2 - sign * 1j * lambda0 * f(s))))


# -- mode amplitude ODE --------------------------------------------------------------

def _phi1(x):
    x = np.asarray(x, complex)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    return np.where(small, 1 + x / 2 + x * x / 6, np.expm1(xs) / xs)


def _phi2(x):
    x = np.asarray(x, complex)
    small = np.abs(x) < 1e-3
    xs = np.where(small, 1.0, x)
    return np.where(small, 0.5 + x / 6 + x * x / 24, (np.expm1(xs) - xs) / xs ** 2)


def mode_amplitude_solve(b0: complex, i_lambda: complex, eps: float, c, T: float | None = None,
                         times=None) -> tuple:
    """Solve ``b' - (z/eps) b = c(t)``, ``z = conj(i_lambda)``, ``b(0) = b0``.

    ``c`` is a callable or an array sampled at ``times`` (piecewise linear
    between samples, integrated exactly).  With a callable, ``times``
    defaults to 2001 points on ``[0, T]``.  Returns ``(times, b)``.
    """
    z = np.conj(complex(i_lambda))
    if z.real > 1e-14:
        raise ValueError("Re(conj(i lambda)) > 0 would be a growing mode; rejected")
    if times is None:
        if T is None:
            raise ValueError("give T or times")
        times = np.linspace(0.0, T, 2001)
    times = np.asarray(times, float)
    cv = np.asarray(c(times) if callable(c) else c, complex) * np.ones(len(times))
    w = z / eps
    b = np.empty(len(times), complex)
    b[0] = b0
    for j in range(len(times) - 1):
        h = times[j + 1] - times[j]
        x = w * h
        b[j + 1] = (np.exp(x) * b[j] + cv[j] * h * _phi1(x)
                    + (cv[j + 1] - cv[j]) * h * _phi2(x))
    return times, b


def damped_bound(b0: complex, i_lambda: complex, eps: float, c_sup: float, t):
    """``|b0| e^{Re z t/eps} + eps sup|c| / |Re z|`` (requires Re z < 0)."""
    zr = np.conj(complex(i_lambda)).real
    if not zr < 0:
        raise ValueError("the damped bound needs Re z < 0")
    return abs(b0) * np.exp(zr * np.asarray(t) / eps) + eps * c_sup / abs(zr)


# -- resonant algebra --------------------------------------------------------------------

def resonant_average(lk: float, ll: float, eps: float, T: float, B: float = 1.0) -> float:
    """``(1/T) int_0^T cos(sqrt(B) lk t/eps) cos(sqrt(B) ll t/eps) dt`` in closed form."""
    a, b = np.sqrt(B) * lk / eps, np.sqrt(B) * ll / eps

    def sinc_int(w):
        return T if w == 0 else np.sin(w * T) / w
    return float((sinc_int(a - b) + sinc_int(a + b)) / (2 * T))


def resonant_envelope(lk: float, ll: float, eps: float, T: float, B: float = 1.0,
                      samples: int = 2001) -> float:
    """``max |average(T')|`` over one beat period ``T' in [T, T + 2 pi eps / (sqrt(B) |lk - ll|)]``.

    The plain average at a single T oscillates with the phase of
    ``sin((a-b)T)``; its envelope is what decays like eps.  A window of one
    full beat period catches the envelope peak for every eps.  For equal
    eigenvalues the average tends to 1/2 and the window collapses to ``T``.
    """
    w = np.sqrt(B) * abs(lk - ll) / eps
    Ts = [T] if w == 0 else np.linspace(T, T + 2 * np.pi / w, samples)
    return float(max(abs(resonant_average(lk, ll, eps, t, B)) for t in Ts))


def gradient_structure_residual(mode_k: NeumannMode, mode_l: NeumannMode, points: int = 256) -> float:
    """``max |div(gk x gl + gl x gk) + lam^2 grad(phi_k phi_l) - grad(gk . gl)|``.

    Rectangle modes only.  Cosine modes extend evenly to a doubled periodic
    box, where FFT derivatives of the sampled closed forms are exact.
    """
    if mode_k.domain_kind != RECTANGLE or mode_l.domain_kind != RECTANGLE:
        raise ValueError("the gradient-structure check is implemented for rectangle modes")
    if not np.isclose(mode_k.lambda0, mode_l.lambda0, rtol=1e-12):
        raise ValueError("the identity needs equal eigenvalues")
    from ..fields import Grid
    Lx, Ly = mode_k.size
    g = Grid((2 * Lx, 2 * Ly), (points, points))
    X, Y = g.coords
    pk, pl = mode_k.phi0(X, Y), mode_l.phi0(X, Y)
    gk, gl = g.grad_a(pk), g.grad_a(pl)
    T = np.einsum("i...,j...->ij...", gk, gl)
    T = T + np.swapaxes(T, 0, 1)
    lhs = g.div_tensor_a(T)
    rhs = -mode_k.lambda0 ** 2 * g.grad_a(pk * pl) + g.grad_a(np.sum(gk * gl, axis=0))
    return float(np.max(np.abs(lhs - rhs)))
