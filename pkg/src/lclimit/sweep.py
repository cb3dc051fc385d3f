"""eps sweeps: one compressible run per eps, one incompressible reference, fitted rates.

Each eps run is independent, so runs may go to a process pool.  The
report is assembled afterwards in eps order, which keeps the JSON output
byte-identical regardless of the worker count.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.integrate import trapezoid

from .acoustics.forcing import I_NAMES, boundedness_report, i_terms, torus_test_mode
from .compressible import run, well_prepared_initial
from .diagnostics import density_metrics, projected_convergence, velocity_split
from .errors import SolverError
from .fields import Grid, Params
from .helmholtz import PoissonContext
from .incompressible import run_inc
from .trajectory import SchemeConfig

SCHEMA_VERSION = "1.0"

#: scalar metrics stored per eps, in report order
METRICS = ("sup_L2_rho_dev", "sup_Lgamma_rho_dev", "sup_orlicz_small", "sup_orlicz_large",
           "sup_u1", "sup_u2", "Qu_L2L2", "Pu_err_L2L2", "u_err_L2L2", "d_err_L2L2",
           "max_d", "energy_excess") + tuple(f"max_{n}" for n in I_NAMES)


@dataclass(frozen=True)
class SweepConfig:
    params: Params
    grid: Grid
    scheme: SchemeConfig
    eps_list: tuple
    seed: int = 1
    workers: int = 1
    test_mode: tuple = (1, 0)

    def __post_init__(self):
        eps = np.asarray(self.eps_list, float)
        if eps.size < 3:
            raise ValueError("a sweep needs at least three eps values")
        if np.any(eps <= 0):
            raise ValueError("eps values must be positive")
        r = eps[1:] / eps[:-1]
        if not np.allclose(r, r[0], rtol=1e-6):
            raise ValueError("eps values must be geometrically spaced")


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    half_width: float      # 95% confidence half-width of the slope
    residual: float        # RMS residual of the log-log fit
    n: int

    def as_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept,
                "half_width": self.half_width, "residual": self.residual, "n": self.n}


def fit_slope(x, y, confidence: float = 0.95) -> SlopeFit:
    """Least-squares slope of ``log y`` against ``log x`` with a t-based half-width."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    n = lx.size
    if n < 2:
        raise ValueError("need at least two points to fit a slope")
    res = stats.linregress(lx, ly)
    resid = ly - (res.intercept + res.slope * lx)
    hw = float(stats.t.ppf(0.5 + confidence / 2, n - 2) * res.stderr) if n > 2 else float("inf")
    return SlopeFit(float(res.slope), float(res.intercept), hw,
                    float(np.sqrt(np.mean(resid ** 2))), n)


@dataclass
class SweepReport:
    """Per-eps metrics, their time series, and fitted log-log slopes."""

    eps: list
    metrics: dict = field(default_factory=dict)       # name -> list over eps (None if failed)
    series: dict = field(default_factory=dict)        # eps (str) -> {column: list}
    slopes: dict = field(default_factory=dict)        # name -> SlopeFit dict
    failures: dict = field(default_factory=dict)      # eps (str) -> message
    reference: dict = field(default_factory=dict)
    boundedness: dict = field(default_factory=dict)
    rows: dict = field(default_factory=dict, repr=False)   # eps (str) -> diagnostics rows

    @property
    def converged_eps(self) -> list:
        return [e for e in self.eps if _key(e) not in self.failures]

    def metric(self, name: str) -> np.ndarray:
        return np.array([np.nan if v is None else v for v in self.metrics[name]], float)

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "eps": self.eps, "metrics": self.metrics,
                "slopes": self.slopes, "failures": self.failures, "reference": self.reference,
                "boundedness": self.boundedness, "series": self.series}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1, allow_nan=True)


def _key(eps: float) -> str:
    return repr(float(eps))


def _run_one(cfg: SweepConfig, eps: float):
    """One compressible run and its metrics; velocity samples go back for the comparison."""
    p = cfg.params.with_eps(eps)
    init = well_prepared_initial(cfg.grid, p, cfg.seed)
    traj = run(init, p, cfg.scheme)
    g = cfg.grid
    ctx = PoissonContext(g)
    m_test = torus_test_mode(g, cfg.test_mode) if g.periodic else None
    ser = {k: [] for k in ("t", "L2_rho_dev", "Lgamma_rho_dev", "orlicz_small", "orlicz_large",
                           "u1", "u2", "max_d")}
    ivals = []
    for s in traj.states:
        dm = density_metrics(s, p)
        u1, u2 = velocity_split(s, p)
        ser["t"].append(s.t)
        ser["L2_rho_dev"].append(g.l2(s.rho.values - 1.0))
        ser["Lgamma_rho_dev"].append(dm[0])
        ser["orlicz_small"].append(dm[1])
        ser["orlicz_large"].append(dm[2])
        ser["u1"].append(u1)
        ser["u2"].append(u2)
        ser["max_d"].append(float(np.max(np.sqrt(np.sum(s.d.values ** 2, axis=0)))))
        if m_test is not None:
            ivals.append(i_terms(s, p, m_test, ctx=ctx))
    for i, n in enumerate(I_NAMES):
        ser[n] = [float(v[i]) for v in ivals]
    E = traj.column("E_eps") + traj.column("dissipation")
    rows_maxd = float(np.max(traj.column("max|d|")))
    out = {
        "sup_L2_rho_dev": float(np.max(traj.column("L2(rho-1)"))),
        "sup_Lgamma_rho_dev": max(ser["Lgamma_rho_dev"]),
        "sup_orlicz_small": max(ser["orlicz_small"]),
        "sup_orlicz_large": max(ser["orlicz_large"]),
        "sup_u1": max(ser["u1"]),
        "sup_u2": max(ser["u2"]),
        "max_d": rows_maxd,
        "energy_excess": float(np.max(E / E[0] - 1.0)),
    }
    for n in I_NAMES:
        out[f"max_{n}"] = float(np.max(np.abs(ser[n]))) if ser[n] else None
    return out, ser, traj.states, traj.rows


def _safe_run(cfg: SweepConfig, eps: float):
    try:
        return ("ok", _run_one(cfg, eps))
    except SolverError as exc:
        return ("failed", str(exc))


def sweep(cfg: SweepConfig) -> SweepReport:
    """Run the sweep; failed eps values are annotated and left out of every fit."""
    eps_list = [float(e) for e in cfg.eps_list]
    g = cfg.grid
    p_ref = cfg.params.with_eps(eps_list[0])
    ref_traj = run_inc(well_prepared_initial(g, p_ref, cfg.seed), p_ref, cfg.scheme)
    ref_states = ref_traj.states
    ctx = PoissonContext(g)

    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_safe_run, [cfg] * len(eps_list), eps_list))
    else:
        results = [_safe_run(cfg, e) for e in eps_list]

    rep = SweepReport(eps=eps_list)
    rep.metrics = {m: [] for m in METRICS}
    rep.reference = {"max_div_u": float(np.max(ref_traj.column("div_u"))),
                     "max_d": float(np.max(ref_traj.column("max|d|"))),
                     "energy_excess": float(np.max(
                         (ref_traj.column("E_eps") + ref_traj.column("dissipation"))
                         / ref_traj.column("E_eps")[0] - 1.0))}
    i_series = []
    for eps, (status, payload) in zip(eps_list, results):
        k = _key(eps)
        if status != "ok":
            rep.failures[k] = payload
            for m in METRICS:
                rep.metrics[m].append(None)
            continue
        out, ser, states, rows = payload
        pe, qn, ue = projected_convergence(states, ref_states, ctx)
        out["Qu_L2L2"], out["Pu_err_L2L2"], out["u_err_L2L2"] = qn, pe, ue
        d_err = [g.l2(a.d.values - b.d.values) ** 2 for a, b in zip(states, ref_states)]
        out["d_err_L2L2"] = float(trapezoid(d_err, [s.t for s in states]))
        for m in METRICS:
            rep.metrics[m].append(out.get(m))
        rep.series[k] = ser
        rep.rows[k] = rows
        if ser.get("I1"):
            i_series.append((eps, np.column_stack([ser[n] for n in I_NAMES])))

    ok = [i for i, e in enumerate(eps_list) if _key(e) not in rep.failures]
    if len(ok) >= 2:
        x = [eps_list[i] for i in ok]
        for m in METRICS:
            y = [rep.metrics[m][i] for i in ok]
            if all(v is not None and v > 0 for v in y):
                rep.slopes[m] = fit_slope(x, y).as_dict()
    if len(i_series) >= 2:
        br = boundedness_report([e for e, _ in i_series], [s for _, s in i_series])
        rep.boundedness = br.as_dict()
    return rep


def sweep_config_from(run_cfg) -> SweepConfig:
    """Build a :class:`SweepConfig` from a parsed INI :class:`~lclimit.config.RunConfig`."""
    return SweepConfig(params=run_cfg.params, grid=run_cfg.grid, scheme=run_cfg.scheme,
                       eps_list=tuple(run_cfg.eps_list), seed=run_cfg.seed,
                       workers=run_cfg.workers, test_mode=tuple(run_cfg.test_mode))
