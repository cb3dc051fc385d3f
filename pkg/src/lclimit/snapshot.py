"""Binary and CSV snapshots of a :class:`State`.

Byte layout (little endian)::

    offset  type        content
    0       char[4]     magic b"LCLF"
    4       uint16      format version (1)
    6       uint16      dim (1 or 2)
    8       uint8       boundary kind (0 periodic, 1 dirichlet-rectangle)
    9       pad[3]
    12      uint32[dim] points per axis
    ..      float64[dim] extent per axis
    ..      float64     time
    ..      uint32      number of components (1 + 2*dim)
    ..      float64[...] components, each row-major over the grid, in the order
                         rho, u_0 .. u_{dim-1}, d_0 .. d_{dim-1}
"""
from __future__ import annotations

import csv
import struct

import numpy as np

from .fields import DIRICHLET, PERIODIC, Grid, State

MAGIC = b"LCLF"
VERSION = 1
_KINDS = {PERIODIC: 0, DIRICHLET: 1}


def _header(grid: Grid, t: float, ncomp: int) -> bytes:
    dim = grid.dim
    head = struct.pack("<4sHHB3x", MAGIC, VERSION, dim, _KINDS[grid.boundary])
    head += struct.pack(f"<{dim}I", *grid.points)
    head += struct.pack(f"<{dim}d", *grid.extent)
    head += struct.pack("<dI", t, ncomp)
    return head


def to_bytes(state: State) -> bytes:
    g = state.grid
    comps = [state.rho.values, *state.u.values, *state.d.values]
    body = b"".join(np.ascontiguousarray(c, dtype="<f8").tobytes() for c in comps)
    return _header(g, state.t, len(comps)) + body


def from_bytes(buf: bytes) -> State:
    magic, version, dim, kind = struct.unpack_from("<4sHHB3x", buf, 0)
    if magic != MAGIC:
        raise ValueError("not a field snapshot (bad magic)")
    if version != VERSION:
        raise ValueError(f"unsupported snapshot version {version}")
    off = 12
    points = struct.unpack_from(f"<{dim}I", buf, off)
    off += 4 * dim
    extent = struct.unpack_from(f"<{dim}d", buf, off)
    off += 8 * dim
    t, ncomp = struct.unpack_from("<dI", buf, off)
    off += 12
    boundary = {v: k for k, v in _KINDS.items()}[kind]
    grid = Grid(extent, points, boundary)
    if ncomp != 1 + 2 * dim:
        raise ValueError(f"expected {1 + 2 * dim} components, found {ncomp}")
    size = int(np.prod(points))
    data = np.frombuffer(buf, dtype="<f8", count=ncomp * size, offset=off)
    comps = data.reshape((ncomp,) + tuple(points))
    return State.from_arrays(grid, t, comps[0], comps[1:1 + dim], comps[1 + dim:])


def save(path, state: State) -> None:
    with open(path, "wb") as fh:
        fh.write(to_bytes(state))


def load(path) -> State:
    with open(path, "rb") as fh:
        return from_bytes(fh.read())


def export_csv(path, state: State) -> None:
    """One row per node: coordinates, then rho, u, d components."""
    g = state.grid
    names = ["x", "y"][: g.dim]
    header = names + ["rho"] + [f"u{i}" for i in range(g.dim)] + [f"d{i}" for i in range(g.dim)]
    cols = [c.ravel() for c in g.coords]
    cols.append(state.rho.values.ravel())
    cols += [c.ravel() for c in state.u.values]
    cols += [c.ravel() for c in state.d.values]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(np.column_stack(cols).tolist())
