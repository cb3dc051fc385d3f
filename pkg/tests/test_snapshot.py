import csv
import struct

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lclimit import snapshot
from lclimit.fields import Grid, State


def _state(g, seed=0, t=0.25):
    rng = np.random.default_rng(seed)
    shape = (g.dim,) + g.shape
    return State.from_arrays(g, t, 1 + 0.1 * rng.random(g.shape), rng.standard_normal(shape),
                             rng.standard_normal(shape))


@given(st.sampled_from([Grid((1.0,), (9,)), Grid((2.0, 3.0), (8, 12)),
                        Grid((1.0, 1.0), (10, 9), boundary="dirichlet-rectangle")]),
       st.integers(0, 1000), st.floats(0, 1e6))
def test_round_trip_is_bit_exact(g, seed, t):
    s = _state(g, seed, t)
    r = snapshot.from_bytes(snapshot.to_bytes(s))
    assert r.t == s.t and r.grid == s.grid
    for a, b in ((r.rho, s.rho), (r.u, s.u), (r.d, s.d)):
        assert np.array_equal(a.values, b.values)


def test_header_layout():
    g = Grid((2.0, 3.0), (8, 12), boundary="dirichlet-rectangle")
    buf = snapshot.to_bytes(_state(g, t=1.5))
    assert buf[:4] == b"LCLF"
    version, dim, kind = struct.unpack_from("<HHB", buf, 4)
    assert (version, dim, kind) == (1, 2, 1)
    assert struct.unpack_from("<2I", buf, 12) == (8, 12)
    assert struct.unpack_from("<2d", buf, 20) == (2.0, 3.0)
    t, ncomp = struct.unpack_from("<dI", buf, 36)
    assert (t, ncomp) == (1.5, 5)
    assert len(buf) == 48 + 5 * 8 * 96


def test_bad_magic_and_version():
    buf = bytearray(snapshot.to_bytes(_state(Grid((1.0,), (8,)))))
    with pytest.raises(ValueError):
        snapshot.from_bytes(b"XXXX" + bytes(buf[4:]))
    buf[4] = 9
    with pytest.raises(ValueError):
        snapshot.from_bytes(bytes(buf))


def test_file_round_trip_and_csv(tmp_path):
    g = Grid((1.0, 1.0), (8, 8))
    s = _state(g, 4)
    p = tmp_path / "s.lclf"
    snapshot.save(p, s)
    assert np.array_equal(snapshot.load(p).u.values, s.u.values)
    c = tmp_path / "s.csv"
    snapshot.export_csv(c, s)
    rows = list(csv.reader(open(c)))
    assert rows[0] == ["x", "y", "rho", "u0", "u1", "d0", "d1"]
    assert len(rows) == 65
    assert float(rows[2][2]) == s.rho.values.ravel()[1]
