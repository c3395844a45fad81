import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ybmaps.errors import InvalidPointError, SingularMapError
from ybmaps.liouville import (
    TauField,
    build_tau,
    hamiltonian_residuals,
    liouville_residual,
    map_consistency_residual,
    random_params,
    saw_block,
    uuuu_residual,
    uv_from_tau,
)

Z1, Z2 = 1.3 + 0.4j, -0.7 + 0.9j


def test_hand_case():
    # alpha = beta = phi = gamma = 1 gives f = f0 - x1, g = x2, tau = 1 + (f0 - x1) x2
    f = build_tau(1, 1, 1, 1, 3, 3, f0=0.5j, g0=0)
    x1, x2 = np.meshgrid(range(4), range(4), indexing="ij")
    assert np.allclose(f.tau, 1 + (0.5j - x1) * x2)
    # f0 = g0 = 0 gives tau = 1 - x1 x2, singular at (1, 1)


def test_printed_recursion_sign_fails():
    # with f(x1+1) - f(x1) = +alpha phi phi' the bilinear equation is off by O(1)
    rng = np.random.default_rng(3)
    a, b, p, g = random_params(rng, 6, 6)
    f = np.concatenate([[0], np.cumsum(a[:-1] * p[:-1] * p[1:])])
    gg = np.concatenate([[0], np.cumsum(b[:-1] * g[:-1] * g[1:])])
    tau = (1 + np.outer(f, gg)) / np.outer(p, g)
    wrong = TauField(6, 6, tau, a, b, p, g)
    assert liouville_residual(wrong) > 1e-2
    assert liouville_residual(build_tau(a, b, p, g, 6, 6)) < 1e-12


def test_residual_16x16(rng):
    f = build_tau(*random_params(rng, 16, 16), 16, 16)
    assert liouville_residual(f) < 1e-12


@given(st.integers(0, 2**32 - 1))
def test_scaled_residual_64(seed):
    rng = np.random.default_rng(seed)
    f = build_tau(*random_params(rng, 64, 64), 64, 64)
    assert liouville_residual(f, scaled=True) < 1e-12


def test_uv_relations(rng):
    f = build_tau(*random_params(rng, 12, 12), 12, 12)
    lat = uv_from_tau(f, Z1, Z2)
    assert max(hamiltonian_residuals(lat).values()) < 1e-10
    assert uuuu_residual(lat) < 1e-10
    assert map_consistency_residual(lat) < 1e-10


def test_saw_block_shape(rng):
    f = build_tau(*random_params(rng, 10, 10), 10, 10)
    v, u = saw_block(uv_from_tau(f, Z1, Z2), 3, 4)
    assert v.shape == u.shape == (7, 5)
    with pytest.raises(ValueError):
        saw_block(uv_from_tau(f, Z1, Z2), 20, 4)


def test_json_roundtrip(rng, tmp_path):
    f = build_tau(*random_params(rng, 4, 5), 4, 5)
    g = TauField.from_json(json.dumps(f.to_json()))
    assert np.array_equal(g.tau, f.tau) and g.N2 == 5
    path = tmp_path / "tau.csv"
    f.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x1,x2,re_tau,im_tau" and len(lines) == 1 + 5 * 6
    assert complex(*map(float, lines[1].split(",")[2:])) == f.tau[0, 0]


def test_errors():
    with pytest.raises(InvalidPointError):
        build_tau(1, 1, 0, 1, 2, 2)
    with pytest.raises(SingularMapError) as exc:
        build_tau(1, 1, 1, 1, 2, 2)  # tau = 1 - x1 x2 vanishes at (1, 1)
    assert exc.value.where == (1, 1)
    with pytest.raises(InvalidPointError):
        TauField(2, 2, np.ones((2, 2)), np.ones(3), np.ones(3), np.ones(3), np.ones(3))
