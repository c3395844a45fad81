import json

import numpy as np
import pytest

from ybmaps.classical_lattice import (
    ChainState,
    chain_bracket_matrix,
    classical_r,
    classical_r_hat,
    cybe_residual,
    evolve,
    evolve_step,
    evolve_symplectic_residual,
    im_brackets,
    im_coefficients,
    lax_matrix,
    monodromy_trace,
    random_state,
    sklyanin_residual,
    unevolve_step,
    zcr_residuals,
)
from ybmaps.classical_map import ClassicalTriple, random_pair, weyl_embed
from ybmaps.errors import InvalidPointError


def test_lax_determinants(rng):
    x = ClassicalTriple(*np.exp(rng.normal(size=3) + 1j * rng.normal(size=3)))
    assert abs(np.linalg.det(lax_matrix(x, "plus").matrix) - 1) < 1e-12
    assert abs(np.linalg.det(lax_matrix(x, "minus").matrix) - 1) < 1e-12
    lam = 1.3 - 0.2j
    # det(lam l+ - l-/lam) = lam^2 + lam^-2 - (ef + k + 1/k) by the Casimir
    k, e, f = x.as_tuple()
    want = lam**2 + lam**-2 - (e * f + k + 1 / k)
    assert abs(np.linalg.det(lax_matrix(x, "lambda", lam).matrix) - want) < 1e-11
    with pytest.raises(ValueError):
        lax_matrix(x, "lambda")


def test_zero_curvature(rng):
    for _ in range(10):
        w1, w2 = random_pair(rng, radius=0.5)
        res = zcr_residuals(weyl_embed(w1), weyl_embed(w2), 1.2 + 0.4j)
        assert max(res.values()) < 1e-12


def test_normalized_r_satisfies_cybe_and_literal_does_not():
    assert cybe_residual(1.3 + 0.2j, 0.7 - 0.4j) < 1e-12
    assert cybe_residual(1.3 + 0.2j, 0.7 - 0.4j, normalized=False) > 0.1
    lam = 1.4
    assert np.allclose(classical_r_hat(lam) * (lam - 1 / lam), classical_r(lam) + 0.25 * (lam + 1 / lam) * np.eye(4))


def test_sklyanin_bracket(rng):
    w1, _ = random_pair(rng, radius=0.5)
    assert sklyanin_residual(w1, 1.2 + 0.1j, 0.8 - 0.3j) < 1e-6


def test_evolution_conserves_traces(rng):
    s = random_state(rng, 4)
    states = evolve(s, 100)
    for lam in (0.9 + 0.3j, 1.7, -0.6 + 1.1j):
        for which in ("t", "tbar"):
            t0 = monodromy_trace(s, lam, which)
            drift = max(abs(monodromy_trace(x, lam, which) - t0) for x in states)
            assert drift < 1e-8 * max(1, abs(t0))
    c0 = s.site_casimirs()
    assert max(np.max(np.abs(x.site_casimirs() - c0)) for x in states) < 1e-12


def test_unevolve_inverts(rng):
    s = random_state(rng, 3)
    back = unevolve_step(evolve_step(s))
    assert np.allclose(back.u, s.u, atol=1e-12) and np.allclose(back.v, s.v, atol=1e-12)


def test_evolve_symplectic(rng):
    assert evolve_symplectic_residual(random_state(rng, 2)) < 1e-6


def test_im_coefficients_reproduce_trace(rng):
    s = random_state(rng, 3)
    ct, cb = im_coefficients(s)
    lam = 1.21 + 0.37j
    t = lam**3 * sum(c * lam ** (-2 * n) for n, c in enumerate(ct))
    assert abs(t - monodromy_trace(s, lam, "t")) < 1e-10


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_im_coefficients_in_involution(rng, N):
    assert np.max(np.abs(im_brackets(random_state(rng, N)))) < 1e-6


def test_bracket_with_site_variable_is_nonzero(rng):
    s = random_state(rng, 2)
    funcs = [lambda st: im_coefficients(st)[0][1], lambda st: st.u[0]]
    assert abs(chain_bracket_matrix(funcs, s)[0, 1]) > 1e-2


def test_state_json_roundtrip(rng):
    s = random_state(rng, 2)
    t = ChainState.from_json(json.dumps(s.to_json()))
    assert np.array_equal(t.u, s.u) and np.array_equal(t.v, s.v) and t.z1 == s.z1


def test_state_validation():
    with pytest.raises(InvalidPointError):
        ChainState(2, [1, 1], [1, 1], 1, 1)
    with pytest.raises(InvalidPointError):
        ChainState(1, [1, 0], [1, 1], 1, 1)
    with pytest.raises(ValueError):
        monodromy_trace(ChainState(1, [1, 1], [1, 1], 2, 2), 0)
