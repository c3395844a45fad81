import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ybmaps.errors import GenericityError, InvalidPointError
from ybmaps.numsupport import max_abs, swap_matrix
from ybmaps.quantum_rep import (
    QParams,
    coproduct_rep,
    hopf_residual_suite,
    lax_and_r6v,
    lax_closed_form,
    lax_operators,
    quantum_map_residual,
    r_check,
    r_pm_closed_form,
    r_star,
    rep_relation_residuals,
    rll_ybe_residual,
    spin_rep,
    universal_r,
)

HALF, ONE, THREE_HALVES = Fraction(1, 2), Fraction(1), Fraction(3, 2)
P = QParams()
LAM_PAIRS = [(1.2 + 0.3j, 0.8 - 0.4j), (-0.5 + 0.9j, 1.4 + 0.2j), (0.3 - 1.1j, 0.6 + 0.6j)]


def product_oracle(a, b, factors=200):
    """q^(H(x)H/2) prod_k (1 - q^(2k+1) E(x)F), valid for |q| < 1."""
    q = a.params.q
    x = np.kron(a.E, b.F)
    out = np.eye(x.shape[0], dtype=complex)
    for k in range(factors):
        out = out @ (np.eye(x.shape[0]) - q ** (2 * k + 1) * x)
    h = np.kron(a.H, np.eye(b.dim)) @ np.kron(np.eye(a.dim), b.H)
    diag = np.diag([cmath.exp(0.5 * hh * cmath.log(q)) for hh in np.diag(h)])
    return diag @ out


@pytest.mark.parametrize("ja,jb", [(HALF, HALF), (HALF, ONE), (ONE, THREE_HALVES)])
def test_universal_r_against_product(ja, jb):
    a, b = spin_rep(ja), spin_rep(jb)
    assert abs(P.q) < 1
    ref = product_oracle(a, b)
    assert max_abs(universal_r(a, b) - ref) < 1e-12


@pytest.mark.parametrize("j", [0, HALF, ONE, THREE_HALVES, 2])
def test_rep_relations(j):
    res = rep_relation_residuals(spin_rep(j))
    assert max(res.values()) < 1e-12


def test_coproduct_is_rep():
    co = coproduct_rep(spin_rep(HALF), spin_rep(ONE))
    res = rep_relation_residuals(co)
    # reducible: the Casimir is not a scalar
    assert res.pop("casimir_scalar") > 0.1
    assert max(res.values()) < 1e-12


def test_r_pm_closed_form():
    half = spin_rep(HALF)
    rp, rm = r_pm_closed_form(P)
    assert max_abs(universal_r(half, half) - rp) < 1e-14
    assert max_abs(r_star(half, half) - rm) < 1e-14


def test_braid_matrix_at_shifted_point():
    q = P.q
    data = lax_and_r6v(spin_rep(HALF), P.q_half)
    assert max_abs(data.R - (q - 1 / q) * swap_matrix(2, 2)) < 1e-14
    assert max_abs(data.R_check - (q - 1 / q) * np.eye(4)) < 1e-14
    assert max_abs(r_check(np.eye(4)) - swap_matrix(2, 2)) == 0


@pytest.mark.parametrize("j", [HALF, ONE])
def test_rll_and_ybe(j):
    res = rll_ybe_residual(spin_rep(j), LAM_PAIRS)
    lit = res.pop("llr_6v_literal")
    assert max(res.values()) < 1e-12, res
    assert lit > 0.1


@pytest.mark.parametrize("j", [HALF, ONE, THREE_HALVES])
def test_lax_closed_form(j):
    rep = spin_rep(j)
    lp, lm = lax_operators(rep)
    cp, cm = lax_closed_form(rep)
    assert max_abs(lp - cp) < 1e-13 and max_abs(lm - cm) < 1e-13


@pytest.mark.parametrize("j", [HALF, ONE, THREE_HALVES])
def test_quantum_map(j):
    res = quantum_map_residual(spin_rep(j))
    assert max(res.values()) < 1e-11, res


def test_quantum_map_mixed_spins():
    assert max(quantum_map_residual(spin_rep(HALF), spin_rep(ONE)).values()) < 1e-11


@pytest.mark.parametrize("j", [HALF, ONE])
def test_hopf_suite(j):
    res = hopf_residual_suite(spin_rep(j))
    assert max(res.values()) < 1e-11, {k: v for k, v in res.items() if v > 1e-11}


@given(
    st.floats(0.3, 0.9),
    st.floats(-2.5, 2.5),
)
def test_map_residual_over_q(r, theta):
    p = QParams.from_q(r * cmath.exp(1j * theta))
    try:
        rep = spin_rep(HALF, p)
    except GenericityError:
        return
    assert max(quantum_map_residual(rep).values()) < 1e-9


def test_genericity_error():
    with pytest.raises(GenericityError):
        spin_rep(ONE, QParams.from_q(cmath.exp(1j * cmath.pi / 2)))
    with pytest.raises(GenericityError):
        spin_rep(HALF, QParams.from_q(-1))


def test_invalid_inputs():
    with pytest.raises(InvalidPointError):
        spin_rep(Fraction(1, 3))
    with pytest.raises(InvalidPointError):
        QParams(0)
    with pytest.raises(InvalidPointError):
        lax_and_r6v(spin_rep(HALF), 0)
    with pytest.raises(InvalidPointError):
        universal_r(spin_rep(HALF), spin_rep(HALF, QParams.from_q(0.5)))
