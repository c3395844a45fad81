import cmath
import csv
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ybmaps.errors import InvalidPointError, QuadratureError
from ybmaps.qdilog import (
    DilogParams,
    KernelPoint,
    aux_phi,
    export_csv,
    fourier_duality_residual,
    functional_equation_residual,
    inversion_residuals,
    kernel_funcs,
    log_kernel,
    log_phi,
    log_phi_product,
    phi,
    quasiclassical_residual,
    r_kernel,
    random_kernel_point,
    recurrence_suite,
    star_triangle_residual,
    three_leg_residual,
    w_symmetry_residual,
)

P = DilogParams()


def test_matches_product_formula():
    re = np.linspace(-3, 3, 13)
    im = np.linspace(-0.8, 0.8, 5) * P.eta.real
    zs = (re[:, None] + 1j * im[None, :]).ravel()
    diff = log_phi(zs, P) - log_phi_product(zs, P)
    assert np.max(np.abs(np.exp(diff) - 1)) < 1e-11


def test_large_argument_against_product():
    zs = np.array([8.0, -8.0, 15 + 0.2j, -25 + 0.1j])
    diff = log_phi(zs, P) - log_phi_product(zs, P)
    assert np.max(np.abs(np.exp(diff) - 1)) < 1e-9


@pytest.mark.parametrize("b", [0.4 * cmath.exp(0.3j), 0.8 * cmath.exp(0.1j), 0.5j + 0.5])
def test_other_b_against_product(b):
    p = DilogParams(b)
    zs = np.array([0.0, 0.7 - 0.1j, -1.2 + 0.05j])
    assert np.max(np.abs(np.exp(log_phi(zs, p) - log_phi_product(zs, p)) - 1)) < 1e-10


def test_functional_equation_grid():
    grid = np.linspace(-2, 2, 9)
    grid = np.concatenate([grid, grid + 0.2j * P.b.real, grid - 0.2j * P.b.real])
    assert functional_equation_residual(grid, P) < 1e-6


@given(st.floats(-3, 3), st.floats(-1.5, 1.5))
def test_functional_equation_property(x, y):
    assert functional_equation_residual([complex(x, y)], P) < 1e-8


def test_inversions():
    res = inversion_residuals(np.array([0, 0.3 + 0.1j, -0.7 + 0.2j, 1.1 - 0.3j, 0.5j]), P)
    assert res["phi"] < 1e-8 and res["aux_phi"] < 1e-8


def test_values_at_origin():
    eta = P.eta
    assert abs(phi(0.0, P) - cmath.exp(-1j * math.pi * (1 - 2 * eta**2) / 12)) < 1e-12
    assert abs(aux_phi(0.0, P) - cmath.exp(-1j * math.pi * (1 - 8 * eta**2) / 24)) < 1e-12


def test_limits():
    # phi -> 1 on the left, phi ~ exp(i pi z^2 - ...) on the right
    assert abs(phi(-6 / abs(P.b), P) - 1) < 1e-8
    z = 6 / abs(P.b)
    right = cmath.exp(1j * math.pi * z * z - 1j * math.pi * (1 - 2 * P.eta**2) / 6)
    assert abs(phi(z, P) / right - 1) < 1e-8


def test_w_symmetry_and_wbar():
    assert w_symmetry_residual(0.3 + 0.05j, np.array([0.2, -0.7 + 0.1j, 1.3]), P) < 1e-10
    s = np.array([0.1, -0.4 + 0.05j])
    beta = 0.25 + 0.1j
    manual = log_kernel("W", P.eta - beta, s, P)
    assert np.max(np.abs(np.exp(log_kernel("Wbar", beta, s, P) - manual) - 1)) < 1e-14
    with pytest.raises(ValueError):
        log_kernel("X", beta, s, P)


def test_vbar_star_relation():
    # Vbar* is V at alpha + eta
    s = np.array([0.3, -0.5 + 0.02j])
    a = 0.2 + 0.1j
    assert np.max(np.abs(kernel_funcs("Vbar_star", a, s, P) / kernel_funcs("V", a + P.eta, s, P) - 1)) < 1e-13


def test_fourier_duality():
    assert fourier_duality_residual(0.3 + 0.1j, [0.0, 0.4, -0.3], P) < 1e-4


def test_recurrences(rng):
    res = recurrence_suite(rng, P, points=50)
    assert max(res.values()) < 1e-5, res


def test_quasiclassical_decreasing():
    rows, dec = quasiclassical_residual()
    assert dec, rows
    assert len(rows) == 3


def test_three_leg(rng):
    for _ in range(20):
        prm = tuple(rng.uniform(-0.5, 0.5, 5) + 1j * rng.uniform(-0.3, 0.3, 5))
        res = three_leg_residual(*prm)
        assert res["three_leg"] < 1e-8 and res["closed_root"] < 1e-8


STAR = (0.1 + 0.05j, -0.2, 0.3 - 0.05j, 0.2 + 0.05j, 0.3 - 0.02j)


@pytest.mark.parametrize("which", ["fvstr", "str1", "str2"])
def test_star_triangle_stretch(which):
    res = star_triangle_residual(which, STAR, P)
    if not res.converged:
        pytest.skip(f"{which} quadrature not converged: {res.detail}")
    assert res.residual < 1e-3


def test_star_triangle_reports_nonconvergence():
    res = star_triangle_residual("fvstr", STAR, P, t_max=0.5, max_growth=0)
    assert not res.converged and math.isnan(res.residual)
    with pytest.raises(ValueError):
        star_triangle_residual("nope", STAR, P)


def test_kernel_point_strip(rng):
    pt = random_kernel_point(rng, P)
    assert np.isfinite(r_kernel(pt, P))
    bad = pt.shifted(s1=pt.s1 + 2j)
    with pytest.raises(InvalidPointError):
        r_kernel(bad, P)


def test_invalid_params():
    with pytest.raises(InvalidPointError):
        DilogParams(0.5)  # Im b^2 = 0
    with pytest.raises(InvalidPointError):
        DilogParams(1.2 * cmath.exp(0.3j))


def test_aux_phi_outside_strip():
    with pytest.raises(QuadratureError):
        aux_phi(3j * P.eta.real, P)


def test_export_csv(tmp_path):
    zs = np.array([0.0, 0.5 + 0.1j])
    vals = phi(zs, P)
    path = tmp_path / "phi.csv"
    export_csv(path, zs, vals)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["re_z", "im_z", "re_f", "im_f"]
    assert complex(float(rows[2][2]), float(rows[2][3])) == vals[1]
