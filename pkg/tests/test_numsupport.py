import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ybmaps.errors import DegenerateSamplesError, IllConditionedError, ProbeError
from ybmaps.numsupport import (
    GradientConfig,
    commutator,
    complex_matrix,
    embed_op,
    eval_poly_lambda2,
    fd_gradient,
    fd_jacobian,
    fit_poly_lambda2,
    kron_all,
    matmul,
    max_abs,
    nilpotent_inv,
    partial_trace_first,
    permute_factors,
    safe_inv,
    swap_matrix,
)


def rand_c(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def test_complex_matrix_shape_checks():
    m = complex_matrix(2, 3, range(6))
    assert m.shape == (2, 3) and m[1, 0] == 3
    with pytest.raises(ValueError):
        complex_matrix(2, 2, [1, 2, 3])
    with pytest.raises(ValueError):
        matmul(np.eye(2), np.eye(3))


def test_safe_inv_matches_numpy(rng):
    a = rand_c(rng, 6, 6)
    assert max_abs(safe_inv(a) - np.linalg.inv(a)) < 1e-12


def test_safe_inv_rejects_ill_conditioned():
    a = np.array([[1, 1], [1, 1 + 1e-15]], dtype=complex)
    with pytest.raises(IllConditionedError) as exc:
        safe_inv(a)
    assert exc.value.cond is None or exc.value.cond > 1e12


def test_nilpotent_inverse_agrees_with_lu(rng):
    n = np.triu(rand_c(rng, 5, 5), 1)
    a = np.eye(5) - n
    assert max_abs(nilpotent_inv(a) - safe_inv(a)) < 1e-12
    with pytest.raises(ValueError):
        nilpotent_inv(np.diag([2.0, 1.0]))


def test_swap_and_permute(rng):
    a, b = rand_c(rng, 2, 2), rand_c(rng, 3, 3)
    p = swap_matrix(2, 3)
    assert max_abs(p @ np.kron(a, b) @ p.T - np.kron(b, a)) < 1e-14
    x, y, z = rand_c(rng, 2, 2), rand_c(rng, 3, 3), rand_c(rng, 2, 2)
    got = permute_factors(kron_all(x, y, z), [2, 3, 2], [2, 0, 1])
    assert max_abs(got - kron_all(z, x, y)) < 1e-13


def test_embed_op_matches_explicit_kron(rng):
    a, b = rand_c(rng, 2, 2), rand_c(rng, 2, 2)
    i2 = np.eye(2)
    assert max_abs(embed_op(np.kron(a, b), [2, 2, 2], [0, 2]) - kron_all(a, i2, b)) < 1e-13
    assert max_abs(embed_op(np.kron(a, b), [2, 2, 2], [2, 0]) - kron_all(b, i2, a)) < 1e-13
    with pytest.raises(ValueError):
        embed_op(a, [2, 2], [0, 0])


def test_partial_trace(rng):
    a, b = rand_c(rng, 3, 3), rand_c(rng, 2, 2)
    assert max_abs(partial_trace_first(np.kron(a, b), 3) - np.trace(a) * b) < 1e-13


def test_commutator_of_commuting_is_zero(rng):
    a = rand_c(rng, 4, 4)
    assert max_abs(commutator(a, a @ a)) < 1e-12


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=3, max_size=3))
def test_fit_recovers_coefficients(coefs):
    lams = [1.0, 1.3, 1.7 + 0.2j, 0.6 - 0.4j]
    samples = [(l, eval_poly_lambda2(coefs, l, 2)) for l in lams]
    got = fit_poly_lambda2(samples, 2, 2)
    assert max(abs(g - c) for g, c in zip(got, coefs)) < 1e-9 * max(1, max(abs(c) for c in coefs))


def test_fit_rejects_degenerate():
    with pytest.raises(DegenerateSamplesError):
        fit_poly_lambda2([(1.0, 1), (-1.0, 2)], 1)
    with pytest.raises(DegenerateSamplesError):
        fit_poly_lambda2([(1.0, 1)], 1)
    with pytest.raises(DegenerateSamplesError):
        fit_poly_lambda2([(0.0, 1), (2.0, 1)], 1)


def test_fit_matrix_valued(rng):
    c = [rand_c(rng, 2, 2) for _ in range(3)]
    samples = [(l, eval_poly_lambda2(c, l)) for l in (1.1, 1.9, 0.7j + 0.3)]
    got = fit_poly_lambda2(samples, 2)
    assert max(max_abs(g - x) for g, x in zip(got, c)) < 1e-10


def test_fd_gradient_against_analytic():
    f = lambda x: np.exp(x[0]) * x[1] ** 2  # noqa: E731
    x = np.array([0.3 + 0.1j, 1.2 - 0.5j])
    want = np.array([np.exp(x[0]) * x[1] ** 2, 2 * np.exp(x[0]) * x[1]])
    assert np.max(np.abs(fd_gradient(f, x) - want)) < 1e-8


def test_complex_step_scheme_on_real_function():
    f = lambda x: np.sin(x[0]) * x[0]  # noqa: E731
    x = np.array([0.7])
    got = fd_jacobian(f, x, GradientConfig("complex-step", 1e-20))
    assert abs(got[0] - (np.cos(0.7) * 0.7 + np.sin(0.7))) < 1e-14


def test_gradient_config_validation():
    with pytest.raises(ValueError):
        GradientConfig("forward")
    with pytest.raises(ValueError):
        GradientConfig(step=0)


def test_probe_error_names_point():
    def bad(x):
        if abs(x[0]) > 0.5:
            raise ZeroDivisionError("boom")
        return x

    with pytest.raises(ProbeError) as exc:
        fd_gradient(bad, np.array([0.5]), GradientConfig(step=0.1))
    assert exc.value.probe is not None
