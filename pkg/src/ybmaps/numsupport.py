"""Dense complex linear algebra helpers, lambda^2 polynomial fitting and
finite-difference derivatives."""

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg as sla

from .errors import DegenerateSamplesError, IllConditionedError, ProbeError

COND_LIMIT = 1e12


def complex_matrix(rows, cols, entries):
    """Build a rows x cols complex array from a row-major flat sequence."""
    entries = np.asarray(entries, dtype=complex).ravel()
    if rows <= 0 or cols <= 0:
        raise ValueError("matrix dimensions must be positive")
    if entries.size != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {entries.size}")
    return entries.reshape(rows, cols)


def matmul(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"inner dimensions differ: {a.shape} x {b.shape}")
    return a @ b


def kron_all(*mats):
    return reduce(np.kron, mats)


def commutator(a, b):
    return a @ b - b @ a


def permute_factors(mat, dims, order):
    """Conjugate an operator on kron(dims) so that factor order[k] becomes factor k.

    Equivalent to P mat P^-1 with P the corresponding factor permutation.
    """
    dims = list(dims)
    n = len(dims)
    total = int(np.prod(dims))
    t = np.asarray(mat).reshape(dims * 2)
    t = t.transpose(list(order) + [n + k for k in order])
    return t.reshape(total, total)


def embed_op(mat, dims, sites):
    """Lift an operator on the factors ``sites`` (in that order) of kron(dims)."""
    dims = list(dims)
    n = len(dims)
    sites = list(sites)
    if len(set(sites)) != len(sites) or any(not 0 <= s < n for s in sites):
        raise ValueError(f"bad factor indices {sites} for {n} factors")
    rest = [k for k in range(n) if k not in sites]
    sub = int(np.prod([dims[k] for k in sites]))
    if np.shape(mat) != (sub, sub):
        raise ValueError(f"operator shape {np.shape(mat)} does not match factors {sites}")
    full = np.kron(mat, np.eye(int(np.prod([dims[k] for k in rest])), dtype=complex))
    order = sites + rest
    # full lives on factors listed in ``order``; move them back to natural positions
    return permute_factors(full, [dims[k] for k in order], list(np.argsort(order)))


def swap_matrix(da, db):
    """P with P (a x b) = (b x a) for a in C^da, b in C^db."""
    p = np.zeros((da * db, da * db))
    for a in range(da):
        for b in range(db):
            p[b * da + a, a * db + b] = 1.0
    return p


def partial_trace_first(mat, d_first):
    """Trace out a leading factor of dimension d_first."""
    mat = np.asarray(mat)
    rest = mat.shape[0] // d_first
    return np.einsum("aiaj->ij", mat.reshape(d_first, rest, d_first, rest))


def max_abs(x):
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def safe_inv(a, cond_limit=COND_LIMIT):
    """Inverse through an LU factorisation with partial pivoting.

    Raises IllConditionedError when the 1-norm condition number exceeds
    ``cond_limit`` instead of returning a meaningless result.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    lu, piv = sla.lu_factor(a, check_finite=True)
    if np.any(np.diag(lu) == 0):
        raise IllConditionedError("matrix is exactly singular", cond=np.inf)
    inv = sla.lu_solve((lu, piv), np.eye(n, dtype=complex))
    cond = np.linalg.norm(a, 1) * np.linalg.norm(inv, 1)
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditionedError(f"condition number {cond:.3e} exceeds {cond_limit:.1e}", cond=cond)
    return inv


def nilpotent_inv(a, max_power=64):
    """Inverse of 1 - N for nilpotent N = 1 - a by the terminating Neumann series."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    eye = np.eye(n, dtype=complex)
    nil = eye - a
    out = eye.copy()
    term = eye.copy()
    for _ in range(min(n, max_power)):
        term = term @ nil
        if not np.any(term):
            return out
        out = out + term
    if np.any(term @ nil):
        raise ValueError("argument is not a unipotent matrix")
    return out


def fit_poly_lambda2(samples, degree, prefactor_power=0):
    """Recover c_0..c_degree from value(lam) = lam**p * sum_n c_n lam**(-2n).

    ``samples`` is a sequence of (lam, value) pairs; values may be scalars or
    arrays of a common shape. Extra samples are fitted by least squares.
    """
    lams = np.array([s[0] for s in samples], dtype=complex)
    if lams.size < degree + 1:
        raise DegenerateSamplesError(f"need at least {degree + 1} samples, got {lams.size}")
    if np.any(lams == 0):
        raise DegenerateSamplesError("lambda = 0 is not allowed")
    sq = lams**2
    scale = np.maximum(np.abs(sq[:, None]), np.abs(sq[None, :]))
    close = np.abs(sq[:, None] - sq[None, :]) <= 1e-13 * scale
    np.fill_diagonal(close, False)
    if close.any():
        raise DegenerateSamplesError("repeated lambda^2 among samples")
    values = [np.asarray(s[1], dtype=complex) for s in samples]
    shape = values[0].shape
    rhs = np.stack([v.ravel() / lam**prefactor_power for v, lam in zip(values, lams)])
    x = lams**-2
    vand = x[:, None] ** np.arange(degree + 1)[None, :]
    if lams.size == degree + 1:
        coef = np.linalg.solve(vand, rhs)
    else:
        coef = np.linalg.lstsq(vand, rhs, rcond=None)[0]
    return [c.reshape(shape) if shape else complex(c[0]) for c in coef]


def eval_poly_lambda2(coefs, lam, prefactor_power=0):
    lam = complex(lam)
    return lam**prefactor_power * sum(c * lam ** (-2 * n) for n, c in enumerate(coefs))


@dataclass(frozen=True)
class GradientConfig:
    scheme: str = "central"
    step: float = 1e-6

    def __post_init__(self):
        if self.scheme not in ("central", "complex-step"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not self.step > 0:
            raise ValueError("step must be positive")


def _probe(f, x):
    try:
        return np.asarray(f(x), dtype=complex)
    except Exception as exc:  # noqa: BLE001 - re-raised with the probe location
        raise ProbeError(f"evaluation failed at probe {x!r}: {exc}", probe=np.array(x)) from exc


def fd_jacobian(f, point, cfg=GradientConfig()):
    """Columns are d f / d x_i. ``f`` may return a scalar or a vector.

    The central scheme steps along the real axis; for holomorphic ``f`` this
    is the complex derivative. The complex-step scheme steps along the
    imaginary axis, which for real-analytic real-valued ``f`` avoids
    subtractive cancellation.
    """
    point = np.array(point, dtype=complex).ravel()
    h = cfg.step
    delta = h if cfg.scheme == "central" else 1j * h
    cols = []
    for i in range(point.size):
        xp = point.copy()
        xm = point.copy()
        xp[i] += delta
        xm[i] -= delta
        cols.append((_probe(f, xp) - _probe(f, xm)) / (2 * delta))
    return np.stack(cols, axis=-1)


def fd_gradient(f, point, cfg=GradientConfig()):
    """Gradient of a scalar function; returns an array of complex numbers."""
    return np.asarray(fd_jacobian(f, point, cfg)).ravel()
