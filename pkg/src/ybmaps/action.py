"""Dilogarithm Lagrangian, lattice action and its stationarity conditions."""

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .classical_map import yb_map_uv
from .errors import BranchError, InvalidPointError

PI2_6 = math.pi**2 / 6
TWO_PI_I = 2j * math.pi


@lru_cache(maxsize=None)
def _bernoulli(n_max=60):
    """B_0..B_n_max with B_1 = -1/2."""
    B = [Fraction(0)] * (n_max + 1)
    B[0] = Fraction(1)
    for m in range(1, n_max + 1):
        acc = Fraction(0)
        binom = 1
        for k in range(m):
            acc += binom * B[k]
            binom = binom * (m + 1 - k) // (k + 1)
        B[m] = -acc / (m + 1)
    return tuple(float(b) for b in B)


def _li2_series(x):
    """Series in u = -log(1-x): Li2 = sum_n B_n u^(n+1)/(n+1)!; |u| < 2 pi."""
    u = -cmath.log(1 - x)
    B = _bernoulli()
    total = 0j
    term = u  # u^(n+1)/(n+1)! for n = 0
    for n, b in enumerate(B):
        if n > 0:
            term *= u / (n + 1)
        if b != 0.0:
            add = b * term
            total += add
            if n > 4 and abs(add) < 1e-17 * max(1.0, abs(total)):
                break
    return total


def li2(x, side=None):
    """Principal branch of the dilogarithm, cut along [1, inf).

    On the cut itself ``side`` must be "above" or "below".
    """
    x = complex(x)
    if x.imag == 0 and x.real > 1:
        if side not in ("above", "below"):
            raise BranchError(f"li2({x.real}) lies on the branch cut; pass side='above' or 'below'")
        # Li2(x +- i0) = pi^2/6 - log x log(1 - x -+ i0) - Li2(1 - x)
        l1 = math.log(x.real - 1) + (-1j if side == "above" else 1j) * math.pi
        return PI2_6 - math.log(x.real) * l1 - li2(1 - x.real)
    if x == 0:
        return 0j
    if x == 1:
        return complex(PI2_6)
    if abs(x) > 1:
        return -PI2_6 - 0.5 * cmath.log(-x) ** 2 - li2(1 / x)
    if x.real > 0.5:
        return PI2_6 - cmath.log(x) * cmath.log(1 - x) - _li2_series(1 - x)
    return _li2_series(x)


def lam_fn(a, s):
    return -s * s / 2 - li2(-cmath.exp(-s - a))


def lambar_fn(a, s):
    return s * s / 2 + li2(cmath.exp(-s - a))


def dlam(a, s):
    return -cmath.log(cmath.exp(s) + cmath.exp(-a))


def dlambar(a, s):
    return cmath.log(cmath.exp(s) - cmath.exp(-a))


def _dlam_exact(a, s):
    """Derivative of lam_fn on the branch actually used by li2."""
    return -s - cmath.log(1 + cmath.exp(-s - a))


def _dlambar_exact(a, s):
    return s + cmath.log(1 - cmath.exp(-s - a))


def lambda_pair(a, s):
    """(lambda_a(s), lambdabar_a(s), d lambda/ds, d lambdabar/ds)."""
    a = complex(a)
    s = complex(s)
    return lam_fn(a, s), lambar_fn(a, s), dlam(a, s), dlambar(a, s)


@dataclass(frozen=True)
class LagrangianParams:
    a1: complex
    a2: complex
    b1: complex
    b2: complex

    @property
    def z1(self):
        return -cmath.exp(self.b1 - self.a1)

    @property
    def z2(self):
        return -cmath.exp(self.b2 - self.a2)

    @classmethod
    def from_z(cls, z1, z2, b1=0.0, b2=0.0):
        """Choose a_i so that z_i = -exp(b_i - a_i)."""
        return cls(b1 - cmath.log(-z1), b2 - cmath.log(-z2), complex(b1), complex(b2))


def lagrangian_density(s1, s2, s1p, s2p, p):
    return (
        lam_fn(p.b1 - p.a2, s2 - s1)
        + lam_fn(p.a1 - p.b2, s2p - s1p)
        + lambar_fn(p.a1 - p.a2, s2p - s1)
        + lambar_fn(p.b1 - p.b2, s2 - s1p)
    )


def density_partials(s1, s2, s1p, s2p, p, exact=False):
    """d L / d(s1, s2, s1', s2'). With exact=True the derivative of the
    principal-branch function is returned; otherwise the log identities,
    which agree with it modulo 2 pi i."""
    dl, db = (_dlam_exact, _dlambar_exact) if exact else (dlam, dlambar)
    A = dl(p.b1 - p.a2, s2 - s1)
    B = dl(p.a1 - p.b2, s2p - s1p)
    C = db(p.a1 - p.a2, s2p - s1)
    D = db(p.b1 - p.b2, s2 - s1p)
    return np.array([-A - C, A + D, -B - D, B + C])


def reduce_2pi(x):
    """Split x into (x - 2 pi i m, m) with the imaginary part in (-pi, pi]."""
    x = np.asarray(x, dtype=complex)
    m = np.round(x.imag / (2 * math.pi))
    return x - TWO_PI_I * m, m.astype(int)


@dataclass(frozen=True)
class SigmaField:
    """sigma[j, t] for lattice site j+1 and time t = 0..T.

    Periodic fields have 2N columns. Open fields have 2M+1 columns, the last
    one closing plaquette M. Rows t=0 and t=T are the fixed boundary.
    """

    sigma: np.ndarray
    periodic: bool = True

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=complex)
        if s.ndim != 2 or s.shape[1] < 2:
            raise InvalidPointError("sigma must be a (sites, times) array with at least two times")
        K = s.shape[0]
        if self.periodic and K % 2:
            raise InvalidPointError("periodic fields need an even number of sites")
        if not self.periodic and (K % 2 == 0 or K < 3):
            raise InvalidPointError("open fields need 2M+1 sites")
        object.__setattr__(self, "sigma", s)

    @property
    def K(self):
        return self.sigma.shape[0]

    @property
    def T(self):
        return self.sigma.shape[1] - 1

    def plaquettes(self):
        """Yield (n, t, index tuple) for every plaquette (0-based n)."""
        K = self.K
        M = K // 2
        for t in range(self.T):
            for n in range(M):
                o, e = 2 * n, 2 * n + 1
                nxt = (2 * n + 2) % K
                yield n, t, ((o, t), (e, t), (nxt, t + 1), (e, t + 1))

    def interior_columns(self):
        return list(range(self.K)) if self.periodic else list(range(1, self.K - 1))

    @classmethod
    def from_v(cls, v, p, periodic=True):
        """sigma = log v + b (b1 on odd sites, b2 on even sites)."""
        v = np.asarray(v, dtype=complex)
        b = np.where(np.arange(v.shape[0]) % 2 == 0, p.b1, p.b2)[:, None]
        return cls(np.log(v) + b, periodic)

    def to_json(self, p=None):
        pair = lambda c: [float(c.real), float(c.imag)]  # noqa: E731
        out = {"periodic": self.periodic, "sigma": [[pair(c) for c in row] for row in self.sigma]}
        if p is not None:
            out["params"] = {k: pair(complex(getattr(p, k))) for k in ("a1", "a2", "b1", "b2")}
        return out

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        sig = np.array([[complex(*c) for c in row] for row in data["sigma"]])
        field = cls(sig, bool(data.get("periodic", True)))
        params = None
        if "params" in data:
            params = LagrangianParams(**{k: complex(*v) for k, v in data["params"].items()})
        return field, params


def action_value(field, p):
    s = field.sigma
    return sum(lagrangian_density(*(s[i] for i in idx), p) for _, _, idx in field.plaquettes())


def full_gradient(field, p, exact=True):
    s = field.sigma
    grad = np.zeros_like(s)
    for _, _, idx in field.plaquettes():
        d = density_partials(*(s[i] for i in idx), p, exact=exact)
        for i, val in zip(idx, d):
            grad[i] += val
    return grad


def action_and_gradient(field, p, reduce_branch=True):
    """Total action and its gradient at interior sites.

    The action is a sum of dilogarithms and is multivalued. With
    ``reduce_branch`` each interior gradient entry is taken modulo 2 pi i,
    which is what stationarity means for it.
    """
    act = action_value(field, p)
    grad = full_gradient(field, p, exact=True)
    cols = field.interior_columns()
    inner = grad[np.ix_(cols, range(1, field.T))]
    if reduce_branch:
        inner, _ = reduce_2pi(inner)
    return act, inner


def branch_windings(field, p):
    grad = full_gradient(field, p, exact=True)
    cols = field.interior_columns()
    return reduce_2pi(grad[np.ix_(cols, range(1, field.T))])[1]


def eom_residual(v, z1, z2, periodic=True):
    """Largest relative residual of the second-order equations of motion.

    v[j, t] holds site j+1 at time t. Each equation is written as
    lhs = rhs and scaled by max(1, |lhs|, |rhs|).
    """
    v = np.asarray(v, dtype=complex)
    K, T1 = v.shape
    cols = range(K) if periodic else range(1, K - 1)
    worst = 0.0
    for j in cols:
        jl, jr = (j - 1) % K, (j + 1) % K
        for t in range(1, T1 - 1):
            x = v[j, t]
            vu, vd, vl, vr = v[jr, t + 1], v[jl, t - 1], v[jl, t], v[jr, t]
            if j % 2 == 0:
                lhs = (1 - vl / (z1 * x)) * (1 - z2 * vr / x)
                rhs = (1 - z2 * vu / (z1 * x)) * (1 - vd / x)
            else:
                lhs = (1 - x / (z1 * vr)) * (1 - z2 * x / vl)
                rhs = (1 - z2 * x / (z1 * vd)) * (1 - x / vu)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    return worst


def generating_check(w1, w2, p, tol_z=1e-12):
    """Residuals of dL/dlog v_i = -log u_i and dL/dlog v_i' = log u_i'
    (i = 1, 2), reduced modulo 2 pi i. Returns (residuals, windings)."""
    if abs(w1.z - p.z1) > tol_z * max(1, abs(p.z1)) or abs(w2.z - p.z2) > tol_z * max(1, abs(p.z2)):
        raise InvalidPointError("Weyl triples are inconsistent with the Lagrangian parameters")
    q1, q2 = yb_map_uv(w1, w2)
    s1 = cmath.log(w1.v) + p.b1
    s2 = cmath.log(w2.v) + p.b2
    s1p = cmath.log(q1.v) + p.b1
    s2p = cmath.log(q2.v) + p.b2
    d = density_partials(s1, s2, s1p, s2p, p)
    raw = d - np.array([-cmath.log(w1.u), -cmath.log(w2.u), cmath.log(q1.u), cmath.log(q2.u)])
    return reduce_2pi(raw)
