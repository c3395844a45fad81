"""Tau-function solution of the inhomogeneous discrete Liouville equation

    tau(x+e1) tau(x+e2) - tau(x) tau(x+e1+e2) = alpha(x1) beta(x2)

on a light-cone grid, and the lattice variables (u, v) it induces."""

import csv
import json
from dataclasses import dataclass

import numpy as np

from .classical_map import uv_forward
from .errors import InvalidPointError, SingularMapError


@dataclass(frozen=True)
class TauField:
    N1: int
    N2: int
    tau: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    phi: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=complex)
        if tau.shape != (self.N1 + 1, self.N2 + 1):
            raise InvalidPointError(f"tau must have shape {(self.N1 + 1, self.N2 + 1)}, got {tau.shape}")
        object.__setattr__(self, "tau", tau)
        for name, n in (("alpha", self.N1), ("phi", self.N1), ("beta", self.N2), ("gamma", self.N2)):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (n + 1,):
                raise InvalidPointError(f"{name} must have length {n + 1}")
            object.__setattr__(self, name, arr)

    def to_json(self):
        c = lambda a: [[float(x.real), float(x.imag)] for x in np.ravel(a)]  # noqa: E731
        return {
            "N1": self.N1,
            "N2": self.N2,
            "alpha": c(self.alpha),
            "beta": c(self.beta),
            "phi": c(self.phi),
            "gamma": c(self.gamma),
            "tau": [c(row) for row in self.tau],
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        c = lambda a: np.array([complex(p[0], p[1]) for p in a])  # noqa: E731
        tau = np.array([c(row) for row in data["tau"]])
        return cls(int(data["N1"]), int(data["N2"]), tau, c(data["alpha"]), c(data["beta"]), c(data["phi"]), c(data["gamma"]))

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x1", "x2", "re_tau", "im_tau"])
            for x1 in range(self.N1 + 1):
                for x2 in range(self.N2 + 1):
                    t = self.tau[x1, x2]
                    w.writerow([x1, x2, repr(float(t.real)), repr(float(t.imag))])


def build_tau(alpha, beta, phi, gamma, N1, N2, f0=0.0, g0=0.0):
    """General solution tau = (1 + f g)/(phi gamma), with

        f(x1+1) - f(x1) = -alpha(x1) phi(x1) phi(x1+1)
        g(x2+1) - g(x2) =  beta(x2) gamma(x2) gamma(x2+1)

    The minus sign in the first recursion makes the right side +alpha*beta.
    """
    alpha = np.broadcast_to(np.asarray(alpha, dtype=complex), (N1 + 1,)).copy()
    phi = np.broadcast_to(np.asarray(phi, dtype=complex), (N1 + 1,)).copy()
    beta = np.broadcast_to(np.asarray(beta, dtype=complex), (N2 + 1,)).copy()
    gamma = np.broadcast_to(np.asarray(gamma, dtype=complex), (N2 + 1,)).copy()
    if np.any(phi == 0) or np.any(gamma == 0):
        raise InvalidPointError("phi and gamma must be nonzero")
    f = np.empty(N1 + 1, dtype=complex)
    g = np.empty(N2 + 1, dtype=complex)
    f[0], g[0] = f0, g0
    for i in range(N1):
        f[i + 1] = f[i] - alpha[i] * phi[i] * phi[i + 1]
    for j in range(N2):
        g[j + 1] = g[j] + beta[j] * gamma[j] * gamma[j + 1]
    num = 1 + np.outer(f, g)
    zero = np.argwhere(num == 0)
    if zero.size:
        x1, x2 = zero[0]
        raise SingularMapError(f"tau vanishes at (x1, x2) = ({x1}, {x2})", pivot=0.0, where=(int(x1), int(x2)))
    return TauField(N1, N2, num / np.outer(phi, gamma), alpha, beta, phi, gamma)


def liouville_residual(field, scaled=False):
    """max |tau(x+e1) tau(x+e2) - tau(x) tau(x+e1+e2) - alpha beta| over cells.

    With ``scaled`` each cell is divided by max(1, |both products|), which
    removes the growth of round-off with |tau|^2 on large grids.
    """
    t = field.tau
    p1 = t[1:, :-1] * t[:-1, 1:]
    p2 = t[:-1, :-1] * t[1:, 1:]
    err = np.abs(p1 - p2 - np.outer(field.alpha[:-1], field.beta[:-1]))
    if scaled:
        err = err / np.maximum(1.0, np.maximum(np.abs(p1), np.abs(p2)))
    return float(np.max(err))


@dataclass(frozen=True)
class UVLattice:
    """Cell variables on x1 = 0..N1-1, x2 = 0..N2-1."""

    u1: np.ndarray
    u2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    z1: complex
    z2: complex


def uv_from_tau(field, z1, z2):
    t = field.tau
    T = t[:-1, :-1]
    te1 = t[1:, :-1]
    te2 = t[:-1, 1:]
    d1 = z1 * T - te2
    d2 = z2 * T - te1
    for name, arr in (("tau", T), ("z1 tau - tau(x+e2)", d1)):
        bad = np.argwhere(arr == 0)
        if bad.size:
            raise SingularMapError(f"{name} vanishes at cell {tuple(bad[0])}", pivot=0.0, where=tuple(bad[0]))
    alpha = field.alpha[:-1, None]
    beta = field.beta[None, :-1]
    return UVLattice(
        u1=te2 / T,
        u2=T / te1,
        v1=beta / d1,
        v2=d2 / (z2 * alpha),
        z1=complex(z1),
        z2=complex(z2),
    )


def hamiltonian_residuals(lat):
    """Residuals of the four closed-form relations between u's and v's
    on every cell whose e1 and e2 neighbours exist."""
    z1, z2 = lat.z1, lat.z2
    a, b = lat.v1[:-1, :-1], lat.v2[:-1, :-1]
    A, B = lat.v1[1:, :-1], lat.v2[:-1, 1:]
    u1, u2 = lat.u1[:-1, :-1], lat.u2[:-1, :-1]
    U1, U2 = lat.u1[1:, :-1], lat.u2[:-1, 1:]
    res = {
        "u1": u1 - z1 * (1 - z2 * B / (z1 * a)) / (1 - z2 * b / a),
        "u2": u2 - (1 - z2 * b / a) / (1 - b / A) / z2,
        "u1_next": U1 - z1 * (1 - B / (z1 * A)) / (1 - b / A),
        "u2_next": U2 - (1 - z2 * B / (z1 * a)) / (1 - B / (z1 * A)) / z2,
    }
    return {k: float(np.max(np.abs(v))) for k, v in res.items()}


def uuuu_residual(lat):
    lhs = lat.u1[:-1, :-1] * lat.u2[:-1, :-1]
    rhs = lat.u1[1:, :-1] * lat.u2[:-1, 1:]
    return float(np.max(np.abs(lhs - rhs)))


def map_consistency_residual(lat):
    """Apply the uv map to each cell and compare with the neighbouring cells.

    The map sends (u1, v1, u2, v2)(x) to (u1, v1)(x+e1) and (u2, v2)(x+e2).
    """
    worst = 0.0
    n1, n2 = lat.u1.shape
    for x1 in range(n1 - 1):
        for x2 in range(n2 - 1):
            a, b = uv_forward(lat.u1[x1, x2], lat.v1[x1, x2], lat.z1, lat.u2[x1, x2], lat.v2[x1, x2], lat.z2)
            got = np.array([a[0], a[1], b[0], b[1]])
            want = np.array([lat.u1[x1 + 1, x2], lat.v1[x1 + 1, x2], lat.u2[x1, x2 + 1], lat.v2[x1, x2 + 1]])
            worst = max(worst, float(np.max(np.abs(got - want) / np.maximum(1, np.abs(want)))))
    return worst


def saw_block(lat, pairs, steps, offset=None):
    """Cut a rectangular (site, time) block out of the light-cone lattice.

    Columns are lattice sites 1..2*pairs+1 (the last column is the odd site
    closing the final plaquette), rows are t = 0..steps. Site 2n-1 at time t
    reads v1 at x = (n-1, t-(n-1)+offset), site 2n reads v2 at the same x.
    Returns (v, u) arrays of shape (2*pairs+1, steps+1).
    """
    n1, n2 = lat.u1.shape
    offset = pairs if offset is None else offset
    if pairs > n1 - 1 or steps + offset > n2 - 1 or offset < pairs:
        raise ValueError("block does not fit inside the lattice")
    K = 2 * pairs + 1
    v = np.empty((K, steps + 1), dtype=complex)
    u = np.empty((K, steps + 1), dtype=complex)
    for j in range(K):
        n = j // 2
        for t in range(steps + 1):
            x1, x2 = n, t - n + offset
            if j % 2 == 0:
                v[j, t], u[j, t] = lat.v1[x1, x2], lat.u1[x1, x2]
            else:
                v[j, t], u[j, t] = lat.v2[x1, x2], lat.u2[x1, x2]
    return v, u


def random_params(rng, N1, N2):
    """alpha, beta, phi, gamma with moduli in [0.5, 1] and uniform phases.

    Spread phases keep f and g bounded like random walks, so tau stays
    moderate and the Liouville residual sits near machine precision.
    """
    def seq(n):
        return rng.uniform(0.5, 1.0, n + 1) * np.exp(1j * rng.uniform(-np.pi, np.pi, n + 1))

    return seq(N1), seq(N2), seq(N1), seq(N2)
