"""Periodic chain of 2N sites driven by the classical map: Lax matrices,
discrete evolution, monodromy traces and their involutive coefficients."""

import json
from dataclasses import dataclass, field

import numpy as np

from .classical_map import (
    WeylTriple,
    canonical_form,
    kef_forward,
    random_pair,
    weyl_embed,
)
from .errors import InvalidPointError, SingularMapError
from .numsupport import GradientConfig, fd_jacobian, fit_poly_lambda2

I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class LaxSample:
    kind: str
    lam: complex
    matrix: np.ndarray


def _sqrt(k, sqrt_k):
    return np.sqrt(complex(k)) if sqrt_k is None else complex(sqrt_k)


def lax_plus(k, f, s):
    return np.array([[s, s * f], [0, 1 / s]], dtype=complex)


def lax_minus(k, e, s):
    return np.array([[1 / s, 0], [-e / s, s]], dtype=complex)


def lax_matrix(x, kind, lam=None, sqrt_k=None):
    """l+ = [[k^1/2, k^1/2 f],[0, k^-1/2]], l- = [[k^-1/2, 0],[-k^-1/2 e, k^1/2]],
    l(lam) = lam l+ - l-/lam. ``sqrt_k`` overrides the principal root."""
    k, e, f = x.as_tuple()
    if k == 0:
        raise InvalidPointError("k = 0")
    s = _sqrt(k, sqrt_k)
    if kind == "plus":
        m = lax_plus(k, f, s)
    elif kind == "minus":
        m = lax_minus(k, e, s)
    elif kind == "lambda":
        if lam is None or lam == 0:
            raise ValueError("kind='lambda' needs a nonzero lam")
        m = lam * lax_plus(k, f, s) - lax_minus(k, e, s) / lam
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return LaxSample(kind, lam, m)


@dataclass(frozen=True)
class ChainState:
    N: int
    u: np.ndarray
    v: np.ndarray
    z1: complex
    z2: complex
    u_half: np.ndarray = field(default=None)

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        v = np.asarray(self.v, dtype=complex)
        if self.N < 1 or u.shape != (2 * self.N,) or v.shape != (2 * self.N,):
            raise InvalidPointError("u and v must have length 2N")
        if np.any(u == 0) or np.any(v == 0) or self.z1 == 0 or self.z2 == 0:
            raise InvalidPointError("u, v, z must be nonzero")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "z1", complex(self.z1))
        object.__setattr__(self, "z2", complex(self.z2))
        uh = np.sqrt(u) if self.u_half is None else np.asarray(self.u_half, dtype=complex)
        object.__setattr__(self, "u_half", uh)

    def z(self, i):
        """Parameter of 0-based site i (even index = odd site)."""
        return self.z1 if i % 2 == 0 else self.z2

    def triple(self, i):
        return weyl_embed(WeylTriple(self.u[i], self.v[i], self.z(i)))

    def site_casimirs(self):
        out = []
        for i in range(2 * self.N):
            k, e, f = self.triple(i).as_tuple()
            out.append(e * f + k + 1 / k)
        return np.array(out)

    def logs(self):
        return np.column_stack([np.log(self.u), np.log(self.v)]).ravel()

    @classmethod
    def from_logs(cls, x, N, z1, z2):
        x = np.asarray(x, dtype=complex).reshape(2 * N, 2)
        return cls(N, np.exp(x[:, 0]), np.exp(x[:, 1]), z1, z2, u_half=np.exp(x[:, 0] / 2))

    def to_json(self):
        pair = lambda c: [float(np.real(c)), float(np.imag(c))]  # noqa: E731
        return {
            "N": self.N,
            "z1": pair(self.z1),
            "z2": pair(self.z2),
            "u": [pair(c) for c in self.u],
            "v": [pair(c) for c in self.v],
        }

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        c = lambda p: complex(p[0], p[1])  # noqa: E731
        return cls(int(data["N"]), [c(p) for p in data["u"]], [c(p) for p in data["v"]], c(data["z1"]), c(data["z2"]))


def random_state(rng, N, z1=None, z2=None, radius=0.5):
    """Random chain whose site pairs avoid the map's singular set."""
    if z1 is None or z2 is None:
        z1, z2 = np.exp(rng.uniform(-radius, radius, 2) + 1j * rng.uniform(-radius, radius, 2))
    u, v = [], []
    for _ in range(N):
        w1, w2 = random_pair(rng, z=(z1, z2), radius=radius)
        u += [w1.u, w2.u]
        v += [w1.v, w2.v]
    return ChainState(N, u, v, z1, z2)


def evolve_step(state):
    """One time step: the map acts on every pair (2n-1, 2n) and the odd
    output moves one pair to the right, with periodic wrap-around."""
    N, u, v, uh = state.N, state.u, state.v, state.u_half
    z1, z2 = state.z1, state.z2
    U = np.empty_like(u)
    V = np.empty_like(v)
    UH = np.empty_like(uh)
    for n in range(N):
        o, e, nxt = 2 * n, 2 * n + 1, (2 * n + 2) % (2 * N)
        g = 1 - v[o] * (z1 - u[o]) * (u[e] - 1 / z2) / (u[o] * v[e])
        if abs(g) < 1e-300 or not np.isfinite(g):
            raise SingularMapError(f"evolution pivot vanishes in cell n={n + 1}", pivot=g, where=n + 1)
        den = 1 / v[e] + (1 / v[o] - 1 / (z2 * v[e])) / u[e]
        if den == 0:
            raise SingularMapError(f"vanishing denominator in cell n={n + 1}", pivot=den, where=n + 1)
        sg = np.sqrt(g)
        U[nxt] = u[o] * g
        V[nxt] = 1 / den
        UH[nxt] = uh[o] * sg
        U[e] = u[e] / g
        V[e] = z1 * v[o] / z2 + (v[e] - v[o] / z2) * u[o]
        UH[e] = uh[e] / sg
    return ChainState(N, U, V, z1, z2, u_half=UH)


def evolve(state, steps):
    out = [state]
    for _ in range(steps):
        out.append(evolve_step(out[-1]))
    return out


def unevolve_step(state):
    """Inverse of evolve_step, using the inverse uv map on each cell."""
    from .classical_map import uv_inverse

    N, u, v = state.N, state.u, state.v
    U = np.empty_like(u)
    V = np.empty_like(v)
    for n in range(N):
        o, e, nxt = 2 * n, 2 * n + 1, (2 * n + 2) % (2 * N)
        a, b = uv_inverse(u[nxt], v[nxt], state.z1, u[e], v[e], state.z2)
        U[o], V[o] = a[0], a[1]
        U[e], V[e] = b[0], b[1]
    return ChainState(N, U, V, state.z1, state.z2)


def _site_mats(state, i):
    k, e, f = state.triple(i).as_tuple()
    s = state.u_half[i]
    return lax_plus(k, f, s), lax_minus(k, e, s)


def monodromy_trace(state, lam, which="t"):
    """t = Tr prod_n l_{2n-1}(lam) l+_{2n}; tbar = Tr prod_n l-_{2n-1} l_{2n}(lam)."""
    if lam == 0:
        raise ValueError("lam must be nonzero")
    m = I2.copy()
    for n in range(state.N):
        p1, m1 = _site_mats(state, 2 * n)
        p2, m2 = _site_mats(state, 2 * n + 1)
        if which == "t":
            m = m @ (lam * p1 - m1 / lam) @ p2
        elif which in ("tbar", "t̄"):
            m = m @ m1 @ (lam * p2 - m2 / lam)
        else:
            raise ValueError(f"unknown trace {which!r}")
    return complex(np.trace(m))


def lambda_grid(N):
    return [2.0 ** (k / (N + 1)) for k in range(N + 1)]


def im_coefficients(state):
    """Coefficients c_n of t = lam^N sum c_n lam^-2n and of tbar = lam^-N sum cbar_n lam^2n."""
    lams = lambda_grid(state.N)
    ct = fit_poly_lambda2([(l, monodromy_trace(state, l, "t")) for l in lams], state.N, state.N)
    cb = fit_poly_lambda2([(1 / l, monodromy_trace(state, l, "tbar")) for l in lams], state.N, state.N)
    return ct, cb


def chain_bracket_matrix(funcs, state, cfg=GradientConfig()):
    """Matrix of canonical brackets {F_a, F_b} for functions of a ChainState,
    with {log u_i, log v_j} = delta_ij."""
    x0 = state.logs()
    N, z1, z2 = state.N, state.z1, state.z2

    def vec(x):
        st = ChainState.from_logs(x, N, z1, z2)
        return np.array([f(st) for f in funcs])

    J = fd_jacobian(vec, x0, cfg)
    om = canonical_form(2 * N)
    return J @ om @ J.T


# The fit on lambda_grid amplifies evaluation round-off by the Vandermonde
# condition number (~1e4 at N=4), so the central step is set at the
# round-off/truncation balance for that noise level rather than at 1e-6.
IM_BRACKET_CFG = GradientConfig("central", 1e-4)


def im_brackets(state, cfg=IM_BRACKET_CFG):
    """Pairwise brackets of all fitted coefficients of t and tbar."""
    N = state.N
    funcs = []
    for which in (0, 1):
        for n in range(N + 1):
            funcs.append(lambda st, w=which, n=n: im_coefficients(st)[w][n])
    return chain_bracket_matrix(funcs, state, cfg)


def evolve_symplectic_residual(state, cfg=GradientConfig()):
    x0 = state.logs()
    N, z1, z2 = state.N, state.z1, state.z2

    def fun(x):
        st = evolve_step(ChainState.from_logs(x, N, z1, z2))
        return np.column_stack([st.u, st.v]).ravel()

    J = fd_jacobian(fun, x0, cfg) / fun(x0)[:, None]
    om = canonical_form(2 * N)
    return float(np.max(np.abs(J @ om @ J.T - om)))


def classical_r(lam):
    """r(lam) = lam r+ - r-/lam on C^2 x C^2, basis 00, 01, 10, 11."""
    rp = np.zeros((4, 4), dtype=complex)
    rm = np.zeros((4, 4), dtype=complex)
    rp[1, 1] = rp[2, 2] = -0.5
    rp[1, 2] = 1.0
    rm[1, 1] = rm[2, 2] = 0.5
    rm[2, 1] = -1.0
    return lam * rp - rm / lam


def classical_r_hat(lam):
    """Normalised r-matrix read off from lam R+ - R-/lam = (lam - 1/lam)(1 + 2 pi i b^2 rhat) + O(b^4).

    Unlike the bare combination lam r+ - r-/lam, this one satisfies the
    classical Yang-Baxter equation and governs the Lax bracket.
    """
    return (classical_r(lam) + 0.25 * (lam + 1 / lam) * np.eye(4)) / (lam - 1 / lam)


def _embed3(r, pair):
    """Place a two-site 4x4 operator on slots ``pair`` of C^2 x C^2 x C^2."""
    t = r.reshape(2, 2, 2, 2)
    full = np.zeros((2,) * 6, dtype=complex)
    a, b = pair
    c = 3 - a - b
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    for m in range(2):
                        out = [0, 0, 0]
                        inn = [0, 0, 0]
                        out[a], out[b], out[c] = i, j, m
                        inn[a], inn[b], inn[c] = k, l, m
                        full[tuple(out) + tuple(inn)] += t[i, j, k, l]
    return full.reshape(8, 8)


def cybe_residual(lam, mu, normalized=True):
    rf = classical_r_hat if normalized else classical_r
    r12 = _embed3(rf(lam), (0, 1))
    r13 = _embed3(rf(lam * mu), (0, 2))
    r23 = _embed3(rf(mu), (1, 2))
    c = lambda a, b: a @ b - b @ a  # noqa: E731
    return float(np.max(np.abs(c(r12, r13) + c(r12, r23) + c(r13, r23))))


def zcr_residuals(x1, x2, lam, s1=None, s2=None):
    """Local zero-curvature identities for one application of the map.

    Square roots of the mapped k's are taken as s1*sqrt(g) and s2/sqrt(g)
    so that the product of roots is preserved exactly.
    """
    k1, e1, f1 = x1.as_tuple()
    k2, e2, f2 = x2.as_tuple()
    s1 = _sqrt(k1, s1)
    s2 = _sqrt(k2, s2)
    (K1, E1, F1), (K2, E2, F2) = kef_forward(k1, e1, f1, k2, e2, f2)
    sg = np.sqrt(1 - e1 * f2 * k2 / k1)
    S1, S2 = s1 * sg, s2 / sg
    p1, m1 = lax_plus(k1, f1, s1), lax_minus(k1, e1, s1)
    p2, m2 = lax_plus(k2, f2, s2), lax_minus(k2, e2, s2)
    P1, M1 = lax_plus(K1, F1, S1), lax_minus(K1, E1, S1)
    P2, M2 = lax_plus(K2, F2, S2), lax_minus(K2, E2, S2)
    L = lambda p, m: lam * p - m / lam  # noqa: E731
    res = {
        "zcr_pp": p1 @ p2 - P2 @ P1,
        "zcr_mp": m1 @ p2 - P2 @ M1,
        "zcr_mm": m1 @ m2 - M2 @ M1,
        "zcr_lp": L(p1, m1) @ p2 - P2 @ L(P1, M1),
        "zcr_ml": m1 @ L(p2, m2) - L(P2, M2) @ M1,
    }
    return {k: float(np.max(np.abs(v))) for k, v in res.items()}


def sklyanin_residual(w, lam, mu, cfg=GradientConfig()):
    """max |{l(lam) (x) l(mu)} - [l(lam) (x) l(mu), rhat(lam/mu)]| on one site."""
    x0 = np.log([w.u, w.v])

    def lmat(x, la):
        u, v = np.exp(x[0]), np.exp(x[1])
        k, e, f = weyl_embed(WeylTriple(u, v, w.z)).as_tuple()
        s = np.exp(x[0] / 2)
        return la * lax_plus(k, f, s) - lax_minus(k, e, s) / la

    A = fd_jacobian(lambda x: lmat(x, lam).ravel(), x0, cfg)
    B = fd_jacobian(lambda x: lmat(x, mu).ravel(), x0, cfg)
    # {A_ij, B_kl} = dA/dlogu dB/dlogv - dA/dlogv dB/dlogu
    br = np.einsum("a,b->ab", A[:, 0], B[:, 1]) - np.einsum("a,b->ab", A[:, 1], B[:, 0])
    br = br.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    la, lb = lmat(x0, lam), lmat(x0, mu)
    prod = np.kron(la, lb)
    r = classical_r_hat(lam / mu)
    return float(np.max(np.abs(br - (prod @ r - r @ prod))))


def residual_suite(rng, samples=5, cfg=GradientConfig()):
    out = {}

    def put(name, val):
        out[name] = max(out.get(name, 0.0), val)

    for _ in range(samples):
        w1, w2 = random_pair(rng, radius=0.5)
        lam, mu = np.exp(rng.uniform(-0.5, 0.5, 2) + 1j * rng.uniform(-0.5, 0.5, 2))
        for k, v in zcr_residuals(weyl_embed(w1), weyl_embed(w2), lam).items():
            put(k, v)
        put("sklyanin", sklyanin_residual(w1, lam, mu, cfg))
        put("cybe", cybe_residual(lam, mu))
    return out

