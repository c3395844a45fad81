"""Transfer matrices, integrals of motion and the one-step evolution
operator of a periodic quantum chain of 2N spin-j sites."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .classical_lattice import lambda_grid
from .errors import DimensionError, InvalidPointError
from .numsupport import commutator, embed_op, eval_poly_lambda2, fit_poly_lambda2, max_abs, safe_inv, swap_matrix
from .quantum_rep import lax_operators, spin_rep, universal_r

MAX_DIM = 4096


@dataclass(frozen=True, eq=False)
class ChainSpace:
    """Sites 1..2N, site 1 being the leftmost Kronecker factor."""

    N: int
    site_rep: object
    max_dim: int = MAX_DIM

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise InvalidPointError("N must be a positive integer")
        if self.total_dim > self.max_dim:
            raise DimensionError(f"chain dimension {self.total_dim} exceeds {self.max_dim}")

    @property
    def sites(self):
        return 2 * self.N

    @property
    def total_dim(self):
        return self.site_rep.dim ** (2 * self.N)

    @property
    def dims(self):
        return [self.site_rep.dim] * self.sites

    @property
    def q(self):
        return self.site_rep.params.q

    def site_op(self, x, k):
        """Embed a single-site operator at 0-based site k."""
        return embed_op(x, self.dims, [k])

    def pair_op(self, x, k, l):
        return embed_op(x, self.dims, [k, l])

    def diag_power(self, weights, power):
        """q^(power * sum_k w_k H_k) as a diagonal matrix; weights per site."""
        w = self.site_rep.weights
        total = np.zeros(self.total_dim)
        for k, c in enumerate(weights):
            if c:
                total = total + c * np.kron(np.kron(np.ones(len(w) ** k), w), np.ones(len(w) ** (self.sites - k - 1)))
        return np.diag(self.q ** (power * total))


def chain_space(N, j=Fraction(1, 2), params=None, max_dim=MAX_DIM):
    rep = spin_rep(j) if params is None else spin_rep(j, params)
    return ChainSpace(N, rep, max_dim)


def _blocks(L, space, k):
    d = space.site_rep.dim
    return [[space.site_op(L[a * d:(a + 1) * d, b * d:(b + 1) * d], k) for b in range(2)] for a in range(2)]


def _mm(a, b):
    return [[a[i][0] @ b[0][j] + a[i][1] @ b[1][j] for j in range(2)] for i in range(2)]


def _lin(a, b, x, y):
    return [[x * a[i][j] + y * b[i][j] for j in range(2)] for i in range(2)]


class _LaxCache:
    def __init__(self, space):
        self.space = space
        lp, lm = lax_operators(space.site_rep)
        self.plus = [_blocks(lp, space, k) for k in range(space.sites)]
        self.minus = [_blocks(lm, space, k) for k in range(space.sites)]

    def full(self, k, lam):
        return _lin(self.plus[k], self.minus[k], lam, -1 / lam)


_CACHE = {}


def _lax(space):
    key = id(space)
    hit = _CACHE.get(key)
    if hit is None or hit.space is not space:
        hit = _LaxCache(space)
        _CACHE.clear()
        _CACHE[key] = hit
    return hit


def transfer_matrix(space, lam, which="T"):
    """T = Tr prod_n L_{2n-1}(lam) L+_{2n};  Tbar = Tr prod_n L-_{2n-1} L_{2n}(lam)."""
    lam = complex(lam)
    if lam == 0:
        raise InvalidPointError("spectral parameter must be nonzero")
    if which not in ("T", "Tbar"):
        raise InvalidPointError("which must be 'T' or 'Tbar'")
    lx = _lax(space)
    eye = np.eye(space.total_dim, dtype=complex)
    zero = np.zeros_like(eye)
    m = [[eye, zero], [zero, eye]]
    for n in range(space.N):
        o, e = 2 * n, 2 * n + 1
        if which == "T":
            m = _mm(_mm(m, lx.full(o, lam)), lx.plus[e])
        else:
            m = _mm(_mm(m, lx.minus[o]), lx.full(e, lam))
    return m[0][0] + m[1][1]


# -- integrals of motion ------------------------------------------------------


def vertex_operators(space):
    """V+-_k and Vbar+-_k for 1-based k, returned as dicts keyed by k."""
    q = space.q
    S = space.sites
    rep = space.site_rep
    vp, vm, vbp, vbm = {}, {}, {}, {}
    for k in range(1, S + 1):
        upto = [1 if i < k else 0 for i in range(S)]
        frm = [1 if i >= k - 1 else 0 for i in range(S)]
        e = space.site_op(rep.E, k - 1)
        f = space.site_op(rep.F, k - 1)
        vp[k] = e @ space.diag_power(upto, -1) / q
        vm[k] = f @ space.diag_power(upto, 1) / q
        vbp[k] = e @ space.diag_power(frm, -1) / q
        vbm[k] = f @ space.diag_power(frm, 1) / q
    return vp, vm, vbp, vbm


def closed_form_g0(space):
    half = [0.5] * space.sites
    return space.diag_power(half, 1) + space.diag_power(half, -1)


def closed_form_g1(space):
    """G1 and Gbar1 as ordered sums of vertex-operator products."""
    q = space.q
    S = space.sites
    vp, vm, vbp, vbm = vertex_operators(space)
    half = [0.5] * S
    qP, qmP = space.diag_power(half, 1), space.diag_power(half, -1)
    zero = np.zeros((space.total_dim, space.total_dim), dtype=complex)

    def shifted(k, sign):
        w = [0.5] * S
        w[k - 1] -= 1
        return space.diag_power(w, sign)

    g1 = zero.copy()
    gb1 = zero.copy()
    for n in range(1, space.N + 1):
        k = 2 * n - 1
        term = shifted(k, 1) + shifted(k, -1)
        term = term - q * qP @ sum((vm[l] @ vp[k] for l in range(1, k)), zero)
        term = term - q * qmP @ sum((vp[k] @ vm[l] for l in range(k + 1, S + 1)), zero)
        g1 = g1 - term
        k = 2 * n
        term = shifted(k, 1) + shifted(k, -1)
        term = term - qP @ sum((vbp[l] @ vbm[k] for l in range(1, k)), zero) / q
        term = term - qmP @ sum((vbm[k] @ vbp[l] for l in range(k + 1, S + 1)), zero) / q
        gb1 = gb1 - term
    return g1, gb1


@dataclass
class IMResult:
    G: list
    Gbar: list
    residuals: dict


def im_operators(space, check_lam=1.37 - 0.21j):
    """Fit T = lam^N sum G_n lam^-2n and Tbar = lam^-N sum Gbar_n lam^2n,
    then compare with the closed forms.

    The lowest power of lam in Tbar collects N factors -1/lam, so the
    barred coefficients enter the identities with the sign (-1)^N:
    (-1)^N Gbar_0 = G_0, G_N = (-1)^N Gbar_N, and likewise for Gbar_1.
    """
    N = space.N
    lams = lambda_grid(N)
    G = fit_poly_lambda2([(l, transfer_matrix(space, l, "T")) for l in lams], N, N)
    Gb = fit_poly_lambda2([(1 / l, transfer_matrix(space, l, "Tbar")) for l in lams], N, N)
    g0 = closed_form_g0(space)
    g1, gb1 = closed_form_g1(space)
    sign = (-1) ** N
    res = {
        "fit_T": max_abs(eval_poly_lambda2(G, check_lam, N) - transfer_matrix(space, check_lam, "T")),
        "fit_Tbar": max_abs(eval_poly_lambda2(Gb, 1 / check_lam, N) - transfer_matrix(space, check_lam, "Tbar")),
        "g0": max_abs(G[0] - g0),
        "gbar0": max_abs(sign * Gb[0] - g0),
        "gN_equal": max_abs(G[N] - sign * Gb[N]),
        "g1": max_abs(G[1] - g1),
        "gbar1": max_abs(sign * Gb[1] - gb1),
    }
    allg = G + Gb
    res["commute"] = max(max_abs(commutator(a, b)) for a in allg for b in allg)
    return IMResult(G, Gb, res)


# -- evolution ---------------------------------------------------------------


def shift_matrix(space):
    """Permutation sending the operator at site n to site n+1 (cyclically)."""
    d = space.site_rep.dim
    S = space.sites
    D = space.total_dim
    idx = np.arange(D)
    digits = [(idx // d ** (S - 1 - i)) % d for i in range(S)]
    new = [digits[(i - 1) % S] for i in range(S)]
    target = sum(new[i] * d ** (S - 1 - i) for i in range(S))
    m = np.zeros((D, D))
    m[target, idx] = 1.0
    return m


def evolution_matrix(space, literal=False):
    """U with X -> U X U^-1 the one-step evolution.

    U = prod_n (R P)_{2n-1,2n} . Sigma, with Sigma the one-site cyclic shift.
    ``literal`` builds Sigma . prod_n (P R) instead, the ordering obtained
    by reading the composition of maps as a product of conjugations.
    """
    rep = space.site_rep
    d = rep.dim
    R = universal_r(rep, rep)
    P = swap_matrix(d, d)
    local = P @ R if literal else R @ P
    prod = np.eye(space.total_dim, dtype=complex)
    for n in range(space.N):
        prod = prod @ space.pair_op(local, 2 * n, 2 * n + 1)
    sh = shift_matrix(space)
    return sh @ prod if literal else prod @ sh


def _local_zcr(rep):
    """ZCR and LLR3 on a two-site space with the mapped L-operators."""
    d = rep.dim
    dims = [d, d]
    R = universal_r(rep, rep)
    Ri = safe_inv(R)
    lp, lm = lax_operators(rep)

    def blocks(L, k, conj=False):
        out = [[embed_op(L[a * d:(a + 1) * d, b * d:(b + 1) * d], dims, [k]) for b in range(2)] for a in range(2)]
        if conj:
            out = [[R @ x @ Ri for x in row] for row in out]
        return out

    def diff(a, b):
        return max(max_abs(a[i][j] - b[i][j]) for i in range(2) for j in range(2))

    P1, P2 = blocks(lp, 0), blocks(lp, 1)
    M1, M2 = blocks(lm, 0), blocks(lm, 1)
    tP1, tP2 = blocks(lp, 0, True), blocks(lp, 1, True)
    tM1, tM2 = blocks(lm, 0, True), blocks(lm, 1, True)
    lam = 1.23 - 0.61j
    L1 = _lin(P1, M1, lam, -1 / lam)
    L2 = _lin(P2, M2, lam, -1 / lam)
    tL1 = _lin(tP1, tM1, lam, -1 / lam)
    tL2 = _lin(tP2, tM2, lam, -1 / lam)
    conj21 = [[R @ x @ Ri for x in row] for row in _mm(P2, P1)]
    return {
        "llr3": diff(_mm(P1, P2), conj21),
        "zcr_pp": diff(_mm(P1, P2), _mm(tP2, tP1)),
        "zcr_mp": diff(_mm(M1, P2), _mm(tP2, tM1)),
        "zcr_mm": diff(_mm(M1, M2), _mm(tM2, tM1)),
        "zcr2_a": diff(_mm(L1, P2), _mm(tP2, tL1)),
        "zcr2_b": diff(_mm(M1, L2), _mm(tL2, tM1)),
    }


def evolution_invariance(space, lams=None):
    """U-invariance of T and Tbar, local zero-curvature identities, and the
    sitewise algebra relations of the evolved generators.

    ``u_invariance_literal`` uses the alternative ordering of
    ``evolution_matrix(literal=True)`` and is a diagnostic.
    """
    if lams is None:
        lams = [1.1 + 0.3j, 0.7 - 0.5j, 1.9 + 0.1j, -0.6 + 1.2j, 0.45 + 0.2j]
    U = evolution_matrix(space)
    Ui = safe_inv(U)
    Ul = evolution_matrix(space, literal=True)
    Uli = safe_inv(Ul)
    res = {"u_invariance_T": 0.0, "u_invariance_Tbar": 0.0, "u_invariance_literal": 0.0}
    for lam in lams:
        T = transfer_matrix(space, lam, "T")
        Tb = transfer_matrix(space, lam, "Tbar")
        res["u_invariance_T"] = max(res["u_invariance_T"], max_abs(U @ T @ Ui - T))
        res["u_invariance_Tbar"] = max(res["u_invariance_Tbar"], max_abs(U @ Tb @ Ui - Tb))
        res["u_invariance_literal"] = max(res["u_invariance_literal"], max_abs(Ul @ T @ Uli - T))
    res.update(_local_zcr(space.site_rep))
    q = space.q
    rep = space.site_rep
    evolved = [[U @ space.site_op(x, k) @ Ui for x in rep.generators] for k in range(space.sites)]
    worst = 0.0
    for k, (K, E, F) in enumerate(evolved):
        Ki = safe_inv(K)
        worst = max(
            worst,
            max_abs(K @ E - q * q * E @ K),
            max_abs(K @ F - F @ K / (q * q)),
            max_abs(E @ F - F @ E - (q - 1 / q) * (K - Ki)),
        )
        for other in evolved[k + 1:]:
            for a in (K, E, F):
                for b in other:
                    worst = max(worst, max_abs(commutator(a, b)))
    res["sitewise_relations"] = worst
    return res


def evolution_norm_ratio(space):
    """||U||_2 ||U^-1||_2, reported for information only."""
    U = evolution_matrix(space)
    return float(np.linalg.norm(U, 2) * np.linalg.norm(safe_inv(U), 2))


def im_spectrum(G):
    """Eigenvalues sorted by (real, imag) for regression snapshots."""
    ev = np.linalg.eigvals(G)
    return ev[np.lexsort((ev.imag.round(12), ev.real.round(12)))]
