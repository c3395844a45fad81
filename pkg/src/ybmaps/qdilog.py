"""Non-compact quantum dilogarithm, the factorized R-matrix kernel built from
it, its difference equations, quasiclassical limits and star-triangle checks."""

import cmath
import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import newton

from .action import LagrangianParams, lagrangian_density, lam_fn, lambar_fn
from .errors import InvalidPointError, QuadratureError

DEFAULT_B = 0.6 * cmath.exp(1j * math.pi / 10)
TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class DilogParams:
    b: complex = DEFAULT_B

    def __post_init__(self):
        b = complex(self.b)
        object.__setattr__(self, "b", b)
        if not (b * b).imag > 0:
            raise InvalidPointError(f"need Im(b^2) > 0, got b = {b}")
        if not abs(b) < 1:
            raise InvalidPointError(f"need |b| < 1, got |b| = {abs(b)}")

    @property
    def eta(self):
        return (self.b + 1 / self.b) / 2

    @property
    def q(self):
        return cmath.exp(1j * math.pi * self.b**2)


@dataclass(frozen=True)
class QuadratureBudget:
    """Gauss-Legendre panels on [r0, L] plus a semicircle of radius r0 over w = 0.

    ``tail`` is the exponent at which the integrand envelope is cut, e^-42 ~ 6e-19.
    """

    nodes: int = 40
    tail: float = 42.0
    max_panel: float = 0.5
    chunk: int = 64


DEFAULT_BUDGET = QuadratureBudget()


@lru_cache(maxsize=8)
def _gl(n):
    return leggauss(n)


def _contour_integral(z, p, aux, budget):
    """int_{R+i0} e^{-2izw} / (w sinh(bw) sinh(w/b) [cosh(2 eta w)]) dw / i ... folded to w > 0.

    The odd part of the integrand cancels the pole at w = 0 except on the
    semicircle, which is integrated directly at radius r0.
    """
    b, eta = p.b, p.eta
    z = np.asarray(z, dtype=complex)
    decay = 2 * eta.real * (2 if aux else 1)
    rate = decay - 2 * np.max(np.abs(z.imag)) if z.size else decay
    if rate <= 1e-3 * decay:
        raise QuadratureError(f"|Im z| too large for direct quadrature (rate {rate:.3g})")
    radii = [math.pi * abs(b), math.pi / abs(b)] + ([math.pi / (4 * abs(eta))] if aux else [])
    zmax = np.max(np.abs(z)) if z.size else 0.0
    # e^{-2izw} on the semicircle grows like e^{2|z| r0}; keep that bounded
    r0 = 0.5 * min(radii + [2.0 / (zmax + 1)])
    L = r0 + budget.tail / rate

    def den(w):
        d = w * np.sinh(b * w) * np.sinh(w / b)
        return d * np.cosh(2 * eta * w) if aux else d

    x, wts = _gl(budget.nodes)
    h = min(budget.max_panel, abs(b), 1 / abs(b), 3 / (zmax + 1))
    npan = int(math.ceil((L - r0) / h))
    edges = np.linspace(r0, L, npan + 1)
    a, c = edges[:-1, None], edges[1:, None]
    u = ((c - a) / 2 * x + (a + c) / 2).ravel()
    wu = ((c - a) / 2 * wts).ravel() / den(u)
    th = (x + 1) * math.pi / 2
    w = r0 * np.exp(1j * th)
    ws = -1j * wts * math.pi / 2 * w / den(w)
    phase = np.exp(-2j * np.outer(z, u))
    real = (phase - 1 / phase) @ wu
    semi = np.exp(-2j * np.outer(z, w)) @ ws
    return real + semi


def _integral_chunked(z, p, aux, budget):
    z = np.asarray(z, dtype=complex).ravel()
    out = np.empty(z.shape, dtype=complex)
    order = np.argsort(np.abs(z))
    for k in range(0, z.size, budget.chunk):
        idx = order[k:k + budget.chunk]
        out[idx] = _contour_integral(z[idx], p, aux, budget)
    return out


def log_phi(z, p=DilogParams(), budget=DEFAULT_BUDGET):
    """log of the non-compact quantum dilogarithm, any Im z.

    Points outside the band |Im z| <= 0.6 Re(eta) are moved into it with the
    difference equation phi(z - ib/2) / phi(z + ib/2) = 1 + e^{2 pi b z}.
    The result is a sum of principal logs, so it is defined modulo 2 pi i.
    """
    z0 = np.asarray(z, dtype=complex)
    zz = z0.ravel().copy()
    b = p.b
    band = 0.4 * p.eta.real
    acc = np.zeros(zz.shape, dtype=complex)
    for _ in range(10000):
        up = zz.imag > band
        dn = zz.imag < -band
        if not (up.any() or dn.any()):
            break
        zu = zz[up]
        acc[up] -= np.log1p(np.exp(2 * np.pi * b * (zu - 0.5j * b)))
        zz[up] = zu - 1j * b
        zd = zz[dn]
        acc[dn] += np.log1p(np.exp(2 * np.pi * b * (zd + 0.5j * b)))
        zz[dn] = zd + 1j * b
    else:
        raise QuadratureError("strip shifting did not terminate")
    out = acc + _integral_chunked(zz, p, False, budget) / 4
    return out.reshape(z0.shape) if z0.shape else complex(out[0])


@lru_cache(maxsize=65536)
def _log_phi_cached(zr, zi, br, bi):
    return log_phi(complex(zr, zi), DilogParams(complex(br, bi)))


def phi(z, p=DilogParams()):
    """Scalar arguments go through a memo keyed on values rounded to 1e-14."""
    if np.ndim(z) == 0:
        z = complex(z)
        r = lambda x: round(x, 14)  # noqa: E731
        return cmath.exp(_log_phi_cached(r(z.real), r(z.imag), r(p.b.real), r(p.b.imag)))
    return np.exp(log_phi(z, p))


def log_aux_phi(z, p=DilogParams(), budget=DEFAULT_BUDGET):
    """log of the cosh-weighted companion function; valid for |Im z| < 2 Re(eta)."""
    z0 = np.asarray(z, dtype=complex)
    out = _integral_chunked(z0, p, True, budget) / 8
    return out.reshape(z0.shape) if z0.shape else complex(out[0])


def aux_phi(z, p=DilogParams()):
    return np.exp(log_aux_phi(z, p))


def phi_inversion_rhs(z, p=DilogParams()):
    return np.exp(1j * np.pi * np.asarray(z) ** 2 - 1j * np.pi * (1 - 2 * p.eta**2) / 6)


def aux_phi_inversion_rhs(z, p=DilogParams()):
    return np.exp(1j * np.pi * np.asarray(z) ** 2 / 2 - 1j * np.pi * (1 - 8 * p.eta**2) / 12)


def _log1p_exp(y):
    """log(1 + e^y) without overflow, modulo 2 pi i."""
    big = y.real > 30
    safe = np.where(big, -y, y)
    v = np.log1p(np.exp(safe))
    return np.where(big, y + v, v)


def log_phi_product(z, p=DilogParams(), terms=None):
    """Independent evaluation through the q-Pochhammer product formula.

    phi(z) = (-q e^{2 pi b z}; q^2)_inf / (-qt e^{2 pi z / b}; qt^2)_inf with
    q = e^{i pi b^2}, qt = e^{-i pi / b^2}; needs |q| < 1, i.e. Im b^2 > 0.
    """
    b = p.b
    q = cmath.exp(1j * math.pi * b * b)
    qt = cmath.exp(-1j * math.pi / (b * b))
    z = np.asarray(z, dtype=complex)
    if terms is None:
        # enough factors that |q|^{2k} e^{2 pi Re(bz)} reaches 1e-18
        reach = 2 * math.pi * max(np.max(np.abs(b * z)), np.max(np.abs(z / b))) + 42
        terms = int(reach / (-2 * math.log(max(abs(q), abs(qt))))) + 10
    k = np.arange(terms)
    lx = 2 * np.pi * b * z[..., None] + (2 * k + 1) * (1j * np.pi * b * b)
    ly = 2 * np.pi * z[..., None] / b + (2 * k + 1) * (-1j * np.pi / (b * b))
    num = _log1p_exp(lx).sum(-1)
    den = _log1p_exp(ly).sum(-1)
    return num - den


# -- kernel functions ---------------------------------------------------------

KINDS = ("V", "Vbar", "Vbar_star", "W", "Wbar")


def log_f_norm(alpha, p=DilogParams()):
    return 1j * np.pi * alpha**2 + 1j * np.pi * (1 - 8 * p.eta**2) / 24 + log_aux_phi(2j * alpha, p)


def log_kernel(kind, alpha, s, p=DilogParams()):
    s = np.asarray(s, dtype=complex)
    eta = p.eta
    if kind == "V":
        return 1j * np.pi / 8 - 1j * np.pi * s**2 + log_phi(1j * alpha - s, p)
    if kind == "Vbar":
        return -1j * np.pi / 8 + 1j * np.pi * s**2 - log_phi(1j * alpha - 1j * eta - s, p)
    if kind == "Vbar_star":
        return 1j * np.pi / 8 - 1j * np.pi * s**2 + log_phi(1j * eta + 1j * alpha - s, p)
    if kind == "W":
        return (
            -log_f_norm(alpha, p)
            + 2 * np.pi * alpha * s
            + log_phi(s + 1j * alpha, p)
            - log_phi(s - 1j * alpha, p)
        )
    if kind == "Wbar":
        return log_kernel("W", eta - alpha, s, p)
    raise ValueError(f"unknown kernel kind {kind!r}; expected one of {KINDS}")


def kernel_funcs(kind, alpha, s, p=DilogParams()):
    return np.exp(log_kernel(kind, alpha, s, p))


@dataclass(frozen=True)
class KernelPoint:
    s1: complex
    s2: complex
    s1p: complex
    s2p: complex
    a1: complex
    a2: complex
    b1: complex
    b2: complex

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def s(self):
        return (self.s1, self.s2, self.s1p, self.s2p)

    def check_strip(self, p):
        bound = p.b.real
        for name, v in zip(("s1", "s2", "s1p", "s2p"), self.s):
            if abs(v.imag) > bound:
                raise InvalidPointError(f"{name} = {v} lies outside |Im s| <= Re b = {bound:.4g}")

    def shifted(self, **kw):
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        for k, v in kw.items():
            d[k] = d[k] + v
        return KernelPoint(**d)


def z_values(pt, p):
    """z_i = -e^{2 pi i b (alpha_i - beta_i)}."""
    b = p.b
    return (-cmath.exp(2j * math.pi * b * (pt.a1 - pt.b1)), -cmath.exp(2j * math.pi * b * (pt.a2 - pt.b2)))


def log_r_kernel(pt, p=DilogParams(), inverse=False):
    """log <s1, s2 | R | s1', s2'> (or of R^-1), modulo 2 pi i and up to normalization."""
    d21, d21p = pt.s2 - pt.s1, pt.s2p - pt.s1p
    x1, x2 = pt.s2p - pt.s1, pt.s2 - pt.s1p
    lv = log_kernel("V", pt.b1 - pt.a2, d21, p) + log_kernel("V", pt.a1 - pt.b2, d21p, p)
    if inverse:
        return (
            log_kernel("Vbar_star", pt.a1 - pt.a2, x1, p)
            + log_kernel("Vbar_star", pt.b1 - pt.b2, x2, p)
            - lv
        )
    return lv + log_kernel("Vbar", pt.a1 - pt.a2, x1, p) + log_kernel("Vbar", pt.b1 - pt.b2, x2, p)


def r_kernel(pt, p=DilogParams(), inverse=False, strict=True):
    if strict:
        pt.check_strip(p)
    return cmath.exp(log_r_kernel(pt, p, inverse))


def recurrence_residuals(pt, p=DilogParams()):
    """Relative residuals of the four first-order difference equations of the
    kernel under s1 -> s1 + ib, s2 -> s2 - ib, s1' -> s1' + ib, s2' -> s2' - ib."""
    b, q = p.b, p.q
    z1, z2 = z_values(pt, p)

    def v(s, beta):
        return cmath.exp(2 * math.pi * b * (s + 1j * beta))

    v1, v2 = v(pt.s1, pt.b1), v(pt.s2, pt.b2)
    w1, w2 = v(pt.s1p, pt.b1), v(pt.s2p, pt.b2)
    base = log_r_kernel(pt, p)
    ib = 1j * b
    want = {
        "s1": (pt.shifted(s1=ib), z1 * (1 - z2 * w2 / (z1 * v1)) / (q * (1 - z2 * v2 / (q * v1)))),
        "s2": (pt.shifted(s2=-ib), z2 * (1 - v2 / w1) / (q * (1 - z2 * v2 / (q * v1)))),
        "s1p": (pt.shifted(s1p=ib), (1 - v2 / w1) / (q * z1 * (1 - w2 / (q * z1 * w1)))),
        "s2p": (pt.shifted(s2p=-ib), (1 - z2 * w2 / (z1 * v1)) / (q * z2 * (1 - w2 / (q * z1 * w1)))),
    }
    out = {}
    for name, (shifted, rhs) in want.items():
        ratio = cmath.exp(log_r_kernel(shifted, p) - base)
        out[name] = abs(ratio / rhs - 1)
    return out


def random_kernel_point(rng, p=DilogParams(), s_real=1.0, param_scale=0.2):
    """Sample well inside |Im s| < Re(b)/2 with small representation parameters."""
    im = 0.45 * p.b.real
    s = rng.uniform(-s_real, s_real, 4) + 1j * rng.uniform(-im, im, 4)
    a = rng.uniform(-param_scale, param_scale, 4) + 1j * rng.uniform(-param_scale / 2, param_scale / 2, 4)
    return KernelPoint(*s, *a)


def recurrence_suite(rng, p=DilogParams(), points=50):
    worst = {k: 0.0 for k in ("s1", "s2", "s1p", "s2p")}
    for _ in range(points):
        res = recurrence_residuals(random_kernel_point(rng, p), p)
        for k, v in res.items():
            worst[k] = max(worst[k], v)
    return worst


# -- identities of phi ----------------------------------------------------------


def functional_equation_residual(zs, p=DilogParams()):
    zs = np.asarray(zs, dtype=complex)
    lhs = log_phi(zs - 0.5j * p.b, p) - log_phi(zs + 0.5j * p.b, p)
    return float(np.max(np.abs(np.exp(lhs) / (1 + np.exp(2 * np.pi * p.b * zs)) - 1)))


def inversion_residuals(zs, p=DilogParams()):
    zs = np.asarray(zs, dtype=complex)
    a = np.exp(log_phi(zs, p) + log_phi(-zs, p)) / phi_inversion_rhs(zs, p) - 1
    c = np.exp(log_aux_phi(zs, p) + log_aux_phi(-zs, p)) / aux_phi_inversion_rhs(zs, p) - 1
    return {"phi": float(np.max(np.abs(a))), "aux_phi": float(np.max(np.abs(c)))}


def w_symmetry_residual(alpha, ss, p=DilogParams()):
    ss = np.asarray(ss, dtype=complex)
    return float(np.max(np.abs(kernel_funcs("W", alpha, ss, p) - kernel_funcs("W", alpha, -ss, p))))


def _rotated_line(theta, t_max, panel):
    x, w = _gl(40)
    n = int(math.ceil(2 * t_max / panel))
    edges = np.linspace(-t_max, t_max, n + 1)
    a, c = edges[:-1, None], edges[1:, None]
    t = ((c - a) / 2 * x + (a + c) / 2).ravel()
    wt = ((c - a) / 2 * w).ravel()
    rot = cmath.exp(-1j * theta)
    return t * rot, wt * rot


def fourier_duality_residual(alpha, xs, p=DilogParams(), theta=0.25, tol_tail=1e-10, t_max=8.0, panel=0.25):
    """|int e^{2 pi i s x} V_alpha(s) ds - Vbar_alpha(x)| along s = t e^{-i theta}.

    The rotation turns e^{-i pi s^2} into a decaying Gaussian on one side; the
    range grows by half until both ends of the integrand fall below ``tol_tail``.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=complex))
    for _ in range(6):
        s, ws = _rotated_line(theta, t_max, panel)
        lv = log_kernel("V", alpha, s, p)
        vals = np.exp(2j * np.pi * np.outer(xs, s) + lv[None, :])
        ends = np.max(np.abs(vals[:, [0, -1]]))
        if ends < tol_tail * max(1.0, np.max(np.abs(vals))):
            break
        t_max *= 1.5
    else:
        raise QuadratureError(f"Fourier integrand not decayed at |t| = {t_max / 1.5:.3g}")
    got = vals @ ws
    want = kernel_funcs("Vbar", alpha, xs, p)
    return float(np.max(np.abs(got - want)))


# -- quasiclassical limit -----------------------------------------------------

QC_B_VALUES = tuple(m * cmath.exp(1j * math.pi / 8) for m in (0.25, 0.15, 0.1))


@dataclass(frozen=True)
class ScaledPoint:
    """Classical variables held fixed while b -> 0: sigma = 2 pi b s, a = -2 pi i b alpha."""

    a: complex = 0.3 + 0.2j
    sigma: complex = -0.4 + 0.1j
    sigmas: tuple = (0.1, 0.5, -0.2, 0.35)
    params: tuple = (0.3 + 0.1j, -0.2 + 0.15j, 0.1 - 0.1j, -0.25 + 0.05j)


def _to_quantum(x, b):
    return x / (2 * math.pi * b)


def _to_rep(a, b):
    return 1j * a / (2 * math.pi * b)


def quasiclassical_residual(b_values=QC_B_VALUES, pt=ScaledPoint()):
    """Error of (2 pi b^2 / i) log f against its classical limit for V, Vbar and the kernel.

    Returns rows (b, err_V, err_Vbar, err_kernel) and a flag for strict decrease
    of every column. The kernel sigmas are taken along the phase of b so the
    quantum arguments stay real.
    """
    rows = []
    for bv in b_values:
        p = DilogParams(bv)
        k = 2 * math.pi * bv * bv / 1j
        alpha = _to_rep(pt.a, bv)
        s = _to_quantum(pt.sigma, bv)
        ev = abs(k * log_kernel("V", alpha, s, p) - lam_fn(pt.a, pt.sigma))
        evb = abs(k * log_kernel("Vbar", alpha, s, p) - lambar_fn(pt.a, pt.sigma))
        ph = bv / abs(bv)
        sig = [x * ph for x in pt.sigmas]
        a1, a2, b1, b2 = pt.params
        kp = KernelPoint(*[_to_quantum(x, bv) for x in sig], *[_to_rep(x, bv) for x in (a1, a2, b1, b2)])
        lk = k * log_r_kernel(kp, p)
        ek = abs(lk - lagrangian_density(*sig, LagrangianParams(a1, a2, b1, b2)))
        rows.append((bv, ev, evb, ek))
    cols = np.array([r[1:] for r in rows])
    decreasing = bool(np.all(np.diff(cols, axis=0) < 0))
    return rows, decreasing


# -- three-leg form and star-triangle relations ---------------------------------


def _three_leg_ratio(sig, a, b, c, al, be):
    num = (cmath.exp(sig - a) - cmath.exp(-al)) * (cmath.exp(sig - b) - cmath.exp(-be))
    den = (cmath.exp(sig - c) + cmath.exp(-al - be)) * (1 - cmath.exp(sig - b - be))
    return num / den


def three_leg_log(sig, a, b, c, al, be):
    """Derivative in sigma of the classical star phase, reduced modulo 2 pi i."""
    x = (
        cmath.log(cmath.exp(sig - a) - cmath.exp(-al))
        - cmath.log(cmath.exp(sig - c) + cmath.exp(-al - be))
        + cmath.log((cmath.exp(sig - b) - cmath.exp(-be)) / (1 - cmath.exp(sig - b - be)))
    )
    n = round(x.imag / (2 * math.pi))
    return x - TWO_PI_I * n


def three_leg_closed_root(a, b, c, al, be):
    """e^sigma solving the exponentiated stationarity condition; the constant terms cancel."""
    ea, eb, ec = cmath.exp(-a), cmath.exp(-b), cmath.exp(-c)
    lin = ea * cmath.exp(-be) + cmath.exp(-al) * eb + ec - cmath.exp(-al - 2 * be) * eb
    quad = ea * eb + eb * ec * cmath.exp(-be)
    return lin / quad


def _three_leg_slope(sig, a, b, c, al, be):
    """d/dsigma of three_leg_log."""
    ea, eb, ec = cmath.exp(sig - a), cmath.exp(sig - b), cmath.exp(sig - c)
    ebb = cmath.exp(sig - b - be)
    return ea / (ea - cmath.exp(-al)) - ec / (ec + cmath.exp(-al - be)) + eb / (eb - cmath.exp(-be)) + ebb / (1 - ebb)


def _cleared(x, a, b, c, al, be):
    # stationarity with denominators cleared, as a function of x = e^sigma
    return (x * cmath.exp(-a) - cmath.exp(-al)) * (x * cmath.exp(-b) - cmath.exp(-be)) - (
        x * cmath.exp(-c) + cmath.exp(-al - be)
    ) * (1 - x * cmath.exp(-b - be))


def _cleared_slope(x, a, b, c, al, be):
    ea, eb, ec = cmath.exp(-a), cmath.exp(-b), cmath.exp(-c)
    ebb = cmath.exp(-b - be)
    return (
        ea * (x * eb - cmath.exp(-be))
        + eb * (x * ea - cmath.exp(-al))
        - ec * (1 - x * ebb)
        + ebb * (x * ec + cmath.exp(-al - be))
    )


def three_leg_residual(a, b, c, al, be, radius=10.0, directions=8):
    """Newton on the stationarity condition of the classical star phase, then
    report the three-leg residual at the root and the distance to the
    closed-form root (both modulo 2 pi i).

    In x = e^sigma the cleared condition is a quadratic with a spurious root
    at x = 0 (sigma -> -inf). Newton basins of a quadratic are half-planes, so
    starts on a large ring reach the nonzero root from some direction.
    """
    args = (a, b, c, al, be)
    root = None
    for k in range(directions):
        x0 = radius * cmath.exp(2j * math.pi * (k + 0.5) / directions)
        try:
            x = newton(_cleared, x0, fprime=_cleared_slope, args=args, tol=1e-15, maxiter=100)
        except (RuntimeError, OverflowError, ZeroDivisionError):
            continue
        if abs(x) > 1e-8:
            cand = cmath.log(x)
            if abs(three_leg_log(cand, *args)) < 1e-10:
                root = cand
                break
    if root is None:
        raise QuadratureError("no stationary point found from the ring of starts")
    closed = cmath.log(three_leg_closed_root(*args))
    gap = root - closed
    gap -= TWO_PI_I * round(gap.imag / (2 * math.pi))
    return {"three_leg": abs(three_leg_log(root, *args)), "closed_root": abs(gap), "sigma": root}


@dataclass(frozen=True)
class StarResult:
    which: str
    residual: float
    converged: bool
    detail: str = ""


def _real_line(t_max, panel):
    return _rotated_line(0.0, t_max, panel)


def _star_sides(which, a, b, c, al, be, p, sig):
    if which == "fvstr":
        lhs = (
            log_kernel("Wbar", al, a - sig, p)
            + log_kernel("W", al + be, c - sig, p)
            + log_kernel("Wbar", be, b - sig, p)
        )
        rhs = (
            log_kernel("W", be, a - c, p)
            + log_kernel("Wbar", al + be, a - b, p)
            + log_kernel("W", al, c - b, p)
        )
    elif which == "str1":
        lhs = (
            log_kernel("Vbar", al, a - sig, p)
            + log_kernel("V", al + be, c - sig, p)
            + log_kernel("Wbar", be, b - sig, p)
        )
        rhs = (
            log_kernel("W", be, a - c, p)
            + log_kernel("Vbar", al + be, a - b, p)
            + log_kernel("V", al, c - b, p)
        )
    elif which == "str2":
        lhs = (
            log_kernel("Vbar", al, sig - a, p)
            + log_kernel("V", al + be, sig - c, p)
            + log_kernel("Wbar", be, b - sig, p)
        )
        rhs = (
            log_kernel("W", be, a - c, p)
            + log_kernel("Vbar", al + be, b - a, p)
            + log_kernel("V", al, b - c, p)
        )
    else:
        raise ValueError(f"unknown star-triangle relation {which!r}")
    return lhs, rhs


def star_triangle_residual(which, params, p=DilogParams(), t_max=8.0, panel=0.5, tol_tail=1e-9, max_growth=3):
    """|LHS/RHS - 1| for an integral star-triangle identity, or the three-leg
    residual for ``which == 'three_leg'``.

    Integrals run along the real axis; the range grows by half until the
    integrand has decayed at both ends. If it never does, the result is returned with
    ``converged=False`` so callers can skip instead of passing.
    """
    if which == "three_leg":
        res = three_leg_residual(*params)
        return StarResult(which, max(res["three_leg"], res["closed_root"]), True)
    a, b, c, al, be = params
    try:
        for _ in range(max_growth + 1):
            sig, ws = _real_line(t_max, panel)
            lhs, rhs = _star_sides(which, a, b, c, al, be, p, sig)
            vals = np.exp(lhs)
            scale = np.max(np.abs(vals))
            if np.max(np.abs(vals[[0, -1]])) < tol_tail * scale:
                break
            t_max *= 1.5
        else:
            return StarResult(which, float("nan"), False, f"integrand not decayed at |sigma| = {t_max / 1.5:.3g}")
    except QuadratureError as exc:
        return StarResult(which, float("nan"), False, str(exc))
    got = vals @ ws
    ratio = got / np.exp(rhs)
    return StarResult(which, float(abs(ratio - 1)), True)


# -- export -------------------------------------------------------------------


def export_csv(path, zs, values):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re_z", "im_z", "re_f", "im_f"])
        for z, f in zip(np.ravel(zs), np.ravel(values)):
            w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(f.real)), repr(float(f.imag))])


def residual_suite(rng, p=DilogParams(), points=50):
    """All non-stretch identities of this module, keyed by residual name."""
    grid = np.linspace(-2, 2, 9) + 0j
    grid = np.concatenate([grid, grid + 0.2j * p.b.real, grid - 0.2j * p.b.real])
    inv = inversion_residuals(np.array([0, 0.3 + 0.1j, -0.7 + 0.2j, 1.1 - 0.3j, 0.5j]), p)
    out = {
        "functional_equation": functional_equation_residual(grid, p),
        "inversion_phi": inv["phi"],
        "inversion_aux_phi": inv["aux_phi"],
        "phi_left_limit": float(abs(phi(-5 / abs(p.b), p) - 1)),
        "w_symmetry": w_symmetry_residual(0.3 + 0.05j, np.array([0.2, -0.7 + 0.1j, 1.3]), p),
        "fourier_duality": fourier_duality_residual(0.3 + 0.1j, [0.0, 0.4, -0.3], p),
    }
    for k, v in recurrence_suite(rng, p, points).items():
        out[f"recurrence_{k}"] = v
    rows, dec = quasiclassical_residual()
    out["quasiclassical_decreasing"] = 0.0 if dec else 1.0
    tl = 0.0
    for _ in range(10):
        prm = tuple(rng.uniform(-0.5, 0.5, 5) + 1j * rng.uniform(-0.3, 0.3, 5))
        tl = max(tl, star_triangle_residual("three_leg", prm).residual)
    out["three_leg"] = tl
    return out
