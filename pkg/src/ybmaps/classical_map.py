"""Classical Yang-Baxter map on the Poisson algebra {k,e}=ke, {k,f}=-kf,
{e,f}=k-1/k, in (k,e,f) coordinates and in the canonical (u,v,z) chart."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidPointError, SingularMapError
from .numsupport import GradientConfig, fd_gradient

PIVOT_EPS = 1e-300


@dataclass(frozen=True)
class ClassicalTriple:
    k: complex
    e: complex
    f: complex

    def __post_init__(self):
        if self.k == 0 or not np.isfinite(self.k):
            raise InvalidPointError(f"k must be finite and nonzero, got {self.k}")

    def as_tuple(self):
        return (complex(self.k), complex(self.e), complex(self.f))


@dataclass(frozen=True)
class WeylTriple:
    u: complex
    v: complex
    z: complex

    def __post_init__(self):
        for name in ("u", "v", "z"):
            val = getattr(self, name)
            if val == 0 or not np.isfinite(val):
                raise InvalidPointError(f"{name} must be finite and nonzero, got {val}")

    def as_tuple(self):
        return (complex(self.u), complex(self.v), complex(self.z))


UNIT = (1.0 + 0j, 0j, 0j)


def casimir(x):
    k, e, f = x.as_tuple()
    return e * f + k + 1 / k


def _check_pivot(g, label, floor=PIVOT_EPS):
    if abs(g) < floor or not np.isfinite(g):
        raise SingularMapError(f"{label} pivot vanishes: {g}", pivot=g)


def kef_forward(k1, e1, f1, k2, e2, f2, floor=PIVOT_EPS):
    g = 1 - e1 * f2 * k2 / k1
    _check_pivot(g, "forward", floor)
    return (
        (k1 * g, e1 * k2, f1 / k2 + f2 - f2 / (k1 * k1 * g)),
        (k2 / g, k1 * e2 + e1 - e1 * k2 * k2 / g, f2 / k1),
    )


def kef_inverse(k1, e1, f1, k2, e2, f2, floor=PIVOT_EPS):
    h = 1 - e1 * f2
    _check_pivot(h, "inverse", floor)
    return (
        (k1 / h, e1 / (k2 * h), (f1 + f2 / k1) * h * k2 - k1 * f2 * k2),
        (k2 * h, (e2 + e1 * k2) * h / k1 - e1 / (k1 * k2), f2 * k1 / h),
    )


def forward_pivot(x1, x2):
    return 1 - x1.e * x2.f * x2.k / x1.k


def yb_map_kef(x1, x2, direction="forward", pivot_floor=PIVOT_EPS):
    """Apply the map (or its inverse) to a pair of triples.

    SingularMapError is raised when |pivot| < pivot_floor.
    """
    if direction == "forward":
        a, b = kef_forward(*x1.as_tuple(), *x2.as_tuple(), floor=pivot_floor)
    elif direction == "inverse":
        a, b = kef_inverse(*x1.as_tuple(), *x2.as_tuple(), floor=pivot_floor)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return ClassicalTriple(*a), ClassicalTriple(*b)


def coproduct_pair(x1, x2):
    k1, e1, f1 = x1.as_tuple()
    k2, e2, f2 = x2.as_tuple()
    return ClassicalTriple(k1 * k2, e1 * k2 + e2, f1 + f2 / k1)


def hopf_unary(x, which):
    k, e, f = x.as_tuple()
    if which == "antipode":
        return ClassicalTriple(1 / k, -e / k, -k * f)
    if which == "counit":
        return ClassicalTriple(*UNIT)
    raise ValueError(f"unknown operation {which!r}")


def weyl_embed(w):
    u, v, z = w.as_tuple()
    return ClassicalTriple(u, v * (z - u), (1 - 1 / (z * u)) / v)


def uv_forward(u1, v1, z1, u2, v2, z2):
    g = 1 - v1 * (z1 - u1) * (u2 - 1 / z2) / (u1 * v2)
    _check_pivot(g, "forward")
    den = v1 * u2 + (v2 - v1 / z2)
    _check_pivot(den, "forward denominator")
    return (
        (u1 * g, v1 * v2 * u2 / den, z1),
        (u2 / g, z1 * v1 / z2 + (v2 - v1 / z2) * u1, z2),
    )


def uv_inverse(u1, v1, z1, u2, v2, z2):
    g = 1 - v1 * (z1 - u1) * (u2 - 1 / z2) / (v2 * u2)
    _check_pivot(g, "inverse")
    den = z1 * v1 / z2 + (v2 - z1 * v1) * u2
    _check_pivot(den, "inverse denominator")
    return (
        (u1 / g, v1 * v2 / den, z1),
        (u2 * g, v1 + (v2 - z1 * v1) / u1, z2),
    )


def yb_map_uv(w1, w2, direction="forward"):
    if direction == "forward":
        a, b = uv_forward(*w1.as_tuple(), *w2.as_tuple())
    elif direction == "inverse":
        a, b = uv_inverse(*w1.as_tuple(), *w2.as_tuple())
    else:
        raise ValueError(f"unknown direction {direction!r}")
    # z components are passed through untouched
    return WeylTriple(a[0], a[1], w1.z), WeylTriple(b[0], b[1], w2.z)


def _pair_from_logs(x, z1, z2):
    return (
        WeylTriple(np.exp(x[0]), np.exp(x[1]), z1),
        WeylTriple(np.exp(x[2]), np.exp(x[3]), z2),
    )


def poisson_bracket_numeric(F, G, point, cfg=GradientConfig()):
    """Canonical bracket {F,G} with {log u_i, log v_j} = delta_ij.

    Derivatives are taken in log coordinates, where the bracket is the
    constant symplectic form, so sum_i u_i v_i (F_u G_v - F_v G_u) becomes
    sum_i (F_{log u} G_{log v} - F_{log v} G_{log u}).
    """
    w1, w2 = point
    x0 = np.log([w1.u, w1.v, w2.u, w2.v])

    def lift(fun):
        return lambda x: fun(_pair_from_logs(x, w1.z, w2.z))

    dF = fd_gradient(lift(F), x0, cfg)
    dG = fd_gradient(lift(G), x0, cfg)
    return complex(dF[0] * dG[1] - dF[1] * dG[0] + dF[2] * dG[3] - dF[3] * dG[2])


def canonical_form(n_pairs):
    """Block-diagonal symplectic form on (log u_1, log v_1, log u_2, ...)."""
    return np.kron(np.eye(n_pairs), np.array([[0, 1], [-1, 0]], dtype=complex))


def uv_log_map(x, z1, z2, direction="forward"):
    """The uv map written on (log u1, log v1, log u2, log v2)."""
    a, b = yb_map_uv(*_pair_from_logs(x, z1, z2), direction)
    return np.log(np.array([a.u, a.v, b.u, b.v]))


def random_pair(rng, z=None, radius=1.0, pivot_floor=1e-6, max_tries=1000):
    """Two Weyl triples with log-coordinates uniform in the complex square
    [-r,r] + i[-r,r], rejecting points where either map pivot is tiny."""
    for _ in range(max_tries):
        logs = rng.uniform(-radius, radius, 6) + 1j * rng.uniform(-radius, radius, 6)
        vals = np.exp(logs)
        z1, z2 = (vals[4], vals[5]) if z is None else z
        w1 = WeylTriple(vals[0], vals[1], z1)
        w2 = WeylTriple(vals[2], vals[3], z2)
        g = 1 - w1.v * (z1 - w1.u) * (w2.u - 1 / z2) / (w1.u * w2.v)
        den = w1.v * w2.u + (w2.v - w1.v / z2)
        if abs(g) > pivot_floor and abs(den) > pivot_floor:
            return w1, w2
    raise RuntimeError("could not sample a regular pair")


def random_triple(rng, radius=1.0):
    logs = rng.uniform(-radius, radius, 3) + 1j * rng.uniform(-radius, radius, 3)
    k, e, f = np.exp(logs)
    return ClassicalTriple(k, e, f)


def _rel(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))))


def _flat(*xs):
    return np.array([c for x in xs for c in x.as_tuple()])


def _r12(x, floor=PIVOT_EPS):
    a, b = yb_map_kef(x[0], x[1], pivot_floor=floor)
    return (a, b, x[2])


def _r13(x, floor=PIVOT_EPS):
    a, c = yb_map_kef(x[0], x[2], pivot_floor=floor)
    return (a, x[1], c)


def _r23(x, floor=PIVOT_EPS):
    b, c = yb_map_kef(x[1], x[2], pivot_floor=floor)
    return (x[0], b, c)


def ybe_residual(x1, x2, x3, pivot_floor=PIVOT_EPS):
    """Componentwise relative mismatch of R12 R13 R23 = R23 R13 R12 (rightmost acts first)."""
    x = (x1, x2, x3)
    lhs = _r12(_r13(_r23(x, pivot_floor), pivot_floor), pivot_floor)
    rhs = _r23(_r13(_r12(x, pivot_floor), pivot_floor), pivot_floor)
    return _rel(_flat(*lhs), _flat(*rhs))


def hexagon_residuals(x1, x2, x3):
    x = (x1, x2, x3)
    lhs1 = yb_map_kef(coproduct_pair(x1, x2), x3)
    y = _r23(_r13(x))
    rhs1 = (coproduct_pair(y[0], y[1]), y[2])
    lhs2 = yb_map_kef(x1, coproduct_pair(x2, x3))
    y = _r12(_r13(x))
    rhs2 = (y[0], coproduct_pair(y[1], y[2]))
    return {"hexagon_12": _rel(_flat(*lhs1), _flat(*rhs1)), "hexagon_23": _rel(_flat(*lhs2), _flat(*rhs2))}


def coproduct_residual(x1, x2):
    lhs = coproduct_pair(x2, x1)
    rhs = coproduct_pair(*yb_map_kef(x1, x2))
    return _rel(_flat(lhs), _flat(rhs))


def counit_residual(x):
    unit = ClassicalTriple(*UNIT)
    a = yb_map_kef(unit, x)
    b = yb_map_kef(x, unit)
    return max(_rel(_flat(*a), _flat(unit, x)), _rel(_flat(*b), _flat(x, unit)))


def antipode_residual(x1, x2):
    S = lambda t: hopf_unary(t, "antipode")  # noqa: E731
    lhs = yb_map_kef(S(x1), S(x2))
    inv = yb_map_kef(x1, x2, "inverse")
    rhs = (S(inv[0]), S(inv[1]))
    return _rel(_flat(*lhs), _flat(*rhs))


def log_jacobian(fun, logs, cfg=GradientConfig()):
    """Jacobian of log(fun) in log coordinates, computed without taking logs
    of the outputs so that branch cuts of log never enter."""
    from .numsupport import fd_jacobian

    y0 = np.asarray(fun(logs), dtype=complex)
    return fd_jacobian(fun, logs, cfg) / y0[:, None]


def uv_symplectic_residual(w1, w2, cfg=GradientConfig()):
    """max |J Omega J^T - Omega| for the uv map in (log u, log v) coordinates."""
    z1, z2 = w1.z, w2.z

    def fun(x):
        a, b = yb_map_uv(*_pair_from_logs(x, z1, z2))
        return np.array([a.u, a.v, b.u, b.v])

    x0 = np.log([w1.u, w1.v, w2.u, w2.v])
    J = log_jacobian(fun, x0, cfg)
    om = canonical_form(2)
    return float(np.max(np.abs(J @ om @ J.T - om)))


def chart_residual(w1, w2):
    p1, p2 = yb_map_uv(w1, w2)
    lhs = (weyl_embed(p1), weyl_embed(p2))
    rhs = yb_map_kef(weyl_embed(w1), weyl_embed(w2))
    return _rel(_flat(*lhs), _flat(*rhs))


def roundtrip_residuals(w1, w2):
    p = yb_map_uv(w1, w2)
    back = yb_map_uv(*p, "inverse")
    x1, x2 = weyl_embed(w1), weyl_embed(w2)
    y = yb_map_kef(x1, x2)
    xb = yb_map_kef(*y, "inverse")
    return {
        "roundtrip_kef": _rel(_flat(*xb), _flat(x1, x2)),
        "roundtrip_uv": _rel(_flat(*back), _flat(w1, w2)),
    }


def identity_suite(rng, trials=100, cfg=GradientConfig()):
    """Max residual of every classical map identity over random points."""
    out = {}

    def put(name, val):
        out[name] = max(out.get(name, 0.0), val)

    done = 0
    while done < trials:
        xs = [random_triple(rng) for _ in range(3)]
        try:
            put("ybe", ybe_residual(*xs, pivot_floor=1e-6))
            for k, v in hexagon_residuals(*xs).items():
                put(k, v)
            put("coproduct_swap", coproduct_residual(xs[0], xs[1]))
            put("counit", counit_residual(xs[0]))
            put("antipode", antipode_residual(xs[0], xs[1]))
            w1, w2 = random_pair(rng)
            put("chart", chart_residual(w1, w2))
            for k, v in roundtrip_residuals(w1, w2).items():
                put(k, v)
            put("symplectic_uv", uv_symplectic_residual(w1, w2, cfg))
            put("casimir", abs(casimir(weyl_embed(w1)) - (w1.z + 1 / w1.z)))
        except SingularMapError:
            continue
        done += 1
    return out
