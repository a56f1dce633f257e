"""Leaf-joined trees: exact pair recursion, effective-weight iteration, loci.

The tree of branching factor r and height n, with all leaves identified,
satisfies the pair recursion

    A_{n+1} = [(q+w)A_n + B_n]^r
    B_{n+1} = [(q+w)A_n + (1+w)B_n]^r - [(q+w)A_n + B_n]^r,
    A_1 = 1,  B_1 = (1+w)^r - 1,

for a uniform edge weight w, with the partition function q^2 A_n + q B_n.
The same growth is a one-dimensional iteration of the effective weight in
the y = 1+v variable: y_0 = inf, y_{n+1} = ((q-1+y#*y)/(q-2+y#+y))^r, which
in the proper-coloring case y# = 0 is y -> ((q-1)/(q-2+y))^r.  The
partition function vanishes exactly when the iteration lands on 1-q.

Marginality loci of that map (where a fixed point or short cycle has unit
multiplier) are sampled here as q-plane curves for comparison against
computed root sets.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .graphs import GraphError
from .poly import BigPoly, BiPoly
from .rootfind import RootSet, find_roots, solve_complex_coeffs
from .weights import INF, UNDEF, is_finite

EXACT_SIZE_LIMIT = 2 ** 16      # r**n cap for the exact recursion


@dataclass
class LeafTreeState:
    """Exact pair state at depth n; a/b are BigPoly (w = -1) or BiPoly."""
    r: int
    n: int
    a: object
    b: object
    symbolic_weight: bool

    def partition_poly(self):
        q = BiPoly.q() if self.symbolic_weight else BigPoly.variable()
        return q * q * self.a + q * self.b


def leaf_tree_ab(r: int, n: int, symbolic_weight: bool = False) -> LeafTreeState:
    """Run the exact pair recursion to depth n.

    With symbolic_weight the result is bivariate in (q, w); otherwise the
    proper-coloring specialization w = -1 is used throughout.
    """
    if r < 2 or n < 1:
        raise GraphError("need r >= 2 and n >= 1")
    if r ** n > EXACT_SIZE_LIMIT:
        raise GraphError(f"r^n = {r ** n} exceeds exact-recursion limit {EXACT_SIZE_LIMIT}")
    if symbolic_weight:
        q, w = BiPoly.q(), BiPoly.w()
        a, b = BiPoly.const(1), (1 + w) ** r - 1
        for _ in range(n - 1):
            base = (q + w) * a + b
            bumped = (q + w) * a + (1 + w) * b
            a_next = base ** r
            a, b = a_next, bumped ** r - a_next
        return LeafTreeState(r, n, a, b, True)
    q = BigPoly.variable()
    a, b = BigPoly.const(1), BigPoly.const((1 - 1) ** r - 1)   # (1+w)^r - 1 at w=-1
    for _ in range(n - 1):
        base = (q - 1) * a + b
        a_next = base ** r
        b = (q - 1) ** r * a ** r - a_next
        a = a_next
    return LeafTreeState(r, n, a, b, False)


def chromatic_leaf_tree(r: int, n: int) -> BigPoly:
    """Exact proper-coloring polynomial of the depth-n tree."""
    return leaf_tree_ab(r, n).partition_poly()


# ---------------------------------------------------------------------------
# Effective-weight iteration
# ---------------------------------------------------------------------------

_OVERFLOW = 1e100


def _pow_r(z: complex, r: int):
    if abs(z) > _OVERFLOW ** (1.0 / r):
        return INF
    return z ** r


def iterate_step(y, q: complex, r: int, y_sharp: complex = 0.0):
    """One step of the effective-weight map in the y variable."""
    if y is UNDEF:
        return UNDEF
    if y is INF:
        # Ratio of leading terms: (y# * y) / y.
        return _pow_r(y_sharp, r) if y_sharp != 0 else 0.0
    den = q - 2 + y_sharp + y
    num = q - 1 + y_sharp * y
    if den == 0:
        return UNDEF if num == 0 else INF
    return _pow_r(num / den, r)


def iterate_effective_y(q: complex, r: int, n: int, y_sharp: complex = 0.0):
    """y_n starting from y_0 = inf; q in {0, 1} is rejected.

    The partition value at depth n vanishes iff the result equals 1 - q.
    """
    if q == 0 or q == 1:
        raise GraphError("iteration needs q outside {0, 1}")
    y = INF
    for _ in range(n):
        y = iterate_step(y, q, r, y_sharp)
    return y


def is_partition_zero(q: complex, r: int, n: int, tol: float = 1e-6) -> bool:
    """Zero test via the iteration: y_n == 1 - q within tol."""
    y = iterate_effective_y(q, r, n)
    return is_finite(y) and abs(y - (1 - q)) < tol


# ---------------------------------------------------------------------------
# Effective transmissivity
# ---------------------------------------------------------------------------

def t_eff_exact(r: int, n: int) -> tuple[BigPoly, BigPoly]:
    """Transmissivity of the depth-n tree as a reduced exact rational function.

    Returns (numerator, denominator) of B_n / (q A_n + B_n) in lowest terms,
    denominator with positive leading coefficient.
    """
    state = leaf_tree_ab(r, n)
    q = BigPoly.variable()
    num = state.b
    den = q * state.a + state.b
    g = BigPoly.gcd(num, den)
    if g.degree >= 1:
        num = num.exact_div(g)
        den = den.exact_div(g)
    if den.lead < 0:
        num, den = -num, -den
    return num, den


def t_eff_at(q: complex, r: int, n: int):
    """Numeric transmissivity via the iteration; t = (y-1)/(q+y-1)."""
    y = iterate_effective_y(q, r, n)
    if y is UNDEF:
        return UNDEF
    if y is INF:
        return 1.0 + 0.0j
    den = q + y - 1
    if den == 0:
        return INF
    return (y - 1) / den


def ratio_at(num: BigPoly, den: BigPoly, q) -> object:
    """Evaluate an exact rational function, reporting 0/0 as undefined."""
    dv = den(q)
    nv = num(q)
    if dv == 0:
        return UNDEF if nv == 0 else INF
    return nv / dv


# ---------------------------------------------------------------------------
# Marginality loci
# ---------------------------------------------------------------------------

# ---------------------------------------------------------------------------
# Root location via the recursion
# ---------------------------------------------------------------------------
#
# Expanded in the monomial basis these polynomials suffer cancellation
# exponential in the degree, but the defining recursion evaluates them with
# small relative error at any point: products and squares are stable, and
# the one cancelling difference telescopes,
#     B_{n+1} = ((q-1)A)^r - ((q-1)A + B)^r = -B * sum_i ((q-1)A)^i ((q-1)A+B)^(r-1-i).
# Carrying derivatives and a running rescale alongside yields P/P' in plain
# doubles, good enough to steer an Aberth iteration; exact coefficients are
# then used only for the final Newton verification.

def _pair_ratio(q, r: int, n: int):
    """P/P' at the points q (ndarray), via the scaled derivative recursion."""
    q = np.asarray(q, dtype=np.complex128)
    a = np.ones_like(q)
    b = np.full_like(q, -1.0)
    da = np.zeros_like(q)
    db = np.zeros_like(q)
    for _ in range(n - 1):
        y = (q - 1) * a                   # ((q-1)A)
        dy = a + (q - 1) * da
        x = y + b                         # ((q-1)A + B)
        dx = dy + db
        a_new = x ** r
        da_new = r * x ** (r - 1) * dx
        # geometric sum: sum_i y^i x^(r-1-i), and its derivative
        s = np.zeros_like(q)
        ds = np.zeros_like(q)
        for i in range(r):
            yi = y ** i
            xj = x ** (r - 1 - i)
            s += yi * xj
            dyi = i * y ** (i - 1) * dy if i else 0.0
            dxj = (r - 1 - i) * x ** (r - 2 - i) * dx if r - 1 - i else 0.0
            ds += dyi * xj + yi * dxj
        b_new = -b * s
        db_new = -(db * s + b * ds)
        scale = np.maximum(np.abs(a_new), np.abs(b_new))
        scale = np.where(scale == 0, 1.0, scale)
        a, b = a_new / scale, b_new / scale
        da, db = da_new / scale, db_new / scale
    p = q * (q * a + b)
    dp = 2 * q * a + q * q * da + b + q * db
    with np.errstate(divide="ignore", invalid="ignore"):
        return p / dp


def tree_chromatic_roots(r: int, n: int, tol: float = 1e-8) -> RootSet:
    """All proper-coloring roots of the depth-n tree.

    An Aberth iteration driven by the recursion evaluator locates the roots
    in double precision; the exact coefficients then confirm them through
    the polynomial solver (Newton residuals at working precision).
    """
    poly = chromatic_leaf_tree(r, n)
    if poly.degree <= 2:
        return find_roots(poly, tol=tol)
    starts = _aberth_on_recursion(r, n, poly.degree - 2)
    return find_roots(poly, tol=tol, starts=starts)


def _aberth_on_recursion(r: int, n: int, count: int,
                         max_sweeps: int = 400) -> list[complex]:
    # Deflated Newton ratio: roots at 0 and 1 are divided out of P.
    rng_angles = (np.arange(count) + 0.37) / count
    z = 1.0 + r * np.exp(2j * np.pi * rng_angles)    # near the root ring
    for _ in range(max_sweeps):
        w_full = _pair_ratio(z, r, n)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = 1.0 / (1.0 / w_full - 1.0 / z - 1.0 / (z - 1.0))
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            corr = w / (1.0 - w * inv.sum(axis=1))
        corr = np.where(np.isfinite(corr), corr, 0.0)
        z = z - corr
        if np.all(np.abs(corr) <= 1e-13 * (1.0 + np.abs(z))):
            break
    return list(z)


FIXED_POINT_CIRCLE = "fixed-point-circle"
CARDIOID = "cardioid"
PERIOD2_EGG = "period2-egg"

LOCUS_KINDS = (FIXED_POINT_CIRCLE, CARDIOID, PERIOD2_EGG)


@dataclass
class LocusCurve:
    kind: str
    r: int
    points: list[tuple[float, complex]] = field(default_factory=list)
    # (phi, q) samples; multi-valued loci repeat phi once per branch.


def multiplier_loci(r: int, kind: str, samples: int = 720) -> LocusCurve:
    """Sample a marginality locus of the effective-weight map over |mult| = 1.

    fixed-point-circle: the circle |q-1| = r (any r).  cardioid and
    period2-egg: the extra fixed-point locus and the period-2 locus for
    r = 2, via the conjugate one-parameter family z -> 1 + w/z^r with
    w = (q-1)^r / (q-2)^(r+1).
    """
    if kind not in LOCUS_KINDS:
        raise GraphError(f"unknown locus kind {kind!r}")
    curve = LocusCurve(kind, r)
    if kind == FIXED_POINT_CIRCLE:
        for k in range(samples):
            phi = 2 * math.pi * k / samples
            curve.points.append((phi, 1 + r * cmath.exp(1j * phi)))
        return curve
    if r != 2:
        raise GraphError(f"{kind} locus is implemented for r = 2 only")
    if kind == CARDIOID:
        for k in range(samples):
            phi = 2 * math.pi * k / samples
            lam = cmath.exp(1j * phi)
            root = cmath.sqrt(lam * (8 + lam))
            for sign in (+1, -1):
                qv = (8 - 6 * lam - lam * lam + sign * (2 + lam) * root) / 8
                curve.points.append((phi, qv))
        return curve
    # Period-2 locus: w(q) = 4/lam with w = (q-1)^2/(q-2)^3, a cubic in q
    # per lam; every branch is kept.
    for k in range(samples):
        phi = 2 * math.pi * k / samples
        lam = cmath.exp(1j * phi)
        c = 4.0 / lam
        # (q-1)^2 = c (q-2)^3  ->  c q^3 + (-6c-1) q^2 + (12c+2) q + (-8c-1) = 0
        coeffs = [-8 * c - 1, 12 * c + 2, -6 * c - 1, c]
        rs = solve_complex_coeffs(coeffs, tol=1e-10)
        for qv in rs.roots:
            curve.points.append((phi, qv))
    return curve


def cardioid_cusp() -> complex:
    """The cusp of the r = 2 extra-fixed-point locus (multiplier 1, + branch)."""
    return (8 - 6 - 1 + (2 + 1) * 3) / 8 + 0j


# ---------------------------------------------------------------------------
# Root-location scan
# ---------------------------------------------------------------------------

@dataclass
class ScanRow:
    n: int
    degree: int
    max_offset: float          # max |root - 1|
    violations: int            # roots with |root - 1| >= r
    max_residual: float


@dataclass
class ScanReport:
    r: int
    rows: list[ScanRow]
    offsets_nondecreasing: bool    # informational, not a guarantee
    total_violations: int


def conjecture_scan(r: int, n_max: int, tol: float = 1e-8) -> ScanReport:
    """Locate all proper-coloring roots of the trees up to depth n_max.

    Reports, per depth, the largest |root - 1| and any root on or outside
    the circle of radius r around 1.  Restricted to r = 2 at desk scale.
    """
    if r != 2:
        raise GraphError("scan supports r = 2")
    if not (1 <= n_max <= 8):
        raise GraphError("scan supports 1 <= n_max <= 8")
    rows: list[ScanRow] = []
    for n in range(1, n_max + 1):
        rs = tree_chromatic_roots(r, n, tol=tol)
        poly_degree = rs.degree
        offsets = [abs(z - 1) for z in rs.roots]
        rows.append(ScanRow(
            n=n,
            degree=poly_degree,
            max_offset=max(offsets),
            violations=sum(1 for d in offsets if d >= r),
            max_residual=max(rs.residuals),
        ))
    nondec = all(rows[i].max_offset <= rows[i + 1].max_offset + 1e-12
                 for i in range(len(rows) - 1))
    return ScanReport(r, rows, nondec, sum(row.violations for row in rows))
