"""Simultaneous complex root finding for exact dense polynomials.

Aberth-Ehrlich iteration with Jacobi-style sweeps (every update reads the
previous sweep, so a sweep is deterministic and trivially data-parallel),
started from perturbed circles whose radii come from the upper convex hull
of (k, log|a_k|).

Polynomials whose roots fill a disc, like the coloring polynomials handled
here, are brutally ill-conditioned in the monomial basis: near the root
region the value is smaller than the coefficient scale sum |a_k||z|^k by a
factor exponential in the degree, so double precision cannot even decide
whether a point is near a root.  The solver therefore runs a cheap double
sweep first, validates with a scale-free criterion, and escalates the
working precision of an mpmath Aberth phase until every root passes.

The reported residual of a root z is |p(z)/p'(z)| / (1 + |z|): the Newton
correction relative to the root's magnitude, a first-order bound on the
distance to a true root that stays meaningful when coefficients span
hundreds of digits.  Exact roots at q = 0 and q = 1 are deflated first
(coloring polynomials of graphs with an edge always carry both).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import mpmath as mp
import numpy as np

from .poly import BigPoly


class RootFindingError(ValueError):
    pass


@dataclass
class RootSet:
    roots: list[complex]
    residuals: list[float]
    multiplicities: list[int]
    degree: int
    tol: float
    converged: bool


# ---------------------------------------------------------------------------
# Double-precision sweeps
# ---------------------------------------------------------------------------

def _initial_points(coeffs: np.ndarray) -> np.ndarray:
    """Perturbed circles; radii from the convex hull of (k, log|a_k|)."""
    d = len(coeffs) - 1
    logs = np.full(d + 1, -np.inf)
    nz = np.abs(coeffs) > 0
    logs[nz] = np.log(np.abs(coeffs[nz]))
    hull: list[int] = []
    for k in range(d + 1):
        if not np.isfinite(logs[k]):
            continue
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            if (logs[j] - logs[i]) * (k - j) <= (logs[k] - logs[j]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    points = np.empty(d, dtype=np.complex128)
    pos = 0
    for a, b in zip(hull, hull[1:]):
        n_seg = b - a
        radius = math.exp((logs[a] - logs[b]) / n_seg)
        offset = 0.376 + 0.5 * pos / max(d, 1)
        ang = 2.0 * np.pi * (np.arange(n_seg) + offset) / n_seg
        points[pos:pos + n_seg] = radius * np.exp(1j * ang)
        pos += n_seg
    assert pos == d
    return points


def _horner_all(coeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth_sweeps(coeffs: Sequence[complex], max_sweeps: int = 400,
                  step_tol: float = 1e-14) -> tuple[np.ndarray, bool]:
    """Double-precision Aberth on ascending complex coefficients.

    Stops when every correction is below step_tol relatively; adequate only
    for polynomials double precision can resolve, so callers must validate.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if len(c) < 2 or c[-1] == 0:
        raise RootFindingError("need degree >= 1 with a nonzero leading coefficient")
    c = c / np.max(np.abs(c))
    z = _initial_points(c)
    for _sweep in range(max_sweeps):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            p, dp = _horner_all(c, z)
            w = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), 0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            repulse = inv.sum(axis=1)
            corr = w / (1.0 - w * repulse)
        # Overflowed evaluations (far initial points) drift inward instead.
        corr = np.where(np.isfinite(corr), corr, 0.2 * z)
        z = z - corr
        if np.all(np.abs(corr) <= step_tol * (1.0 + np.abs(z))):
            return z, True
    return z, False


# ---------------------------------------------------------------------------
# Multiprecision phase
# ---------------------------------------------------------------------------

def _mp_eval(coeffs, z):
    p = mp.mpc(0)
    dp = mp.mpc(0)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _newton_once(coeffs, z0: complex, dps: int) -> tuple[complex, float]:
    with mp.workdps(dps):
        floor = mp.mpf(10) ** (-dps + 4)
        z = mp.mpc(z0)
        eta = mp.mpf("inf")
        for _ in range(30):
            p, dp = _mp_eval(coeffs, z)
            if p == 0:
                eta = mp.mpf(0)
                break
            if dp == 0:
                break
            step = p / dp
            eta = abs(step) / (1 + abs(z))
            z = z - step
            if eta < floor:
                break
        return complex(z), float(eta)


def newton_residuals(coeffs, roots, dps: int = 40, tol: float | None = None,
                     max_dps: int = 400) -> tuple[list[complex], list[float]]:
    """Newton-polish each point and report relative Newton-step residuals.

    The polynomial value near a root can sit far below the coefficient
    scale, and the shortfall varies across the plane, so precision is
    escalated per root (restarting from the original point) until the
    residual passes tol or max_dps is reached.
    """
    out: list[complex] = []
    res: list[float] = []
    for z0 in roots:
        level = dps
        z, eta = _newton_once(coeffs, z0, level)
        while tol is not None and eta > tol and level < max_dps:
            level = min(max_dps, 2 * level)
            z, eta = _newton_once(coeffs, z0, level)
        out.append(z)
        res.append(eta)
    return out, res


def _mp_aberth(coeffs, starts: list[complex], dps: int, max_sweeps: int = 160
               ) -> list[complex]:
    """Aberth sweeps at working precision dps, Jacobi update order."""
    with mp.workdps(dps):
        z = [mp.mpc(s) for s in starts]
        n = len(z)
        stop = mp.mpf(10) ** (-dps + 8)
        for _ in range(max_sweeps):
            corrs = []
            for i in range(n):
                p, dp = _mp_eval(coeffs, z[i])
                if dp == 0:
                    corrs.append(mp.mpc(0) if p == 0 else mp.mpc("1e-3"))
                    continue
                w = p / dp
                s = mp.mpc(0)
                zi = z[i]
                for j in range(n):
                    if j != i and zi != z[j]:
                        s += 1 / (zi - z[j])
                den = 1 - w * s
                corrs.append(w / den if den != 0 else w)
            z = [zi - c for zi, c in zip(z, corrs)]
            if all(abs(c) <= stop * (1 + abs(zi)) for zi, c in zip(z, corrs)):
                break
        return [complex(zi) for zi in z]


def _cluster_multiplicities(roots: list[complex], radius: float) -> list[int]:
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= radius * (1.0 + abs(roots[i])):
                parent[find(i)] = find(j)
    sizes: dict[int, int] = {}
    for i in range(n):
        r = find(i)
        sizes[r] = sizes.get(r, 0) + 1
    return [sizes[find(i)] for i in range(n)]


def _scaled_float_coeffs(coeffs: Sequence) -> np.ndarray:
    """Exact/mp coefficients -> complex128, scaled so the largest is ~1."""
    with mp.workdps(30):
        mags = [abs(mp.mpc(c)) for c in coeffs]
        top = max(mags)
        shift = mp.power(2, int(mp.log(top, 2))) if top > 0 else mp.mpf(1)
        return np.array([complex(mp.mpc(c) / shift) for c in coeffs],
                        dtype=np.complex128)


def _auto_dps(degree: int) -> int:
    # Root-filled discs cost about 0.3 digits of cancellation per degree.
    return max(40, 30 + int(0.45 * degree))


def solve_complex_coeffs(coeffs, tol: float = 1e-10, max_sweeps: int = 400,
                         dps: int | None = None, max_dps: int = 400,
                         starts: Sequence[complex] | None = None) -> RootSet:
    """All roots of a polynomial given by exact (int/mpc) ascending coeffs.

    Double-precision sweeps first (skipped when starting points are
    supplied); precision escalates geometrically until every Newton-step
    residual passes tol or max_dps is hit (the result is then flagged
    unconverged rather than trimmed).
    """
    cs = list(coeffs)
    while cs and mp.mpc(cs[-1]) == 0:
        cs.pop()
    if len(cs) < 2:
        raise RootFindingError("need degree >= 1")
    if dps is None:
        dps = _auto_dps(len(cs) - 1)
    if starts is not None:
        if len(starts) != len(cs) - 1:
            raise RootFindingError("starts must supply one point per root")
        raw = list(starts)
    else:
        approx = _scaled_float_coeffs(cs)
        raw, _ = aberth_sweeps(approx, max_sweeps=max_sweeps)
        raw = list(raw)
    roots, residuals = newton_residuals(cs, raw, dps=dps, tol=tol, max_dps=max_dps)
    level = dps
    while max(residuals) > tol and level < max_dps:
        # Per-root polishing was not enough: approximations are likely
        # collided or far off, so rerun the simultaneous iteration.
        level = min(max_dps, int(level * 2.2))
        refined = _mp_aberth(cs, roots, dps=level)
        roots, residuals = newton_residuals(cs, refined, dps=level, tol=tol,
                                            max_dps=max_dps)
    order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
    roots = [roots[i] for i in order]
    residuals = [residuals[i] for i in order]
    mult = _cluster_multiplicities(roots, math.sqrt(tol))
    return RootSet(roots, residuals, mult, len(cs) - 1, tol,
                   max(residuals) <= tol)


def find_roots(p: BigPoly, tol: float = 1e-10, max_sweeps: int = 400,
               dps: int | None = None, max_dps: int = 400,
               starts: Sequence[complex] | None = None) -> RootSet:
    """All complex roots of an exact integer polynomial.

    Roots at q = 0 and q = 1 are stripped by exact synthetic division first
    and reported with residual 0; the rest go through the Aberth pipeline.
    Callers with good approximations (e.g. from a structured evaluation of
    the same polynomial) can pass them as starts for the deflated part.
    The returned multiset always has exactly degree(p) members.
    """
    if not p:
        raise RootFindingError("zero polynomial")
    if p.degree < 1:
        raise RootFindingError("constant polynomial has no roots")
    coeffs = list(p.coeffs)
    exact: list[complex] = []
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        exact.append(0j)
    while len(coeffs) > 1 and sum(coeffs) == 0:
        # Synthetic division by (q - 1), exact in integers.
        out = [0] * (len(coeffs) - 1)
        acc = 0
        for k in range(len(coeffs) - 1, 0, -1):
            acc = acc + coeffs[k]
            out[k - 1] = acc
        coeffs = out
        exact.append(1 + 0j)
    if len(coeffs) <= 1:
        roots = exact
        residuals = [0.0] * len(exact)
        mult = _cluster_multiplicities(roots, math.sqrt(tol))
        return RootSet(roots, residuals, mult, p.degree, tol, True)
    inner = solve_complex_coeffs(coeffs, tol=tol, max_sweeps=max_sweeps,
                                 dps=dps, max_dps=max_dps, starts=starts)
    roots = exact + inner.roots
    residuals = [0.0] * len(exact) + inner.residuals
    order = sorted(range(len(roots)), key=lambda i: (roots[i].real, roots[i].imag))
    roots = [roots[i] for i in order]
    residuals = [residuals[i] for i in order]
    mult = _cluster_multiplicities(roots, math.sqrt(tol))
    return RootSet(roots, residuals, mult, p.degree, tol, inner.converged)
