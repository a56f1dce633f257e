"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a single pass/fail line (stdout shows with -s or in the
captured section on failure) and enforces its runtime budget.
"""

import cmath
import math
import random
import time
from contextlib import contextmanager
from itertools import combinations

from conftest import random_sp_ast, random_small_fraction
from tuttebound.cli import main as cli_main
from tuttebound.engine import tree_ab
from tuttebound.graphs import Multigraph, maxmaxflow
from tuttebound.leaftree import cardioid_cusp, conjecture_scan
from tuttebound.oracles import potts_brute, tutte_brute
from tuttebound.poly import BigPoly
from tuttebound.regions import (MAXIMAL, MINIMAL, certify, cycle_counterexample,
                                disc_radii, grid_closure, log2_disc_radius,
                                parallel_bound, radii_by_iteration, radii_feasible,
                                sp_rho_threshold, transmissivity_circle_max,
                                _t_parallel)
from tuttebound.rootfind import find_roots
from tuttebound.sp import realize

import numpy as np

Q = BigPoly.variable()

PUBLISHED_TABLE = {
    2: (1.0, 1.0),
    3: (0.376086, 0.333333),
    4: (0.240380, 0.219471),
    5: (0.177591, 0.165204),
    6: (0.141038, 0.132841),
    7: (0.117041, 0.111213),
    8: (0.100054, 0.095697),
    9: (0.087388, 0.084008),
    10: (0.077577, 0.074877),
}
PUBLISHED_INVERSE = {
    2: (1.0, 1.0),
    3: (2.658967, 3.000000),
    4: (4.160076, 4.556417),
    5: (5.630929, 6.053134),
    6: (7.090297, 7.527812),
    7: (8.544040, 8.991750),
    8: (9.994599, 10.449611),
    9: (11.443181, 11.903688),
    10: (12.890449, 13.355246),
}


@contextmanager
def criterion(num: int, description: str, budget_s: float):
    start = time.time()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {num}: FAIL - {description}")
        raise
    elapsed = time.time() - start
    assert elapsed < budget_s, f"runtime {elapsed:.1f}s exceeds budget {budget_s}s"
    print(f"ACCEPTANCE {num}: PASS - {description} ({elapsed:.1f}s)")


def test_criterion_1_threshold_table(tmp_path, monkeypatch):
    with criterion(1, "rho-table reproduces all 18 published threshold values to 1e-6", 1.0):
        monkeypatch.chdir(tmp_path)
        out = tmp_path / "table.csv"
        assert cli_main(["region", "rho-table", "--lambda-max", "10",
                         "--out", str(out)]) == 0
        rows = out.read_text().splitlines()[1:]
        assert len(rows) == 9
        for line in rows:
            lam_s, rho_sp, rho_w, inv_sp, inv_w = line.split(",")
            lam = int(lam_s)
            assert abs(float(rho_sp) - PUBLISHED_TABLE[lam][0]) < 1e-6
            assert abs(float(rho_w) - PUBLISHED_TABLE[lam][1]) < 1e-6
            assert abs(float(inv_sp) - PUBLISHED_INVERSE[lam][0]) < 1e-6
            assert abs(float(inv_w) - PUBLISHED_INVERSE[lam][1]) < 1e-6


def test_criterion_2_headline_constants():
    with criterion(2, "1/rho#(3) and 2/log 2 match to 1e-9", 1.0):
        assert abs(1.0 / sp_rho_threshold(3) - 2.6589670819) < 1e-9
        assert abs(log2_disc_radius(3) - 2.8853900818) < 1e-9


def _connected_simple_graphs(n: int):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = tuple(pairs[i] for i in range(len(pairs)) if (mask >> i) & 1)
        g = Multigraph(n, edges)
        if g.is_connected():
            yield g


def test_criterion_3_oracle_equivalence():
    with criterion(3, "500 exact tree-vs-subset agreements and exhaustive "
                      "coloring-sum checks on <= 5 vertices", 120.0):
        rng = random.Random(2024)
        done = 0
        while done < 500:
            tt, tree = realize(random_sp_ast(rng, rng.randint(1, 10)))
            m = tt.graph.edge_count
            if m > 10:
                continue
            q = random_small_fraction(rng)
            if q == 0:
                continue
            weights = {i: random_small_fraction(rng) for i in range(m)}
            assert tree_ab(tree, q, weights).z == tutte_brute(tt.graph, q, weights)
            done += 1

        for n in range(1, 6):
            for g in _connected_simple_graphs(n):
                for q in (1, 2, 3, 4):
                    assert potts_brute(g, q, -1) == tutte_brute(g, q, -1)


def test_criterion_4_cycle_counterexample():
    with criterion(4, "31 transmissivity roots; witness -0.144883-1.651418i with "
                      "|q-1| in [2.00945, 2.00948], confirmed on the 94-vertex "
                      "polynomial below 1e-6", 300.0):
        ce = cycle_counterexample(tol=1e-6)
        assert ce.count == 31
        assert abs(ce.witness.real - (-0.144883)) <= 1e-4
        assert abs(ce.witness.imag - (-1.651418)) <= 1e-4
        assert 2.00945 <= ce.witness_offset <= 2.00948
        assert ce.cycle_poly_degree == 94
        assert ce.residual < 1e-6 and ce.verified


def test_criterion_5_circle_scan():
    with criterion(5, "max |t_eff| on |q-1|=2 is 1.08448 at 0.679954 pi for depth 5; "
                      "depths <= 4 stay below 1", 300.0):
        value, theta_over_pi = transmissivity_circle_max(2, 5)
        assert abs(value - 1.08448) <= 1e-4
        assert abs(theta_over_pi - 0.679954) <= 1e-3
        for n in range(1, 5):
            v, _ = transmissivity_circle_max(2, n)
            assert v < 1.0


def _soundness_roots(tree, tol=1e-8):
    poly = tree_ab(tree, Q, -1).z
    return find_roots(poly, tol=tol).roots


def test_criterion_6_soundness():
    with criterion(6, "zero chromatic roots escape the certified discs over "
                      "200 graphs per maxmaxflow 3..5 plus 100 bridge-class graphs", 600.0):
        rng = random.Random(777)
        for lam in (3, 4, 5):
            threshold = 1.0 / sp_rho_threshold(lam)
            accepted = 0
            while accepted < 200:
                tt, tree = realize(random_sp_ast(rng, rng.randint(2, 12),
                                                 series_bias=0.62))
                if tt.graph.vertex_count > 40:
                    continue
                mmf = maxmaxflow(tt.graph, limit=lam)
                if not (2 <= mmf <= lam):
                    continue
                accepted += 1
                for z in _soundness_roots(tree):
                    assert abs(z - 1.0) < threshold
                    if abs(z) > 1e-9 and abs(z - 1.0) > 1e-9:
                        assert not certify(z, lam).certified

        accepted = 0
        while accepted < 100:
            tt, tree = realize(random_sp_ast(rng, rng.randint(2, 8),
                                             bases=("e", "W"), series_bias=0.62))
            if tt.graph.vertex_count > 40:
                continue
            lam_use = max(3, maxmaxflow(tt.graph))
            accepted += 1
            for z in _soundness_roots(tree):
                if abs(z) > 1e-9 and abs(z - 1.0) > 1e-9:
                    assert not certify(z, lam_use, "wheatstone").certified


def test_criterion_7_tree_root_scan():
    with criterion(7, "all tree coloring roots up to depth 8 stay inside |q-1| < 2 "
                      "with residuals below 1e-8; locus cusp at 1.25", 600.0):
        report = conjecture_scan(2, 8, tol=1e-8)
        assert report.total_violations == 0
        assert [row.degree for row in report.rows] == [2, 4, 8, 16, 32, 64, 128, 256]
        assert all(row.max_residual < 1e-8 for row in report.rows)
        assert all(row.max_offset < 2.0 for row in report.rows)
        assert abs(cardioid_cusp() - 1.25) <= 1e-9


def test_criterion_8_region_property_suites():
    with criterion(8, "radius-bound algebra, feasibility equivalences, arc "
                      "absorption, and raster closure behave as certified", 300.0):
        rng = random.Random(31337)

        # Associativity of the radius bound on 1e3 admissible triples.
        checked = 0
        while checked < 1000:
            rho = rng.uniform(0.15, 0.92)
            a, b, c = (rng.uniform(0, rho * 0.4) for _ in range(3))
            f_bc = parallel_bound(b, c, rho)
            f_ab = parallel_bound(a, b, rho)
            if f_bc >= rho or f_ab >= rho:
                continue
            lhs = parallel_bound(a, f_bc, rho)
            rhs = parallel_bound(c, f_ab, rho)
            assert abs(lhs - rhs) < 1e-14 * (1 + abs(lhs))
            checked += 1

        # Closed-form radii against the iteration.
        for lam in (3, 4, 6, 9):
            rho = 0.93 * sp_rho_threshold(lam)
            for choice in (MINIMAL, MAXIMAL):
                closed = disc_radii(rho, lam, choice)
                iterated = radii_by_iteration(rho, closed[0], lam)
                assert max(abs(x - y) for x, y in zip(closed, iterated)) < 1e-13

        # Feasibility equivalences on a rho grid.
        for lam in (3, 4, 5):
            star = sp_rho_threshold(lam)
            for i in range(1, 50):
                rho = i / 50
                if abs(rho - star) < 1e-9:
                    continue
                want = rho <= star
                assert radii_feasible(rho, lam, MINIMAL) == want
                assert radii_feasible(rho, lam, MAXIMAL) == want
                assert ((1 + rho) ** lam <= 2 * (1 + rho * rho) ** (lam - 1)) == want

        # Arc absorption, both directions, at 20 sampled q.
        count = 0
        while count < 20:
            q = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
            if abs(q - 1) < 1.2:
                continue
            rho = 1 / abs(q - 1)
            boundary = rho * np.exp(2j * np.pi * np.arange(1024) / 1024)
            for v in np.linspace(-1.0, 0.0, 17):
                t = v / (q + v)
                assert np.all(np.abs(_t_parallel(t, boundary, q)) <= rho * (1 + 1e-9))
            outside = 0
            while outside < 5:
                y = complex(rng.uniform(-1.5, 1.8), rng.uniform(-1.5, 1.5))
                if (abs(y.imag) < 0.05 and -0.2 <= y.real <= 1.2) or abs(y - 1) < 0.1:
                    continue
                t = (y - 1) / (y + q - 1)
                assert np.max(np.abs(_t_parallel(t, boundary, q))) > rho * (1 + 1e-9)
                outside += 1
            count += 1

        # Raster closure: three sample points survive, an inside point escapes.
        for angle in (math.pi / 12, math.pi / 6, math.pi / 3):
            q = 1 + 2.2 * cmath.exp(1j * angle)
            fam = grid_closure(q, 3, 256)
            assert not fam.escaped and fam.converged
        assert grid_closure(1.1, 3, 256).escaped
