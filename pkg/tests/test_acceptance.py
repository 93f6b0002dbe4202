"""Exit criteria, one test each.  Every test records a PASS/FAIL line that
is printed in the terminal summary, then asserts."""

import math
import random
import subprocess
import sys
import time

import pytest
from gmpy2 import mpfr

from annulus_roots import (
    FinderConfig,
    Polynomial,
    PrecisionContext,
    delta_for,
    distances_from_point,
    estimate_radii,
    failure_probability_bound,
    find_roots,
    graeffe_step,
    newton_polygon_radii,
    real_root_intervals,
    refine_report,
)
from annulus_roots.poly import to_mpc
from annulus_roots.testkit import RootPlan, oracle_roots, random_poly
from conftest import poly

pytestmark = pytest.mark.acceptance

DEGREES = (4, 8, 16, 32, 64)
THETAS = (2, 1.25, 1.05)
CORPUS_SIZE = 50


def _corpus():
    """Seeded random polynomials with roots in the unit disc, plus their
    oracle radii (sorted non-increasing)."""
    out = []
    for n in DEGREES:
        for k in range(CORPUS_SIZE):
            p, _ = random_poly(RootPlan(n), 1000 * n + k)
            ctx = PrecisionContext.for_polynomial(p)
            truth = sorted((abs(r) for r in oracle_roots(p, ctx)), reverse=True)
            out.append((p, ctx, truth))
    return out


@pytest.fixture(scope="module")
def corpus():
    start = time.perf_counter()
    data = _corpus()
    return data, time.perf_counter() - start


def _ratio_ok(est, truth, theta, ctx):
    with ctx.doubled().activate():
        theta = mpfr(theta) * (1 + mpfr(2) ** -64)
        return all(r / theta <= t <= r * theta for r, t in zip(est, truth))


def test_criterion_01_radii_within_theta(corpus, criterion):
    data, setup = corpus
    start = time.perf_counter()
    failures = 0
    checks = 0
    for p, ctx, truth in data:
        for theta in THETAS:
            est = estimate_radii(p, theta, ctx).radii
            checks += 1
            failures += not _ratio_ok(est, truth, theta, ctx)
    elapsed = time.perf_counter() - start + setup
    ok = failures == 0 and elapsed <= 120
    criterion(1, ok, f"{checks - failures}/{checks} estimates within theta, {elapsed:.1f}s (limit 120s)")
    assert ok


def test_criterion_02_newton_polygon_factor(corpus, criterion):
    data, _ = corpus
    start = time.perf_counter()
    failures = 0
    for p, ctx, truth in data:
        est = newton_polygon_radii(p, ctx).radii
        failures += not _ratio_ok(est, truth, 2 * p.degree, ctx)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed <= 30
    criterion(2, ok, f"{len(data) - failures}/{len(data)} polygons within 2n, {elapsed:.1f}s (limit 30s)")
    assert ok


def _relative_match(found, truth, ctx):
    """Worst relative error over a greedy nearest pairing."""
    worst = mpfr(0)
    with ctx.activate():
        left = list(truth)
        for z in found:
            k = min(range(len(left)), key=lambda i: abs(left[i] - z))
            w = left.pop(k)
            worst = max(worst, abs(w - z) / abs(w))
    return worst


def test_criterion_03_graeffe_identity(criterion):
    start = time.perf_counter()
    ctx = PrecisionContext(256)
    worst = mpfr(0)
    rng = random.Random(3)
    for k in range(100):
        n = rng.randint(1, 8)
        q, _ = random_poly(RootPlan(n, isolation=0.01, radius_range=(0.05, 2.0)), 7000 + k)
        squares = []
        with ctx.doubled().activate():
            squares = [r * r for r in oracle_roots(q, ctx)]
        got = oracle_roots(graeffe_step(q, ctx), ctx)
        worst = max(worst, _relative_match(got, squares, ctx.doubled()))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-15 and elapsed <= 30
    criterion(3, ok, f"worst relative mismatch {float(worst):.2e} (limit 1e-15), {elapsed:.1f}s")
    assert ok


def test_criterion_04_distances(criterion):
    start = time.perf_counter()
    p = poly(-1, 0, 1)
    cases = [(0, [1, 1]), (3, [4, 2]), (1j, [math.sqrt(2), math.sqrt(2)])]
    ok = True
    for z, want in cases:
        est = distances_from_point(p, z, 1.05, PrecisionContext(256))
        ok &= all(1 / 1.05 <= float(r) / w <= 1.05 for r, w in zip(est.radii, want))
    elapsed = time.perf_counter() - start
    ok = ok and elapsed <= 1
    criterion(4, ok, f"x^2-1 distances from 0, 3, i within factor 1.05, {elapsed:.2f}s")
    assert ok


def _quartic_with_cluster(bits):
    """(x^4 - 1)(x^4 - 10^-200) expanded at ``bits`` of precision."""
    with PrecisionContext(bits).activate():
        c = to_mpc("1e-200", bits)
        zero = to_mpc(0, bits)
        return Polynomial((c, zero, zero, zero, -(1 + c), zero, zero, zero, to_mpc(1, bits)))


def test_criterion_05_cluster_example(criterion):
    start = time.perf_counter()
    bits = 1024
    p = _quartic_with_cluster(bits)
    ctx = PrecisionContext(bits)
    rho = 1e-3
    good = 0
    seeds = 100
    for seed in range(seeds):
        rep = find_roots(p, FinderConfig(rho=rho, seed=seed, ctx=ctx, clusters=True))
        simple = [complex(a.point) for a in rep.approximations if a.multiplicity == 1]
        clusters = [a for a in rep.approximations if a.multiplicity == 4 and abs(complex(a.point)) <= float(a.radius)]
        units = all(any(abs(z - u) <= rho * math.sqrt(2) for z in simple) for u in (1, -1, 1j, -1j))
        good += units and len(simple) == 4 and len(clusters) == 1
    elapsed = time.perf_counter() - start
    ok = good >= 95 and elapsed <= 120
    criterion(5, ok, f"{good}/{seeds} seeds with 4 unit roots and a multiplicity-4 node at 0, {elapsed:.1f}s")
    assert ok


def test_criterion_06_monte_carlo_failure_rate(criterion):
    start = time.perf_counter()
    delta, rho, runs = 0.5, 1e-4, 500
    p, roots = random_poly(RootPlan(8, isolation=delta), 2026)
    ctx = PrecisionContext.for_polynomial(p)
    misses = 0
    nodes = set()
    for seed in range(runs):
        rep = find_roots(p, FinderConfig(rho=rho, seed=seed, ctx=ctx))
        nodes.add(rep.nodes_total)
        pts = [complex(a.point) for a in rep.approximations if a.multiplicity == 1]
        misses += not all(any(abs(complex(r) - z) <= rep.error_radius for z in pts) for r in roots)
    bound = failure_probability_bound(rho, delta, max(nodes))
    sigma = math.sqrt(bound * (1 - bound) / runs)
    rate = misses / runs
    elapsed = time.perf_counter() - start
    ok = rate <= bound + 3 * sigma and elapsed <= 300
    criterion(6, ok, f"miss rate {rate:.4f} vs bound {bound:.4f} + 3 sigma {3 * sigma:.4f} (N={max(nodes)}), {elapsed:.1f}s")
    assert ok


def test_criterion_07_formulas(criterion):
    d = delta_for(4, 1e-3, 0.01)
    f = failure_probability_bound(0.001, 1, 16)
    ok = abs(d - 61.115) <= 0.001 and abs(f - 0.2161) <= 0.0001
    criterion(7, ok, f"delta_for(4, 1e-3, 0.01) = {d:.4f}, failure_probability_bound(1e-3, 1, 16) = {f:.5f}")
    assert ok


def test_criterion_08_real_root_completeness(criterion):
    start = time.perf_counter()
    rng = random.Random(8)
    missed = 0
    too_many = 0
    real_total = 0
    for k in range(100):
        n = rng.randint(1, 64)
        p, _ = random_poly(RootPlan(n, real=True, radius_range=(0, rng.uniform(0.5, 8))), 8000 + k)
        ctx = PrecisionContext.for_polynomial(p)
        ivs = real_root_intervals(p, 1e-3, ctx)
        too_many += len(ivs) > 2 * n
        for r in oracle_roots(p, ctx):
            if abs(r.imag) <= mpfr(2) ** (-ctx.bits // 4) * max(1, abs(r)):
                real_total += 1
                missed += not any(iv.lo <= r.real <= iv.hi for iv in ivs)
    elapsed = time.perf_counter() - start
    ok = missed == 0 and too_many == 0 and elapsed <= 60
    criterion(8, ok, f"{real_total - missed}/{real_total} real roots covered, {too_many} over 2n, {elapsed:.1f}s")
    assert ok


def test_criterion_09_end_to_end(criterion):
    start = time.perf_counter()
    degrees = (4, 8, 16, 24, 32)
    runs = 200
    good = 0
    for seed in range(runs):
        n = degrees[seed % len(degrees)]
        # isolation 0.3 with the root disc grown just enough to pack n roots
        radius = max(1.0, math.sqrt(n / 20))
        p, _ = random_poly(RootPlan(n, isolation=0.3, radius_range=(0, radius)), 9000 + seed)
        ctx = PrecisionContext.for_polynomial(p)
        rep = find_roots(p, FinderConfig(rho=1e-8 * radius, seed=seed, ctx=ctx))
        rep = refine_report(p, rep, 1e-30, ctx=ctx)
        truth = oracle_roots(p, ctx)
        simple = [a for a in rep.approximations if a.multiplicity == 1]
        with ctx.activate():
            matched = all(a.converged and min(abs(a.point - t) for t in truth) <= 1e-10 for a in simple)
        good += matched and len(simple) == n
    elapsed = time.perf_counter() - start
    ok = good >= 0.99 * runs and elapsed <= 180
    criterion(9, ok, f"{good}/{runs} runs with every root refined to 1e-10, {elapsed:.1f}s (limit 180s)")
    assert ok


def _write(path, p):
    path.write_text("".join(f"{c.real} {c.imag}\n" for c in p.coeffs))
    return str(path)


def test_criterion_10_cli_determinism(tmp_path, criterion):
    cplx = _write(tmp_path / "c.txt", random_poly(RootPlan(10, isolation=0.1), 10)[0])
    real = _write(tmp_path / "r.txt", random_poly(RootPlan(10, real=True), 10)[0])
    cmds = {
        mode: [sys.executable, "-m", "annulus_roots", "--mode", mode, "--seed", "5", "--rho", "1e-4",
               real if mode == "real" else cplx]
        for mode in ("complex", "clusters", "real", "radii")
    }
    same = 0
    for cmd in cmds.values():
        a, b = (subprocess.run(cmd, capture_output=True) for _ in range(2))
        same += a.returncode == b.returncode == 0 and a.stdout == b.stdout and bool(a.stdout)
    ok = same == len(cmds)
    criterion(10, ok, f"{same}/{len(cmds)} modes give byte-identical output across two CLI runs")
    assert ok
