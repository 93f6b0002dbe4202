import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from annulus_roots import FinderConfig, Polynomial, PrecisionContext, find_roots, newton_refine, refine_report
from annulus_roots.grid import Approximation
from annulus_roots.testkit import RootPlan, match_roots, random_poly
from conftest import poly

CTX = PrecisionContext(256)


def test_exact_root_takes_no_steps():
    res = newton_refine(poly(-1, 0, 1), 1, 1e-12, ctx=CTX)
    assert res.converged and res.iterations == 0 and res.residual == 0


def test_quadratic_convergence_from_close_start():
    res = newton_refine(poly(-1, 0, 1), 1.1, 1e-12, ctx=CTX)
    assert res.converged and res.iterations <= 6
    assert abs(complex(res.z) - 1) < 1e-24
    assert not res.linear


def test_double_root_is_linear():
    res = newton_refine(poly(1, -2, 1), 1.1, 1e-12, max_iter=100, ctx=CTX)
    assert res.linear
    assert res.converged
    short = newton_refine(poly(1, -2, 1), 1.1, 1e-12, max_iter=5, ctx=CTX)
    assert not short.converged and short.status == "max_iter"


def test_vanishing_derivative_stalls():
    res = newton_refine(poly(-1, 0, 1), 0, 1e-12, ctx=CTX)
    assert res.status == "stalled" and not res.converged


@pytest.mark.parametrize("kw", [dict(tol=0), dict(tol=1e-9, max_iter=0)])
def test_argument_checks(kw):
    with pytest.raises(ValueError):
        newton_refine(poly(-1, 1), 0.5, **kw)


def test_report_of_fourth_roots():
    p = poly(-1, 0, 0, 0, 1)
    rep = refine_report(p, find_roots(p, FinderConfig(rho=1e-3, seed=1)), 1e-30, ctx=CTX)
    assert len(rep.approximations) == 4
    assert all(a.residual <= 1e-12 and a.converged for a in rep.approximations)


def test_empty_report():
    p = poly(-1, 0, 0, 0, 1)
    rep = find_roots(p, FinderConfig(rho=1e-3, seed=1))
    empty = dataclasses.replace(rep, approximations=[])
    assert refine_report(p, empty, 1e-20).approximations == []


def test_cluster_passes_through():
    p = poly(-1, 0, 0, 0, 1)
    rep = find_roots(p, FinderConfig(rho=1e-3, seed=1))
    cluster = Approximation(rep.approximations[0].point, 4, rep.approximations[0].radius)
    out = refine_report(p, dataclasses.replace(rep, approximations=[cluster]), 1e-20)
    assert out.approximations == [cluster]


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=10**6))
def test_refinement_never_worse(n, seed):
    p, roots = random_poly(RootPlan(n, isolation=0.2), seed)
    rep = find_roots(p, FinderConfig(rho=1e-3, seed=seed))
    out = refine_report(p, rep, 1e-40, ctx=CTX)
    with CTX.activate():
        for before, after in zip(rep.approximations, out.approximations):
            start = abs(sum(c * before.point**i for i, c in enumerate(p.coeffs)))
            if after.converged:
                assert after.residual <= float(start) * (1 + 1e-9)
                assert match_roots([after.point], [min(roots, key=lambda r: abs(r - after.point))]) <= 1e-39


def test_escaping_start_is_reverted():
    # a wrong start far from any root of a flat polynomial jumps away
    p = Polynomial.from_roots([0.0, 5.0])
    rep = find_roots(p, FinderConfig(rho=1e-3, seed=1))
    fake = Approximation(rep.approximations[0].point + 2.4, 1, rep.approximations[0].radius)
    out = refine_report(p, dataclasses.replace(rep, approximations=[fake]), 1e-20)
    assert out.approximations[0].point == fake.point
    assert out.approximations[0].status == "escaped"
