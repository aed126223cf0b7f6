"""Fast property suites behind the ``verify`` subcommand.

Each check is a small, self-contained invariant run; the CLI exits nonzero
if any check fails.  These are deliberately lighter than the pytest suite
but cover every module's core contracts.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from .matcore import (
    GaussianInt,
    HalfIntegralForm,
    IntMat2,
    SymRat2,
    aut_count,
    elementary_divisors,
    gaussian_totient,
    kronecker,
    minkowski_reduce,
)
from . import expsums, kernels, lfun, petersson, sp4


def _check_matcore():
    rng = random.Random(11)
    for _ in range(150):
        c = IntMat2(*(rng.randint(-20, 20) for _ in range(4)))
        if c.det() == 0:
            continue
        c1, c2, u, v = elementary_divisors(c)
        assert u.mul(c).mul(v) == IntMat2.diag(c1, c2)
        assert c2 % c1 == 0
    for _ in range(60):
        s = SymRat2(Fraction(rng.randint(1, 20)),
                    Fraction(rng.randint(-12, 12), rng.randint(1, 4)),
                    Fraction(rng.randint(1, 20)))
        if not s.is_positive_definite():
            continue
        red, u = minkowski_reduce(s)
        assert red.det() == s.det() and red.is_positive_definite()
    for f in (HalfIntegralForm(1, 0, 1), HalfIntegralForm(1, 0, 2),
              HalfIntegralForm(1, 1, 1), HalfIntegralForm(2, 1, 3)):
        n = aut_count(f)
        assert 24 % n == 0 and n % 2 == 0
    for q in (1, -4, 5, -3, 8, 13):
        period = 4 * abs(q)
        for n in range(1, 80):
            assert kronecker(q, n) == kronecker(q, n + period)
    pairs = [(GaussianInt(1, 1), GaussianInt(2, 1)),
             (GaussianInt(3, 0), GaussianInt(1, 2)),
             (GaussianInt(2, 1), GaussianInt(2, -1))]
    for g1, g2 in pairs:
        assert (gaussian_totient(g1.mul(g2))
                == gaussian_totient(g1) * gaussian_totient(g2))


def _check_sp4():
    rng = random.Random(12)
    for detval in range(1, 7):
        base = IntMat2.diag(1, detval)
        n0 = len(sp4.enumerate_bottom_cosets(base))
        for _ in range(2):
            u = _random_unimodular(rng)
            v = _random_unimodular(rng)
            cc = u.adj().scale(u.det()).mul(base).mul(v.adj().scale(v.det()))
            assert len(sp4.enumerate_bottom_cosets(cc)) == n0
    c = IntMat2.scalar(3)
    ds = sp4.enumerate_bottom_cosets(c)
    assert len(ds) == 18
    for d in ds:
        assert sp4.is_bottom_pair(c, d)
        comp = sp4.complete_to_symplectic(c, d)
        assert sp4.is_symplectic(sp4.blocks_to_mat4(comp.a, comp.b, c, d))


def _check_expsums():
    hi = HalfIntegralForm.identity()
    forms = [HalfIntegralForm(1, 0, 1), HalfIntegralForm(1, 1, 1),
             HalfIntegralForm(2, 1, 1), HalfIntegralForm(1, 0, 2)]
    for p in (3, 5):
        cm = IntMat2.scalar(p)
        for q in forms:
            for t in forms:
                a = expsums.kloosterman(q, t, cm).value
                b = expsums.kloosterman_pI(q, t, p).value
                assert abs(a - b) < 1e-9
    assert abs(expsums.kloosterman(hi, hi, IntMat2.scalar(3)).value - 15) < 1e-9
    for cmat in (IntMat2.identity(), IntMat2.diag(1, 2)):
        lhs = expsums.kloosterman_factored(hi, hi, 3, cmat).value
        rhs = expsums.kloosterman(hi, hi, cmat.scale(3)).value
        assert abs(lhs - rhs) < 1e-9
    for n in (3, 7):
        assert expsums.congruence_count(n, 1, 0, 1, 0, 0, 1, 1) == n * n - 1
        assert expsums.congruence_count(n, 1, 0, 1, 0, 0, n - 1, n - 2) == n * n - 1
    expsums.twisted_average(IntMat2(1, 1, -1, 1), 1, 1)
    expsums.twisted_average(IntMat2.identity(), -4, 1)
    rng = random.Random(13)
    for _ in range(20):
        q = forms[rng.randrange(len(forms))]
        t = forms[rng.randrange(len(forms))]
        while True:
            c = IntMat2(*(rng.randint(-2, 2) for _ in range(4)))
            if 0 < abs(c.det()) <= 5:
                break
        u, v = _random_unimodular(rng), _random_unimodular(rng)
        cc = u.adj().scale(u.det()).mul(c).mul(v.adj().scale(v.det()))
        lhs = expsums.kloosterman(q, t, cc).value
        rhs = expsums.kloosterman(q.conjugate_right(u),
                                  t.conjugate_left(v), c).value
        assert abs(lhs - rhs) < 1e-9


def _check_kernels():
    for x in np.linspace(0.2, 60, 23):
        cf = math.sqrt(2 / (math.pi * x)) * math.sin(x)
        assert abs(kernels.bessel_j(0.5, x) - cf) < 1e-10 * max(1, abs(cf)) + 1e-13
    assert abs(kernels.bessel_j_series(8.5, 10.0)
               - kernels.bessel_j_integral(8.5, 10.0)) < 1e-10
    v1 = kernels.script_j(8.5, kernels.KernelArg(1.0, 2.0))
    v2 = kernels.script_j(8.5, kernels.KernelArg(1.0, 2.0), tol=1e-13)
    assert abs(v1 - v2) < 1e-10
    # decay envelope W(x) (1+x)^3 bounded
    worst = 0.0
    for x in np.geomspace(1e-3, 1e3, 25):
        worst = max(worst, abs(kernels.weight_w(x, 10)) * (1 + x) ** 3)
    assert worst < 1e3
    box = kernels.TruncationBox(beta=1.0, level=2, ell=8.5)
    elems = list(kernels.truncation_set(box))
    assert all(box.contains(c) for c in elems)
    assert len(set(c.entries() for c in elems)) == len(elems)


def _check_lfun():
    assert abs(lfun.zeta(2.0) - math.pi ** 2 / 6) < 1e-12
    assert abs(lfun.dirichlet_l(1.0, -4).value - math.pi / 4) < 1e-12
    s = 1.1 + 0.4j
    assert abs(lfun.zeta_gaussian(s)
               - lfun.zeta(s) * lfun.dirichlet_l(s, -4).value) < 1e-12
    for q in (1, -4, 5):
        ep = lfun.euler_product_l(3.0, q, 4000)
        assert abs(ep - lfun.dirichlet_l(3.0, q).value) < 1e-7
    for n in range(1, 400):
        d = sum(1 for x in range(1, n + 1) if n % x == 0)
        assert abs(lfun.r_coeff(1, n)) <= d / math.sqrt(n) + 1e-12


def _check_petersson():
    ra = petersson.main_term_residue(5, 13, 1000.0, 10, radius=0.05)
    rb = petersson.main_term_residue(5, 13, 1000.0, 10, radius=0.15)
    assert abs(ra.residue - rb.residue) < 1e-8
    prod = 4.0
    for q in (5, -20, 13, -52, 65):
        prod *= lfun.dirichlet_l(1.0, q).value.real
    assert abs(ra.residue - prod) < 1e-6
    r1 = petersson.main_term_residue(5, 13, 100.0, 10)
    r2 = petersson.main_term_residue(5, 13, 10000.0, 10)
    assert abs(r1.residue - r2.residue) < 1e-8
    fit = petersson.leading_coeff_fit(1, 1, 10, levels=[1e2, 1e3, 1e4, 1e5])
    assert abs(fit.leading - (4.0 / 3.0) * (math.pi / 4) ** 2) < 1e-4


def _random_unimodular(rng) -> IntMat2:
    u = IntMat2.identity()
    for _ in range(rng.randint(1, 3)):
        u = u.mul(IntMat2(1, rng.randint(-2, 2), 0, 1))
        u = u.mul(IntMat2(1, 0, rng.randint(-2, 2), 1))
    if rng.random() < 0.5:
        u = u.mul(IntMat2(0, 1, 1, 0))
    return u


_SUITES = {
    "matcore": _check_matcore,
    "sp4": _check_sp4,
    "expsums": _check_expsums,
    "kernels": _check_kernels,
    "lfun": _check_lfun,
    "petersson": _check_petersson,
}


def run_suite(module: str) -> tuple[int, int, list[str]]:
    """Run one module's checks (or all); returns (passed, failed, failures)."""
    names = list(_SUITES) if module == "all" else [module]
    passed, failed, failures = 0, 0, []
    for name in names:
        try:
            _SUITES[name]()
            passed += 1
        except Exception as exc:  # noqa: BLE001 - report any check failure
            failed += 1
            failures.append(f"{name}: {exc!r}")
    return passed, failed, failures
