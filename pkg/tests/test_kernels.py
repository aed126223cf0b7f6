import math

import numpy as np
import pytest

from siegelsums.matcore import HalfIntegralForm, IntMat2
from siegelsums.kernels import (
    BesselOrder,
    KernelArg,
    TruncationBox,
    bessel_j,
    bessel_j_integral,
    bessel_j_series,
    script_j,
    script_j_for_forms,
    shell_matrices,
    tail_diagnostic,
    truncation_set,
    weight_w,
)


class TestBessel:
    def test_half_order_closed_form(self):
        # J_{1/2}(x) = sqrt(2/(pi x)) sin x; at x = pi/2 the value is 2/pi
        assert abs(bessel_j(0.5, math.pi / 2) - 2 / math.pi) < 1e-12
        for x in np.geomspace(0.1, 100, 60):
            cf = math.sqrt(2 / (math.pi * x)) * math.sin(x)
            assert abs(bessel_j(0.5, x) - cf) < 1e-10 * (1 + abs(cf))
            cf = math.sqrt(2 / (math.pi * x)) * (math.sin(x) / x - math.cos(x))
            assert abs(bessel_j(1.5, x) - cf) < 1e-10 * (1 + abs(cf))

    def test_small_argument_decay(self):
        # leading term (x/2)^nu / Gamma(nu+1)
        assert bessel_j(8.5, 1e-3) < 1e-30

    def test_dual_method_oracle(self):
        for nu in (0.5, 1.5, 8.5, 12.5):
            for x in (0.3, 2.0, 7.0, 10.0, 15.0):
                a = bessel_j_series(nu, x)
                b = bessel_j_integral(nu, x)
                assert abs(a - b) < 1e-10, (nu, x)
        assert abs(bessel_j_series(8.5, 10.0) - bessel_j(8.5, 10.0)) < 1e-10

    def test_nonpositive_rejected(self):
        for fn in (bessel_j, bessel_j_series, bessel_j_integral):
            with pytest.raises(ValueError):
                fn(0.5, 0.0)

    def test_order_from_weight(self):
        assert BesselOrder.from_weight(10).ell == 8.5
        with pytest.raises(ValueError):
            BesselOrder.from_weight(9)


class TestScriptJ:
    def test_depends_only_on_eigenvalues(self):
        m = np.array([[2.0, 0.3], [0.1, 1.0]])
        u = np.array([[1.0, 1.0], [0.0, 1.0]])
        a1 = KernelArg.from_matrix(m)
        a2 = KernelArg.from_matrix(u @ m @ np.linalg.inv(u))
        assert abs(a1.eig1 - a2.eig1) < 1e-12 and abs(a1.eig2 - a2.eig2) < 1e-12
        assert abs(script_j(8.5, a1) - script_j(8.5, a2)) < 1e-10

    def test_go2_moduli_reduce_to_scalar(self):
        c = IntMat2(2, 1, -1, 2)
        arg = script_j_for_forms(8.5, HalfIntegralForm.scalar(2),
                                 HalfIntegralForm.scalar(3), c)
        assert abs(arg.eig1 - 6 / 5) < 1e-12 and abs(arg.eig2 - 6 / 5) < 1e-12

    def test_dual_resolution(self):
        for eigs in ((1.0, 1.0), (0.04, 9.0), (2.5, 0.3)):
            v1 = script_j(8.5, KernelArg(*eigs))
            v2 = script_j(8.5, KernelArg(*eigs), tol=1e-13)
            assert abs(v1 - v2) < 1e-10

    def test_rejects_nonpositive_eigenvalues(self):
        with pytest.raises(ValueError):
            KernelArg(0.0, 1.0)


class TestWeight:
    def test_small_argument_near_one(self):
        # contour-shift oracle: residues at s = 0, -2, -3 give
        # W(x) = 1 - (3/2)(2 pi)^4 / ((k-2)(k-3)) x^2 + c3 x^3 + O(x^4)
        k = 10
        x = 1e-3
        c2 = -1.5 * (2 * math.pi) ** 4 / ((k - 2) * (k - 3))
        c3 = ((2 * math.pi) ** 6 * math.gamma(6) / math.gamma(9)
              * (1 - 9) / (-3) * 0.5)
        oracle = 1 + c2 * x ** 2 + c3 * x ** 3
        assert abs(weight_w(x, k) - oracle) < 1e-8

    def test_large_argument_decay(self):
        assert abs(weight_w(100.0, 10)) < 1e-6

    def test_real_and_decaying(self):
        worst = 0.0
        for x in np.geomspace(1e-3, 1e3, 21):
            w = weight_w(x, 10)
            worst = max(worst, abs(w) * (1 + x) ** 3)
        assert worst < 1e3  # recorded decay constant

    def test_poly_variants_differ(self):
        assert weight_w(1.0, 10) != weight_w(1.0, 10, poly="(1-s)^2")

    def test_bad_input(self):
        with pytest.raises(ValueError):
            weight_w(-1.0, 10)
        with pytest.raises(ValueError):
            weight_w(1.0, 9)


def brute_box_members(m):
    out = []
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            for c in range(-m, m + 1):
                for d in range(-m, m + 1):
                    det = a * d - b * c
                    if det != 0 and abs(det) <= m:
                        out.append((a, b, c, d))
    return out


class TestTruncation:
    def test_box_parameters(self):
        box = TruncationBox.for_params(10, 3)
        assert abs(box.beta - 12 / 22) < 1e-12
        assert box.m_bound == 2

    def test_membership(self):
        box = TruncationBox.for_params(10, 3)
        assert box.contains(IntMat2.identity())
        assert not box.contains(IntMat2.diag(0, 1))     # singular
        assert not box.contains(IntMat2.diag(3, 1))     # entry too large
        assert not box.contains(IntMat2(2, 2, -2, 2))   # determinant too large

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_stream_matches_exhaustive_filter(self, m):
        box = TruncationBox(beta=1.0, level=2, ell=8.5)
        object.__setattr__(box, "m_bound", m)
        got = [c.entries() for c in truncation_set(box)]
        want = sorted(brute_box_members(m))
        assert got == want

    def test_unit_box_count(self):
        # entries and determinant bounded by 1: exhaustive filter gives 40
        box = TruncationBox(beta=1.0, level=2, ell=8.5)
        object.__setattr__(box, "m_bound", 1)
        elems = list(truncation_set(box))
        assert len(elems) == len(brute_box_members(1)) == 40
        assert all(abs(c.det()) == 1 for c in elems)

    def test_shell_disjoint_from_box(self):
        box = TruncationBox.for_params(10, 3)
        shell = shell_matrices(box, 1)
        assert shell and all(not box.contains(c) for c in shell)


class TestTailDiagnostic:
    def test_empty_shell_zero_tail(self):
        rep = tail_diagnostic(1, 1, 3, 10, TruncationBox.default_beta(10),
                              shell_width=0)
        assert rep.observed_tail == 0.0 and rep.shell_size == 0

    def test_default_shell_report(self):
        rep = tail_diagnostic(1, 1, 3, 10, TruncationBox.default_beta(10))
        assert rep.shell_size > 0
        assert rep.observed_tail <= 10 * rep.predicted_envelope
        assert rep.minkowski_samples
        for ms in rep.minkowski_samples:
            assert ms.short_count >= 0
            assert ms.short_constant >= 0
        # the identity sample has no unimodular U with tr(A[U]) <= 1
        assert rep.minkowski_samples[0].short_count == 0
