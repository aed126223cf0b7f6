"""Archimedean ingredients: Bessel functions, the double-Bessel kernel,
the smooth Mellin weight, and the rank-2 truncation set with tail
diagnostics.

The production Bessel evaluator delegates to scipy's jv; an ascending
series and an integral-representation quadrature are kept alongside as
mutually independent cross-check routes for half-integral orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import jv as _scipy_jv, loggamma as _loggamma

from .matcore import (
    HalfIntegralForm,
    IntMat2,
    SymRat2,
    divisors,
    minkowski_reduce,
)


# ---------------------------------------------------------------------------
# Bessel functions of real order


def bessel_j(nu: float, x: float) -> float:
    """Bessel function J_nu(x) for nu >= 1/2, x > 0."""
    if x <= 0:
        raise ValueError("x must be positive")
    return float(_scipy_jv(nu, x))


def bessel_j_series(nu: float, x: float, tol: float = 1e-17) -> float:
    """Ascending power series for J_nu(x); reliable for x up to ~20."""
    if x <= 0:
        raise ValueError("x must be positive")
    log_lead = nu * math.log(x / 2) - math.lgamma(nu + 1)
    term = math.exp(log_lead)
    total = term
    m = 0
    q = -0.25 * x * x
    while m < 500:
        m += 1
        term *= q / (m * (m + nu))
        total += term
        if abs(term) < tol * max(abs(total), 1e-300):
            break
    return total


def bessel_j_integral(nu: float, x: float) -> float:
    """J_nu(x) from the Schlaefli integral representation.

    (1/pi) * int_0^pi cos(nu*tau - x*sin(tau)) dtau
        - sin(nu*pi)/pi * int_0^inf exp(-nu*t - x*sinh(t)) dt
    """
    if x <= 0:
        raise ValueError("x must be positive")
    panels = max(24, int(x / 2) + 24)
    nodes, weights = _gauss_legendre(16)
    total = 0.0
    h = math.pi / panels
    for i in range(panels):
        a = i * h
        tau = a + h * nodes
        total += h * np.dot(weights, np.cos(nu * tau - x * np.sin(tau)))
    first = total / math.pi
    s = math.sin(nu * math.pi)
    if abs(s) < 1e-15:
        return first
    # find T with nu*T + x*sinh(T) ~ 46 so the droppped tail is ~1e-20
    t_hi = 1.0
    while nu * t_hi + x * math.sinh(t_hi) < 46:
        t_hi *= 1.5
    total2 = 0.0
    sub = 24
    h2 = t_hi / sub
    for i in range(sub):
        a = i * h2
        t = a + h2 * nodes
        total2 += h2 * np.dot(weights, np.exp(-nu * t - x * np.sinh(t)))
    return first - s / math.pi * total2


@lru_cache(maxsize=None)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    # nodes/weights on [0, 1]
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = 0.5 * (x + 1.0)
    weights = 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


# ---------------------------------------------------------------------------
# The double-Bessel kernel


@dataclass(frozen=True)
class BesselOrder:
    """Half-integral Bessel order derived from an even weight k >= 10."""

    ell: float

    @staticmethod
    def from_weight(k: int) -> "BesselOrder":
        if k < 10 or k % 2:
            raise ValueError("weight must be an even integer >= 10")
        return BesselOrder(k - 1.5)


@dataclass(frozen=True)
class KernelArg:
    """Positive eigenvalue pair (s1^2, s2^2) of a diagonalizable 2x2 matrix."""

    eig1: float
    eig2: float

    def __post_init__(self):
        if self.eig1 <= 0 or self.eig2 <= 0:
            raise ValueError("eigenvalues must be positive")

    @staticmethod
    def from_matrix(m: np.ndarray) -> "KernelArg":
        """Eigenvalues via the quadratic formula; they must be real positive."""
        tr = float(m[0, 0] + m[1, 1])
        det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
        disc = tr * tr - 4.0 * det
        if disc < 0:
            if disc < -1e-9 * max(tr * tr, 1.0):
                raise ValueError("matrix has non-real eigenvalues")
            disc = 0.0
        r = math.sqrt(disc)
        return KernelArg(0.5 * (tr - r), 0.5 * (tr + r))

    def s_values(self) -> tuple[float, float]:
        return math.sqrt(self.eig1), math.sqrt(self.eig2)


def script_j(ell: float, arg: KernelArg, tol: float = 1e-11) -> float:
    """int_0^{pi/2} J_ell(4 pi s1 sin t) J_ell(4 pi s2 sin t) sin t dt.

    Composite Gauss-Legendre quadrature with panel doubling until the value
    moves by less than ``tol`` (absolute); deterministic for fixed inputs.
    """
    s1, s2 = arg.s_values()
    a1 = 4.0 * math.pi * s1
    a2 = 4.0 * math.pi * s2
    nodes, weights = _gauss_legendre(16)
    prev = None
    panels = max(4, int((a1 + a2) / 8) + 4)
    for _ in range(12):
        h = (math.pi / 2) / panels
        total = 0.0
        for i in range(panels):
            t = i * h + h * nodes
            st = np.sin(t)
            total += h * np.dot(weights,
                                _scipy_jv(ell, a1 * st) * _scipy_jv(ell, a2 * st) * st)
        if prev is not None and abs(total - prev) < tol:
            return float(total)
        prev = total
        panels *= 2
    return float(prev)


def script_j_for_forms(ell: float, t_form: HalfIntegralForm,
                       q_form: HalfIntegralForm, c: IntMat2) -> KernelArg:
    """Eigenvalue argument of the kernel attached to T C^{-1} Q C^{-T}."""
    det = c.det()
    cinvt = np.array([[c.d, -c.b], [-c.c, c.a]], dtype=float) / det
    tm = np.array([[t_form.t1, t_form.t2 / 2], [t_form.t2 / 2, t_form.t4]])
    qm = np.array([[q_form.t1, q_form.t2 / 2], [q_form.t2 / 2, q_form.t4]])
    return KernelArg.from_matrix(tm @ cinvt @ qm @ cinvt.T)


# ---------------------------------------------------------------------------
# Smooth weight from the shifted Mellin transform of the gamma factors


def weight_w(x: float, k: int, poly: str = "1-s^2",
             height: float = 60.0, panel: float = 0.75) -> float:
    """The approximate-functional-equation weight W(x) for even weight k.

    Contour integral on Re s = 2 of

        (2 pi)^{-2s} Gamma(s+1) Gamma(s+k-1) / Gamma(k-1) * poly(s) * x^{-s} / s,

    truncated at |Im s| = ``height`` (the integrand decays like
    exp(-pi |Im s|), so the truncation error is far below 1e-12).  ``poly``
    selects the polynomial factor: "1-s^2" (default) or "(1-s)^2".
    """
    if x <= 0:
        raise ValueError("x must be positive")
    if k < 10 or k % 2:
        raise ValueError("weight must be an even integer >= 10")
    nodes, weights = _gauss_legendre(16)
    lg_norm = math.lgamma(k - 1)
    panels = int(math.ceil(height / panel))
    total = 0.0
    for i in range(panels):
        a = i * panel
        tau = a + panel * nodes
        s = 2.0 + 1j * tau
        g = np.exp(-2 * s * math.log(2 * math.pi) + _loggamma(s + 1)
                   + _loggamma(s + k - 1) - lg_norm)
        pf = _poly_factor(s, poly)
        integrand = g * pf * np.exp(-s * math.log(x)) / s
        total += panel * np.dot(weights, integrand.real)
    # conjugate symmetry: the full line integral is twice the real half
    return float(total / math.pi)


def _poly_factor(s, poly: str):
    if poly == "1-s^2":
        return 1.0 - s * s
    if poly == "(1-s)^2":
        return (1.0 - s) ** 2
    raise ValueError(f"unknown poly factor {poly!r}")


# ---------------------------------------------------------------------------
# Truncation set for the rank-2 sum


@dataclass(frozen=True)
class TruncationBox:
    """Integer matrices with 0 != |det| <= M and all entries bounded by M."""

    beta: float
    level: int
    ell: float
    m_bound: int = field(init=False)

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        bound = self.level ** ((1.0 + self.beta) / self.ell)
        object.__setattr__(self, "m_bound", int(math.ceil(bound - 1e-12)))

    def contains(self, c: IntMat2) -> bool:
        det = c.det()
        if det == 0 or abs(det) > self.m_bound:
            return False
        return all(abs(e) <= self.m_bound for e in c.entries())

    @staticmethod
    def default_beta(k: int) -> float:
        """The error-balancing choice beta = (2k - 8) / (2k + 2)."""
        return (2.0 * k - 8.0) / (2.0 * k + 2.0)

    @staticmethod
    def for_params(k: int, level: int, beta: float | None = None) -> "TruncationBox":
        ell = k - 1.5
        if beta is None:
            beta = TruncationBox.default_beta(k)
        return TruncationBox(beta=beta, level=level, ell=ell)


def truncation_set(box: TruncationBox):
    """All matrices in the box, in lexicographic order of (a, b, c, d).

    Generation walks (a, d, det) and factorizes b*c = a*d - det, so the
    cost is divisor-bounded rather than a full four-entry scan.
    """
    m = box.m_bound
    out = []
    for a in range(-m, m + 1):
        for d in range(-m, m + 1):
            for det in range(-m, m + 1):
                if det == 0:
                    continue
                r = a * d - det  # = b * c
                if r == 0:
                    for b in range(-m, m + 1):
                        out.append(IntMat2(a, b, 0, d))
                    for c in range(-m, m + 1):
                        if c != 0:
                            out.append(IntMat2(a, 0, c, d))
                else:
                    for b in divisors(r):
                        q = r // b
                        for bb, cc in ((b, q), (-b, -q)):
                            if abs(bb) <= m and abs(cc) <= m:
                                out.append(IntMat2(a, bb, cc, d))
    out.sort(key=IntMat2.entries)
    yield from out


# ---------------------------------------------------------------------------
# Tail diagnostics for the rank-2 truncation


@dataclass(frozen=True)
class MinkowskiSample:
    matrix: SymRat2
    short_count: int
    short_constant: float      # count * sqrt(det A)
    weighted_sum: float        # sum over tr(A[U]) > 1 of det^{5/4} tr^{-3/2}
    weighted_constant: float   # weighted_sum / det^{3/4}


@dataclass(frozen=True)
class TailReport:
    level: int
    weight: int
    beta: float
    m_bound: int
    shell_size: int
    observed_tail: float
    predicted_exponent: float
    predicted_envelope: float
    minkowski_samples: tuple[MinkowskiSample, ...]


def shell_matrices(box: TruncationBox, width: int = 1) -> list[IntMat2]:
    """Nonsingular matrices just outside the box: entries and |det| at most
    m_bound + width but not members of the box."""
    m = box.m_bound + width
    out = []
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            for c in range(-m, m + 1):
                for d in range(-m, m + 1):
                    det = a * d - b * c
                    if det == 0 or abs(det) > m:
                        continue
                    cm = IntMat2(a, b, c, d)
                    if not box.contains(cm):
                        out.append(cm)
    return out


def tail_diagnostic(m1: int, m2: int, level: int, k: int, beta: float,
                    shell_width: int = 1) -> TailReport:
    """Observed size of the rank-2 summand just outside the truncation box.

    Sums |K(m2 I, m1 I; N C)| / (N^3 |det C|^{3/2}) * |kernel| over a finite
    shell around the box and reports it next to the predicted envelope
    N^{-1-beta+5(1+beta)/(2 ell)}; also samples Minkowski-reduced forms
    attached to moduli in the shell and records lattice-point counting
    ratios for the short-vector and weighted-trace sums.
    """
    from .expsums import kloosterman  # local import; avoids a cycle

    ell = k - 1.5
    box = TruncationBox(beta=beta, level=level, ell=ell)
    q_form = HalfIntegralForm.scalar(m2)
    t_form = HalfIntegralForm.scalar(m1)
    shell = shell_matrices(box, shell_width) if shell_width > 0 else []
    observed = 0.0
    for c in shell:
        nc = c.scale(level)
        kv = kloosterman(q_form, t_form, nc)
        arg = _kernel_arg_scaled(c, m1 * m2, level)
        observed += (abs(kv.value) / (level ** 3 * abs(c.det()) ** 1.5)
                     * abs(script_j(ell, arg)))
    exponent = -1.0 - beta + 5.0 * (1.0 + beta) / (2.0 * ell)
    samples = tuple(_minkowski_sample(c) for c in _sample_moduli(shell))
    return TailReport(
        level=level, weight=k, beta=beta, m_bound=box.m_bound,
        shell_size=len(shell), observed_tail=observed,
        predicted_exponent=exponent,
        predicted_envelope=float(level) ** exponent,
        minkowski_samples=samples,
    )


def _kernel_arg_scaled(c: IntMat2, m1m2: int, level: int) -> KernelArg:
    det = c.det()
    cinv = np.array([[c.d, -c.b], [-c.c, c.a]], dtype=float) / det
    mat = (m1m2 / level ** 2) * (cinv @ cinv.T)
    return KernelArg.from_matrix(mat)


def _sample_moduli(shell: list[IntMat2]) -> list[IntMat2]:
    picks = [IntMat2.identity()]
    step = max(1, len(shell) // 4)
    picks.extend(shell[::step][:4])
    return picks


def _minkowski_sample(c: IntMat2, bound: float = 12.0) -> MinkowskiSample:
    from fractions import Fraction

    det = c.det()
    adj = c.adj()
    # (C^{-T} C^{-1}) as an exact rational form, then Minkowski-reduce
    g = adj.mul(adj.t())
    d2 = det * det
    a = SymRat2(Fraction(g.a, d2), Fraction(g.b, d2), Fraction(g.d, d2))
    red, _ = minkowski_reduce(a)
    det_a = float(red.det())
    # columns of U must each have small form value, so enumerate the ellipse
    # A[x, y] <= bound first and combine pairs with determinant +-1
    xmax = int(math.sqrt(bound * float(red.a22) / det_a)) + 1
    ymax = int(math.sqrt(bound * float(red.a11) / det_a)) + 1
    vecs = []
    for x in range(-xmax, xmax + 1):
        for y in range(-ymax, ymax + 1):
            val = float(red.evaluate(x, y))
            if val <= bound:
                vecs.append((x, y, val))
    short = 0
    weighted = 0.0
    for (u1, u2, uval) in vecs:
        for (v1, v2, vval) in vecs:
            if u1 * v2 - u2 * v1 not in (1, -1):
                continue
            tr = uval + vval
            if tr <= 1.0:
                short += 1
            elif tr <= bound:
                weighted += det_a ** 1.25 * tr ** -1.5
    return MinkowskiSample(
        matrix=red,
        short_count=short,
        short_constant=short * math.sqrt(det_a),
        weighted_sum=weighted,
        weighted_constant=weighted / det_a ** 0.75,
    )
