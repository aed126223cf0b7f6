"""Finite exponential sums: symplectic Kloosterman sums, Salie sums,
Gauss sums, the congruence counter, and the twisted character average.

Every summand has a phase that is an exact rational reduced mod 1 before a
complex exponential is evaluated: phases are tallied as integer numerators
against a fixed denominator and the final value is a multiplicity-weighted
sum over precomputed roots of unity, accumulated in a fixed index order.
Results are therefore bit-reproducible and independent of thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .matcore import (
    GaussianInt,
    HalfIntegralForm,
    IntMat2,
    SingularModulusError,
    gaussian_totient,
    is_go2,
    is_prime,
    kronecker,
)
from . import sp4


@dataclass(frozen=True)
class SumValue:
    """Value of a finite exponential sum.

    ``terms`` counts the unit-modulus summands, so |value| <= terms always;
    ``method`` records which evaluation route produced the value.
    """

    value: complex
    terms: int
    method: str


@lru_cache(maxsize=None)
def _roots_of_unity(m: int) -> np.ndarray:
    w = np.exp(2j * np.pi * np.arange(m) / m)
    w.setflags(write=False)
    return w


def _tally_value(numerators: np.ndarray, m: int, threads: int = 1) -> complex:
    """sum of e(n/m) over the numerator array, via integer multiplicity counts."""
    if threads > 1 and len(numerators) >= 4 * threads:
        chunks = np.array_split(numerators, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = sum(pool.map(lambda ch: np.bincount(ch, minlength=m), chunks))
    else:
        counts = np.bincount(numerators, minlength=m)
    return complex(np.dot(counts, _roots_of_unity(m)))


def _form_vector(q: HalfIntegralForm, t: HalfIntegralForm) -> np.ndarray:
    return np.array([q.t1, q.t2, q.t4, t.t1, t.t2, t.t4], dtype=np.int64)


def kloosterman(q: HalfIntegralForm, t: HalfIntegralForm, c: IntMat2,
                threads: int = 1) -> SumValue:
    """Symplectic Kloosterman sum K(Q, T; C) by direct coset summation.

    Sums e(tr(A C^{-1} Q + C^{-1} D T)) over one representative D per
    bottom-row coset of modulus C, with A a symplectic completion.  The
    summand does not depend on the choice of A: two completions differ by
    A -> A + S C with S symmetric integral, shifting the phase by the
    integer tr(S Q).
    """
    if c.det() == 0:
        raise SingularModulusError("singular modulus")
    data = sp4.coset_data(c)
    nums = (data.weights @ _form_vector(q, t)) % data.m
    value = _tally_value(nums, data.m, threads)
    return SumValue(value=value, terms=data.count, method="brute")


@lru_cache(maxsize=None)
def _pI_grid(p: int):
    """Arrays (d1, d2, d4, inv(delta)) over the triples mod p with p∤delta."""
    d1, d2, d4 = np.meshgrid(np.arange(p), np.arange(p), np.arange(p),
                             indexing="ij")
    d1, d2, d4 = (x.ravel().astype(np.int64) for x in (d1, d2, d4))
    delta = (d1 * d4 - d2 * d2) % p
    keep = delta != 0
    d1, d2, d4, delta = d1[keep], d2[keep], d4[keep], delta[keep]
    inv_table = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv_table[x] = pow(x, p - 2, p)
    grids = (d1, d2, d4, inv_table[delta])
    for g in grids:
        g.setflags(write=False)
    return grids


def kloosterman_pI(q: HalfIntegralForm, t: HalfIntegralForm, p: int,
                   threads: int = 1) -> SumValue:
    """K(Q, T; pI) for prime p via the explicit three-variable sum.

    For C = pI the cosets are the symmetric D = [[d1, d2], [d2, d4]] mod p
    with delta = d1*d4 - d2^2 invertible, the completion is
    A = inv(delta) * adj(D), and the phase collapses to

        ( inv(delta) (d4 q1 - d2 q2 + d1 q4) + d1 t1 + d2 t2 + d4 t4 ) / p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    d1, d2, d4, invd = _pI_grid(p)
    nums = (invd * (d4 * q.t1 - d2 * q.t2 + d1 * q.t4)
            + d1 * t.t1 + d2 * t.t2 + d4 * t.t4) % p
    value = _tally_value(nums, p, threads)
    return SumValue(value=value, terms=len(nums), method="pI-formula")


def kloosterman_factored(q: HalfIntegralForm, t: HalfIntegralForm, n: int,
                         c: IntMat2, bezout: tuple[int, int] | None = None,
                         threads: int = 1) -> SumValue:
    """K(Q, T; N*C) factored through coprime moduli N*I and C.

    With s*N + t*det(C) = 1 and X = t*det(C)*C^{-1} = t*adj(C), the sum
    splits as K(X Q X^T, T; N*I) * K(s^2 Q, T; C).  The value does not
    depend on the Bezout pair; pass ``bezout`` to pin one explicitly.
    """
    if not is_prime(n):
        raise ValueError(f"{n} is not prime")
    cdet = c.det()
    if cdet == 0:
        raise SingularModulusError("singular modulus")
    if math.gcd(cdet, n) != 1:
        raise ValueError("modulus not coprime")
    if bezout is None:
        g, s, tt = _xgcd(n, cdet)
        assert g == 1
    else:
        s, tt = bezout
        if s * n + tt * cdet != 1:
            raise ValueError("invalid Bezout pair")
    x = c.adj().scale(tt)  # t * det(C) * C^{-1}
    q_left = q.conjugate_right(x)         # X Q X^T
    q_right = q.scale(s * s)              # s^2 Q
    k1 = kloosterman(q_left, t, IntMat2.scalar(n), threads=threads)
    k2 = kloosterman(q_right, t, c, threads=threads)
    return SumValue(value=k1.value * k2.value, terms=k1.terms * k2.terms,
                    method="factored")


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def salie(p: HalfIntegralForm, s: HalfIntegralForm, c: int,
          sign: int) -> SumValue:
    """Salie-type sum H^{+/-}(P, S; c).

    Vanishes unless s4 == p4.  Otherwise sums, over d1 mod c coprime to c
    and d2 mod c,

        e( (inv(d1) (s4 d2^2 -/+ p2 d2 + p1) + s2 d2 + d1 s1) / c )

    times the constant non-integral phase e( -/+ p2 s2 / (2 c s4) ), where
    the upper signs belong to sign = +1.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if c < 1:
        raise ValueError("c must be >= 1")
    if s.t4 != p.t4:
        return SumValue(0j, 0, "salie")
    if s.t4 == 0:
        raise ValueError("s4 must be nonzero")
    nums = []
    for d1 in range(c):
        if math.gcd(d1, c) != 1:
            continue
        d1bar = 0 if c == 1 else pow(d1, -1, c)
        base = d1bar * p.t1 + d1 * s.t1
        for d2 in range(c):
            num = (d1bar * (s.t4 * d2 * d2 - sign * p.t2 * d2)
                   + s.t2 * d2 + base) % c
            nums.append(num)
    value = _tally_value(np.array(nums, dtype=np.int64), c)
    offset = Fraction(-sign * p.t2 * s.t2, 2 * c * s.t4) % 1
    value *= complex(np.exp(2j * np.pi * float(offset)))
    return SumValue(value=value, terms=len(nums), method="salie")


def gauss_sum(a: int, b: int, c: int) -> SumValue:
    """Quadratic Gauss sum: sum over x mod c of e((a x^2 + b x)/c)."""
    if c < 1:
        raise ValueError("c must be >= 1")
    nums = np.array([(a * x * x + b * x) % c for x in range(c)], dtype=np.int64)
    return SumValue(value=_tally_value(nums, c), terms=c, method="brute")


def congruence_count(n: int, c1: int, c2: int, c4: int, h1: int, h2: int,
                     a: int, b: int) -> int:
    """Solutions (d1, d2, d4) mod N of the linked pair of congruences.

    Counts triples with delta = d1 d4 - d2^2 nonzero mod N satisfying
    h1 == a (d1 + d4) and delta * h2 == b (d4 c1 - d2 c2 + d1 c4) mod N.
    In the main case (h1 == h2 == 0, c1 == c4, c2 == 0 mod N) the count is
    exactly N^2 - 2N; otherwise it is at most N + 1.
    """
    if not is_prime(n) or n % 4 != 3:
        raise ValueError("N must be a prime congruent to 3 mod 4")
    if (4 * c1 * c4 - c2 * c2) % n == 0:
        raise ValueError("4 c1 c4 - c2^2 must be nonzero mod N")
    if math.gcd(a, n) != 1 or math.gcd(b, n) != 1:
        raise ValueError("a, b must be coprime to N")
    count = 0
    for d1 in range(n):
        for d4 in range(n):
            if (h1 - a * (d1 + d4)) % n:
                continue
            lin = b * (d4 * c1 + d1 * c4)
            base = d1 * d4
            for d2 in range(n):
                delta = (base - d2 * d2) % n
                if delta == 0:
                    continue
                if (delta * h2 - lin + b * d2 * c2) % n == 0:
                    count += 1
    return count


def twisted_average(c: IntMat2, q1: int, q2: int) -> SumValue:
    """Character-twisted average of K(mu2 I, mu1 I; C) over a GO2 modulus.

    Computes sum over mu1 mod lcm(|q1|, det C), mu2 mod lcm(|q2|, det C) of
    chi_{q1}(mu1) chi_{q2}(mu2) K(mu2 I, mu1 I; C) by brute force and checks
    it against the closed form delta_{q1=q2=1} |det C|^2 phi(x + i y),
    where C = [[x, y], [-/+ y, +/- x]] and phi is the totient on Z[i].
    """
    if not is_go2(c):
        raise ValueError("modulus is not in GO2(Z)")
    cdet = abs(c.det())
    m1 = math.lcm(abs(q1), cdet)
    m2 = math.lcm(abs(q2), cdet)
    data = sp4.coset_data(c)
    total = 0j
    terms = 0
    for mu1 in range(m1):
        ch1 = kronecker(q1, mu1)
        if ch1 == 0:
            continue
        for mu2 in range(m2):
            ch2 = kronecker(q2, mu2)
            if ch2 == 0:
                continue
            v = np.array([mu2, 0, mu2, mu1, 0, mu1], dtype=np.int64)
            nums = (data.weights @ v) % data.m
            total += ch1 * ch2 * _tally_value(nums, data.m)
            terms += data.count
    expected = 0j
    if q1 == 1 and q2 == 1:
        expected = complex(cdet * cdet * gaussian_totient(GaussianInt(c.a, c.b)))
    if abs(total - expected) > 1e-9 * max(1.0, abs(expected)):
        raise ArithmeticError(
            f"twisted average {total} deviates from closed form {expected}")
    return SumValue(value=total, terms=terms, method="brute")
