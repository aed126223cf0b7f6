"""Real Dirichlet characters via the Kronecker symbol, their Dirichlet
coefficients, and numeric L-values near the real axis.

L(s, chi_q) is evaluated through the Hurwitz-zeta decomposition
L(s, chi) = m^{-s} sum_{a mod m} chi(a) zeta(s, a/m) with Euler-Maclaurin
evaluation of the Hurwitz zeta; accuracy is ~1e-12 on the region used here
(Re s >= 1/4, |Im s| <= ~12, |s - 1| >= 1e-3).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .matcore import divisors, is_fundamental_discriminant, kronecker


class PoleError(ZeroDivisionError):
    """Evaluation at the pole of the Riemann zeta function."""


@dataclass(frozen=True)
class FundamentalDiscriminant:
    """1 or the discriminant of a quadratic field."""

    q: int

    def __post_init__(self):
        if not is_fundamental_discriminant(self.q):
            raise ValueError(f"{self.q} is not 1 or a fundamental discriminant")

    def chi(self, n: int) -> int:
        return kronecker(self.q, n)


@dataclass(frozen=True)
class LValue:
    s: complex
    value: complex
    method: str


# Bernoulli numbers B_2 .. B_24 for the Euler-Maclaurin correction
_BERNOULLI = [
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
    7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330,
    854513.0 / 138, -236364091.0 / 2730,
]
_EM_TERMS = 28


def _em_regular(s: complex, a: float) -> complex:
    """Everything in the Euler-Maclaurin formula except w^{1-s}/(s-1):
    zeta(s, a) = _em_regular(s, a) + w^{1-s}/(s-1), w = _EM_TERMS + a."""
    total = 0j
    for n in range(_EM_TERMS):
        total += (n + a) ** (-s)
    w = _EM_TERMS + a
    total += 0.5 * w ** (-s)
    poch = s
    wpow = w ** (-s - 1)
    fact = 2.0
    for i, b in enumerate(_BERNOULLI):
        total += b / fact * poch * wpow
        # advance (s)_{2i+1} -> (s)_{2i+3} and w^{-s-2i-1} -> w^{-s-2i-3}
        poch *= (s + 2 * i + 1) * (s + 2 * i + 2)
        wpow /= w * w
        fact *= (2 * i + 3) * (2 * i + 4)
    return total


def hurwitz_zeta(s: complex, a: float) -> complex:
    """zeta(s, a) = sum_{n >= 0} (n + a)^{-s} for 0 < a <= 1, s != 1."""
    if a <= 0 or a > 1:
        raise ValueError("a must satisfy 0 < a <= 1")
    if abs(s - 1) < 1e-14:
        raise PoleError("pole")
    w = _EM_TERMS + a
    return _em_regular(s, a) + w ** (1 - s) / (s - 1)


def _em_regular_vec(s: np.ndarray, a: float) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    total = np.zeros_like(s)
    for n in range(_EM_TERMS):
        total += np.exp(-s * math.log(n + a))
    w = _EM_TERMS + a
    lw = math.log(w)
    total += 0.5 * np.exp(-s * lw)
    poch = s.copy()
    wpow = np.exp((-s - 1) * lw)
    fact = 2.0
    for i, b in enumerate(_BERNOULLI):
        total += (b / fact) * poch * wpow
        poch = poch * (s + 2 * i + 1) * (s + 2 * i + 2)
        wpow = wpow / (w * w)
        fact *= (2 * i + 3) * (2 * i + 4)
    return total


def hurwitz_zeta_vec(s: np.ndarray, a: float) -> np.ndarray:
    """Vectorized Euler-Maclaurin Hurwitz zeta over an array of s values."""
    if a <= 0 or a > 1:
        raise ValueError("a must satisfy 0 < a <= 1")
    s = np.asarray(s, dtype=complex)
    w = _EM_TERMS + a
    return _em_regular_vec(s, a) + np.exp((1 - s) * math.log(w)) / (s - 1)


def _singular_stable(s: complex, w: float) -> complex:
    """(w^{1-s} - 1) / (s - 1), continuous through s = 1."""
    z = (1 - s) * math.log(w)
    if abs(z) < 1e-8:
        phi = 1.0 + z / 2 + z * z / 6
    else:
        phi = (cmath.exp(z) - 1) / z
    return -math.log(w) * phi


def character_period(q: int) -> int:
    """A period of n -> kronecker(q, n): |q| when q = 0, 1 mod 4, else 4|q|."""
    if q == 1:
        return 1
    return abs(q) if q % 4 in (0, 1) else 4 * abs(q)


def dirichlet_l(s: complex, q: int) -> LValue:
    """L(s, chi_q) with chi_q(n) = kronecker(q, n); q = 1 gives zeta(s).

    q may be any integer whose Kronecker character is of interest; the
    principal-character factors (e.g. q = 16) keep their imprimitive Euler
    factors.  Raises PoleError at s = 1 when the character is principal.
    Non-principal characters evaluate stably through s = 1: the Hurwitz
    1/(s-1) singularities cancel because the character values sum to zero.
    """
    s = complex(s)
    m = character_period(q)
    if m == 1:
        val = hurwitz_zeta(s, 1.0)  # raises PoleError at s = 1
    else:
        total = 0j
        char_sum = 0
        for a in range(1, m + 1):
            ch = kronecker(q, a)
            if ch:
                w = _EM_TERMS + a / m
                total += ch * (_em_regular(s, a / m) + _singular_stable(s, w))
                char_sum += ch
        if char_sum:
            if abs(s - 1) < 1e-14:
                raise PoleError("pole")
            total += char_sum / (s - 1)
        val = m ** (-s) * total
    if abs(val.imag) < 1e-14 and abs(s.imag) == 0:
        val = complex(val.real, 0.0)
    return LValue(s=s, value=val, method="euler-maclaurin")


def dirichlet_l_vec(s: np.ndarray, q: int) -> np.ndarray:
    """Vectorized L(s, chi_q) over an array of s values (s != 1 entrywise)."""
    s = np.asarray(s, dtype=complex)
    m = character_period(q)
    if m == 1:
        return hurwitz_zeta_vec(s, 1.0)
    total = np.zeros_like(s)
    char_sum = 0
    for a in range(1, m + 1):
        ch = kronecker(q, a)
        if ch:
            w = _EM_TERMS + a / m
            lw = math.log(w)
            total += ch * (_em_regular_vec(s, a / m)
                           + (np.exp((1 - s) * lw) - 1) / (s - 1))
            char_sum += ch
    if char_sum:
        total += char_sum / (s - 1)
    return np.exp(-s * math.log(m)) * total


def zeta(s: complex) -> complex:
    return dirichlet_l(s, 1).value


def zeta_gaussian(s: complex) -> complex:
    """Dedekind zeta of Q(i): zeta(s) * L(s, chi_{-4})."""
    return zeta(s) * dirichlet_l(s, -4).value


def r_coeff(q: int, n: int) -> float:
    """Dirichlet coefficient r_q(n) = chi_q(n) n^{-1/2} sum_{d | n} chi_{-4}(d).

    These are the coefficients of L(s + 1/2, chi_q) L(s + 1/2, chi_{-4q});
    for q = 1 that product is the shifted Dedekind zeta of Q(i).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ch = kronecker(q, n)
    if ch == 0:
        return 0.0
    return ch * sum(kronecker(-4, d) for d in divisors(n)) / math.sqrt(n)


def euler_product_l(s: complex, q: int, prime_count: int = 10_000) -> complex:
    """Truncated Euler product of L(s, chi_q) over the first ``prime_count``
    primes; a slowly-converging independent cross-check for Re s > 1."""
    total = 1.0 + 0j
    for p in _first_primes(prime_count):
        ch = kronecker(q, p)
        if ch:
            total /= (1 - ch * cmath.exp(-s * math.log(p)))
    return total


def _first_primes(count: int) -> list[int]:
    # sieve sized by the prime-counting asymptotics
    bound = max(30, int(count * (math.log(count) + math.log(math.log(count + 2)) + 1)) + 10)
    sieve = np.ones(bound, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(bound ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    primes = np.flatnonzero(sieve)[:count]
    return [int(p) for p in primes]
