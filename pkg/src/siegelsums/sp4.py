"""Sp4(Z) bottom rows: predicates, coset enumeration, symplectic completion.

A pair of integer 2x2 matrices (C, D) is the bottom block-row of some
element of Sp4(Z) exactly when C^{-1} D is symmetric and the 2x4 block
(C D) has coprime 2x2 minors.  The Kloosterman sums in :mod:`expsums` run
over such D modulo the lattice C * Lambda of symmetric translates; this
module enumerates canonical representatives and produces, for each, a
completion (A, B) making the full 4x4 block matrix symplectic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .matcore import (
    IntMat2,
    SingularModulusError,
    solve_integer_system,
)


class CompletionError(ValueError):
    """Raised when (C, D) is not a symplectic bottom row."""


@dataclass(frozen=True)
class BottomPair:
    c: IntMat2
    d: IntMat2


@dataclass(frozen=True)
class SymplecticCompletion:
    a: IntMat2
    b: IntMat2


def is_symplectic(m: list[list[int]]) -> bool:
    """True iff the 4x4 integer matrix satisfies M^T J M = J."""
    j = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
    mt_j_m = _mat4_mul(_mat4_mul(_mat4_transpose(m), j), m)
    return mt_j_m == j


def _mat4_mul(x, y):
    return [[sum(x[i][k] * y[k][j] for k in range(4)) for j in range(4)]
            for i in range(4)]


def _mat4_transpose(x):
    return [[x[j][i] for j in range(4)] for i in range(4)]


def blocks_to_mat4(a: IntMat2, b: IntMat2, c: IntMat2, d: IntMat2):
    return [
        [a.a, a.b, b.a, b.b],
        [a.c, a.d, b.c, b.d],
        [c.a, c.b, d.a, d.b],
        [c.c, c.d, d.c, d.d],
    ]


def minor_gcd(c: IntMat2, d: IntMat2) -> int:
    """gcd of the six 2x2 minors of the 2x4 block (C D)."""
    cols = [(c.a, c.c), (c.b, c.d), (d.a, d.c), (d.b, d.d)]
    g = 0
    for i in range(4):
        for j in range(i + 1, 4):
            g = math.gcd(g, cols[i][0] * cols[j][1] - cols[i][1] * cols[j][0])
    return g


def is_bottom_pair(c: IntMat2, d: IntMat2) -> bool:
    """C^{-1} D symmetric and (C D) primitive; requires det C != 0."""
    if c.det() == 0:
        raise SingularModulusError("singular modulus")
    # C^{-1} D symmetric <=> adj(C) D symmetric (scalar multiple)
    if not c.adj().mul(d).is_symmetric():
        return False
    return minor_gcd(c, d) == 1


def complete_to_symplectic(c: IntMat2, d: IntMat2) -> SymplecticCompletion:
    """Some (A, B) with [[A, B], [C, D]] in Sp4(Z).

    Scalar moduli C = n*I use the closed form A = inv(det D mod n) * adj(D);
    otherwise the six linear conditions (A^T D - C^T B = I plus the two
    symmetry constraints) are solved exactly over the integers.
    """
    if c.det() == 0 or not is_bottom_pair(c, d):
        raise CompletionError("not a symplectic bottom row")
    if c.is_scalar():
        a_mat, b_mat = _complete_scalar(c.a, d)
    else:
        a_mat, b_mat = _complete_generic(c, d)
    assert is_symplectic(blocks_to_mat4(a_mat, b_mat, c, d))
    return SymplecticCompletion(a_mat, b_mat)


def _complete_scalar(n: int, d: IntMat2) -> tuple[IntMat2, IntMat2]:
    # primitivity of (nI, D) forces D symmetric with det D invertible mod n
    nn = abs(n)
    dbar = 0 if nn == 1 else pow(d.det() % nn, -1, nn)
    a = d.adj().scale(dbar)
    rem = a.t().mul(d).add(IntMat2.identity().neg())
    assert all(x % n == 0 for x in rem.entries())
    b = IntMat2(*(x // n for x in rem.entries()))
    return a, b


def _complete_generic(c: IntMat2, d: IntMat2) -> tuple[IntMat2, IntMat2]:
    # unknowns z = (a1, a2, a3, a4, b1, b2, b3, b4)
    # A^T D - C^T B = I, (A^T C) symmetric, (B^T D) symmetric
    rows = [
        # (A^T D)_11 - (C^T B)_11 = 1
        [d.a, 0, d.c, 0, -c.a, 0, -c.c, 0],
        # (A^T D)_12 - (C^T B)_12 = 0
        [d.b, 0, d.d, 0, 0, -c.a, 0, -c.c],
        # (A^T D)_21 - (C^T B)_21 = 0
        [0, d.a, 0, d.c, -c.b, 0, -c.d, 0],
        # (A^T D)_22 - (C^T B)_22 = 1
        [0, d.b, 0, d.d, 0, -c.b, 0, -c.d],
        # (A^T C)_12 - (A^T C)_21 = 0
        [c.b, -c.a, c.d, -c.c, 0, 0, 0, 0],
        # (B^T D)_12 - (B^T D)_21 = 0
        [0, 0, 0, 0, d.b, -d.a, d.d, -d.c],
    ]
    rhs = [1, 0, 0, 1, 0, 0]
    z = solve_integer_system(rows, rhs)
    if z is None:  # cannot happen for a genuine bottom pair
        raise CompletionError("not a symplectic bottom row")
    a = IntMat2(z[0], z[1], z[2], z[3])
    b = IntMat2(z[4], z[5], z[6], z[7])
    return a, b


def enumerate_bottom_cosets(c: IntMat2) -> list[IntMat2]:
    """One D per coset of {(C, D) bottom pair} modulo D ~ D + C*S, S symmetric.

    The coset key is the symmetric rational P = C^{-1} D reduced to entries
    in [0, 1); representatives are emitted in lexicographic order of the
    numerator triple of P, so the output order is deterministic.
    """
    return [pair[0] for pair in _coset_pairs(c)]


@lru_cache(maxsize=None)
def _coset_pairs(c: IntMat2) -> tuple[tuple[IntMat2, IntMat2], ...]:
    """Cached (D, A) pairs for all bottom-row cosets of modulus C."""
    det = c.det()
    if det == 0:
        raise SingularModulusError("singular modulus")
    n = abs(det)
    out = []
    scalar = c.is_scalar()
    for p11 in range(n):
        for p12 in range(n):
            for p22 in range(n):
                # D = C P with P = [[p11, p12], [p12, p22]] / n
                e11 = c.a * p11 + c.b * p12
                if e11 % n:
                    continue
                e12 = c.a * p12 + c.b * p22
                if e12 % n:
                    continue
                e21 = c.c * p11 + c.d * p12
                if e21 % n:
                    continue
                e22 = c.c * p12 + c.d * p22
                if e22 % n:
                    continue
                d = IntMat2(e11 // n, e12 // n, e21 // n, e22 // n)
                if minor_gcd(c, d) != 1:
                    continue
                if scalar:
                    a, _ = _complete_scalar(c.a, d)
                else:
                    a, _ = _complete_generic(c, d)
                out.append((d, a))
    return tuple(out)


@dataclass(frozen=True)
class CosetData:
    """Per-coset phase coefficients for a Kloosterman modulus C.

    ``weights`` is an (n, 6) integer array w such that the summand phase for
    forms Q = (q1, q2, q4), T = (t1, t2, t4) is

        e( (w . (q1, q2, q4, t1, t2, t4)) / m ),    m = 2 |det C|,

    already folded by the sign of det C.
    """

    modulus: IntMat2
    m: int
    weights: np.ndarray
    count: int


def _phase_row(a: IntMat2, d: IntMat2, adj: IntMat2, m: int, sgn: int):
    e = a.mul(adj)   # A adj(C):   tr(E 2Q) = 2 e11 q1 + (e12 + e21) q2 + 2 e22 q4
    f = adj.mul(d)   # adj(C) D:   tr(F 2T) likewise
    return [
        (sgn * 2 * e.a) % m,
        (sgn * (e.b + e.c)) % m,
        (sgn * 2 * e.d) % m,
        (sgn * 2 * f.a) % m,
        (sgn * (f.b + f.c)) % m,
        (sgn * 2 * f.d) % m,
    ]


@lru_cache(maxsize=None)
def coset_data(c: IntMat2) -> CosetData:
    """Phase-coefficient table for all cosets of modulus C (cached)."""
    pairs = _coset_pairs(c)
    det = c.det()
    m = 2 * abs(det)
    sgn = 1 if det > 0 else -1
    adj = c.adj()
    rows = np.empty((len(pairs), 6), dtype=np.int64)
    for i, (d, a) in enumerate(pairs):
        rows[i] = _phase_row(a, d, adj, m, sgn)
        if __debug__ and i == 0:
            # well-definedness spot check: completions differ by A -> A + S C,
            # which must leave the phase row untouched mod m
            shifted = a.add(IntMat2(1, 1, 1, 0).mul(c))
            assert _phase_row(shifted, d, adj, m, sgn) == list(rows[i])
    rows.setflags(write=False)
    return CosetData(modulus=c, m=m, weights=rows, count=len(pairs))


def clear_caches() -> None:
    """Drop the memoized coset tables (used by determinism re-runs)."""
    _coset_pairs.cache_clear()
    coset_data.cache_clear()
